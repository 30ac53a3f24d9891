#ifndef EIGENCRIT_CRITICAL_POINTS_HPP
#define EIGENCRIT_CRITICAL_POINTS_HPP

#include "eigencrit/scalar_field.hpp"

namespace eigencrit {

enum class CritKind { Max, Min, Saddle, Degenerate };

inline const char* crit_kind_name(CritKind k) {
  switch (k) {
    case CritKind::Max: return "max";
    case CritKind::Min: return "min";
    case CritKind::Saddle: return "saddle";
    case CritKind::Degenerate: return "degenerate";
  }
  return "?";
}

struct CriticalPoint {
  Pt p;
  double grad_norm = 0.0;
  double hxx = 0, hxy = 0, hyy = 0;
  CritKind kind = CritKind::Degenerate;
  int index = 0;  // +1 extremum, -1 saddle, 0 degenerate
};

struct Classification {
  CritKind kind;
  int index;
};

/// Hessian eigenvalue signs -> max/min (index +1) or saddle (index -1);
/// |det| below degeneracy_tol * ||H||^2 is flagged degenerate.
inline Classification classify(double hxx, double hxy, double hyy,
                               double degeneracy_tol = 1e-6) {
  const double det = hxx * hyy - hxy * hxy;
  const double norm2 = hxx * hxx + 2.0 * hxy * hxy + hyy * hyy;
  if (std::abs(det) < degeneracy_tol * norm2 || norm2 == 0.0)
    return {CritKind::Degenerate, 0};
  if (det < 0.0) return {CritKind::Saddle, -1};
  return {(hxx + hyy < 0.0) ? CritKind::Max : CritKind::Min, +1};
}

struct CriticalPointSearch {
  std::vector<CriticalPoint> points;
  std::vector<Pt> unresolved;  // Newton failures, reported not dropped
};

namespace detail {

/// Margin test: the four compass offsets must stay inside the domain.
inline bool inside_with_margin(const NormalizedDomain& dom, double x, double y,
                               double margin) {
  return dom.inside(x, y) && dom.inside(x + margin, y) &&
         dom.inside(x - margin, y) && dom.inside(x, y + margin) &&
         dom.inside(x, y - margin);
}

}  // namespace detail

/// Locate interior gradient zeros: coarse cell scan for sign changes of both
/// gradient components, Newton refinement on the interpolated gradient,
/// deduplication within 4h.
struct CriticalPointSearch;
inline CriticalPointSearch find_critical_points(const ScalarField& f,
                                                const NormalizedDomain& dom,
                                                double margin,
                                                double newton_tol,
                                                double degeneracy_tol);

/// Default margin of 2h from the boundary.
inline CriticalPointSearch find_critical_points(const ScalarField& f,
                                                const NormalizedDomain& dom) {
  return find_critical_points(f, dom, 2.0 * f.h(), 1e-9, 1e-6);
}

inline CriticalPointSearch find_critical_points(
    const ScalarField& f, const NormalizedDomain& dom,
    double margin, double newton_tol = 1e-9, double degeneracy_tol = 1e-6) {
  const double h = f.h();
  if (margin < 2.0 * h - 1e-12)
    throw Error("find_critical_points: margin must be >= 2h");

  double grad_scale = 0.0;
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      if (!dom.inside(f.x(i), f.y(j))) continue;
      const auto [gx, gy] = f.node_gradient(i, j);
      grad_scale = std::max(grad_scale, std::hypot(gx, gy));
    }
  if (grad_scale == 0.0) grad_scale = 1.0;

  CriticalPointSearch out;
  std::vector<Pt> raw;

  for (int j = 0; j + 1 < f.ny(); ++j) {
    for (int i = 0; i + 1 < f.nx(); ++i) {
      const double cx = f.x(i) + 0.5 * h, cy = f.y(j) + 0.5 * h;
      if (!detail::inside_with_margin(dom, cx, cy, margin)) continue;
      int sgx = 0, sgy = 0;
      bool flip_x = false, flip_y = false;
      for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di) {
          const auto [gx, gy] = f.node_gradient(i + di, j + dj);
          const int sx = gx > 0 ? 1 : (gx < 0 ? -1 : 0);
          const int sy = gy > 0 ? 1 : (gy < 0 ? -1 : 0);
          if (sx == 0) flip_x = true;
          else if (sgx == 0) sgx = sx;
          else if (sx != sgx) flip_x = true;
          if (sy == 0) flip_y = true;
          else if (sgy == 0) sgy = sy;
          else if (sy != sgy) flip_y = true;
        }
      if (!(flip_x && flip_y)) continue;

      // Newton on the interpolated gradient from the cell center
      Pt z{cx, cy};
      bool ok = false;
      for (int it = 0; it < 60; ++it) {
        const Jet2 jet = f.jet(z.x, z.y);
        if (jet.grad_norm() <= newton_tol * grad_scale) { ok = true; break; }
        const double det = jet.gxx * jet.gyy - jet.gxy * jet.gxy;
        if (det == 0.0) break;
        double dx = -(jet.gyy * jet.gx - jet.gxy * jet.gy) / det;
        double dy = -(-jet.gxy * jet.gx + jet.gxx * jet.gy) / det;
        const double step = std::hypot(dx, dy);
        if (step > h) { dx *= h / step; dy *= h / step; }  // damped
        z.x += dx;
        z.y += dy;
        if (std::hypot(z.x - cx, z.y - cy) > 6.0 * h) break;  // left the cell
      }
      if (!ok) {
        out.unresolved.push_back({cx, cy});
        continue;
      }
      if (!detail::inside_with_margin(dom, z.x, z.y, margin)) continue;
      raw.push_back(z);
    }
  }

  // merge coincident limits within radius 4h (mean of the cluster)
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    Pt acc = raw[i];
    int cnt = 1;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      if (dist(raw[i], raw[j]) <= 4.0 * h) {
        acc.x += raw[j].x;
        acc.y += raw[j].y;
        ++cnt;
        used[j] = true;
      }
    }
    const Pt mean{acc.x / cnt, acc.y / cnt};
    const Jet2 jet = f.jet(mean.x, mean.y);
    CriticalPoint cp;
    cp.p = mean;
    cp.grad_norm = jet.grad_norm();
    cp.hxx = jet.gxx;
    cp.hxy = jet.gxy;
    cp.hyy = jet.gyy;
    const auto cls = classify(jet.gxx, jet.gxy, jet.gyy, degeneracy_tol);
    cp.kind = cls.kind;
    cp.index = cls.index;
    out.points.push_back(cp);
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              return a.p.x < b.p.x;
            });
  return out;
}

}  // namespace eigencrit

#endif  // EIGENCRIT_CRITICAL_POINTS_HPP
