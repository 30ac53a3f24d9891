#ifndef EIGENCRIT_GEOMETRY_HPP
#define EIGENCRIT_GEOMETRY_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <utility>

#include "eigencrit/common.hpp"

namespace eigencrit {

// ---------------------------------------------------------------------------
// Domain specification
// ---------------------------------------------------------------------------

enum class Family {
  Rectangle,
  PerturbedRectangle,
  Ellipse,
  Stadium,
  CustomHeightFunctions,
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Rectangle: return "rectangle";
    case Family::PerturbedRectangle: return "perturbed_rectangle";
    case Family::Ellipse: return "ellipse";
    case Family::Stadium: return "stadium";
    case Family::CustomHeightFunctions: return "custom_height_functions";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "rectangle") return Family::Rectangle;
  if (s == "perturbed_rectangle") return Family::PerturbedRectangle;
  if (s == "ellipse") return Family::Ellipse;
  if (s == "stadium") return Family::Stadium;
  if (s == "custom_height_functions") return Family::CustomHeightFunctions;
  throw Error("unknown family: " + s);
}

/// Left-cap profile phi for perturbed rectangles. phi:[0,1]->[0,inf) must be
/// Lipschitz and concave.
struct CapFunction {
  enum class Kind { Zero, Parabolic, Tent, Samples };
  Kind kind = Kind::Zero;
  double c = 0.0;                       // parabolic: c*y*(1-y); tent: c*min(y,1-y)
  std::vector<Pt> samples;              // (y, phi(y)) pairs, y increasing

  double operator()(double y) const {
    switch (kind) {
      case Kind::Zero: return 0.0;
      case Kind::Parabolic: return c * y * (1.0 - y);
      case Kind::Tent: return c * std::min(y, 1.0 - y);
      case Kind::Samples: {
        if (spline_.size() == 0) build();
        return std::max(0.0, spline_(y));
      }
    }
    return 0.0;
  }

  double max_value() const {
    double m = 0.0;
    for (int i = 0; i <= 4096; ++i) m = std::max(m, (*this)(i / 4096.0));
    return m;
  }

 private:
  void build() const {
    std::vector<double> xs, ys;
    for (const auto& p : samples) { xs.push_back(p.x); ys.push_back(p.y); }
    spline_ = MonotoneCubic(std::move(xs), std::move(ys));
  }
  mutable MonotoneCubic spline_;
};

struct DomainSpec {
  Family family = Family::Rectangle;
  double N = 4.0;            // x-extent parameter (right edge for perturbed rect)
  CapFunction phi;           // perturbed_rectangle only
  double axis_x = 2.0;       // ellipse semi-axis along x
  double axis_y = 0.5;       // ellipse semi-axis along y
  double angle = 0.0;        // pre-rotation applied before normalization
  // custom_height_functions: samples of f1, f2 over a shared x grid
  std::vector<double> custom_x, custom_f1, custom_f2;
};

// ---------------------------------------------------------------------------
// Normalized domain: convex region {f1(x) < y < f2(x)}, 0 <= f1 <= f2 <= 1,
// projection on the y-axis of length exactly 1.
// ---------------------------------------------------------------------------

struct ConvexityWitness {
  bool ok = true;
  Pt p, q, mid;       // violating pair and midpoint, when !ok
  double violation = 0.0;
};

class NormalizedDomain {
 public:
  /// Samples per unit length used for the dense height-function tables.
  static constexpr int kSamplesPerUnit = 4096;

  NormalizedDomain() = default;

  NormalizedDomain(double a, double b,
                   std::function<double(double)> f1,
                   std::function<double(double)> f2,
                   std::string family = "custom")
      : a_(a), b_(b), family_(std::move(family)) {
    if (!(b > a)) throw Error("NormalizedDomain: empty x-range");
    const int n = std::max(16, int((b - a) * kSamplesPerUnit)) + 1;
    std::vector<double> xs(n), lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      const double x = a + (b - a) * i / (n - 1);
      xs[i] = x;
      lo[i] = f1(x);
      hi[i] = f2(x);
    }
    f1_ = MonotoneCubic(xs, lo);
    f2_ = MonotoneCubic(std::move(xs), hi);
    check_invariants();
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double length() const { return b_ - a_; }  // projection on the x-axis

  double f1(double x) const { return f1_(clampx(x)); }
  double f2(double x) const { return f2_(clampx(x)); }
  double height(double x) const { return std::max(0.0, f2(x) - f1(x)); }

  bool inside(double x, double y) const {
    return x > a_ && x < b_ && y > f1(x) && y < f2(x);
  }

  const std::string& family() const { return family_; }

  /// Boundary sampled counterclockwise (lower curve left-to-right, then
  /// upper curve right-to-left). Endpoints with zero height are merged.
  std::vector<Pt> boundary_polygon(int per_side = 1024) const {
    std::vector<Pt> poly;
    poly.reserve(2 * per_side);
    for (int i = 0; i <= per_side; ++i) {
      const double x = a_ + length() * i / per_side;
      poly.push_back({x, f1(x)});
    }
    for (int i = per_side; i >= 0; --i) {
      const double x = a_ + length() * i / per_side;
      poly.push_back({x, f2(x)});
    }
    // drop consecutive duplicates (tips where f1 == f2)
    std::vector<Pt> out;
    for (const auto& p : poly)
      if (out.empty() || dist(out.back(), p) > 1e-12) out.push_back(p);
    if (out.size() > 1 && dist(out.front(), out.back()) < 1e-12) out.pop_back();
    return out;
  }

 private:
  double clampx(double x) const { return std::min(std::max(x, a_), b_); }

  void check_invariants() const {
    double hmax = 0.0;
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
      const double x = a_ + length() * i / n;
      const double lo = f1(x), hi = f2(x);
      if (lo < -1e-9 || hi > 1.0 + 1e-9 || lo > hi + 1e-9) {
        std::ostringstream os;
        os << "NormalizedDomain: height functions out of range at x=" << x
           << " (f1=" << lo << ", f2=" << hi << ")";
        throw Error(os.str());
      }
      hmax = std::max(hmax, hi - lo);
    }
    if (std::abs(hmax - 1.0) > 1e-6)
      throw Error("NormalizedDomain: max height is " + std::to_string(hmax) +
                  ", expected 1");
  }

  double a_ = 0.0, b_ = 1.0;
  MonotoneCubic f1_, f2_;
  std::string family_ = "custom";
};

// ---------------------------------------------------------------------------
// Convexity check (midpoint test on the sampled boundary)
// ---------------------------------------------------------------------------

inline ConvexityWitness check_convex(const NormalizedDomain& dom,
                                     double tol = 1e-8) {
  // Convexity of {f1 < y < f2} is equivalent to f1 concave-free from below
  // and f2 from above: chord midpoints of boundary points must stay inside.
  const auto poly = dom.boundary_polygon(512);
  const double diam_scale = std::hypot(dom.length(), 1.0);
  const std::size_t n = poly.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 256);
  for (std::size_t i = 0; i < n; i += stride) {
    for (std::size_t j = i + 1; j < n; j += stride) {
      const Pt m{0.5 * (poly[i].x + poly[j].x), 0.5 * (poly[i].y + poly[j].y)};
      double v = 0.0;
      if (m.x < dom.a()) v = dom.a() - m.x;
      else if (m.x > dom.b()) v = m.x - dom.b();
      else v = std::max({0.0, dom.f1(m.x) - m.y, m.y - dom.f2(m.x)});
      if (v > tol * diam_scale) return {false, poly[i], poly[j], m, v};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

namespace detail {

/// Sampled argmax of the cap (concave, so a scan suffices).
inline std::pair<double, double> cap_argmax(const CapFunction& phi) {
  double ystar = 0.5, best = -1.0;
  for (int i = 0; i <= 2048; ++i) {
    const double y = i / 2048.0;
    const double v = phi(y);
    if (v > best) { best = v; ystar = y; }
  }
  return {ystar, best};
}

/// Invert the concave cap on [0, argmax] and [argmax, 1]: returns the y
/// interval {phi > t} by bisection on each monotone piece.
inline std::pair<double, double> cap_level_interval(const CapFunction& phi,
                                                    double t, double ystar,
                                                    double best) {
  if (t >= best) return {ystar, ystar};
  auto bisect = [&](double lo, double hi, bool rising) {
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool above = phi(mid) > t;
      if (above == rising) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double y1 = (phi(0.0) > t) ? 0.0 : bisect(0.0, ystar, true);
  const double y2 = (phi(1.0) > t) ? 1.0 : bisect(ystar, 1.0, false);
  return {y1, y2};
}

inline void validate_cap(const CapFunction& phi) {
  // phi >= 0, concave (sampled second differences <= tol), Lipschitz.
  const int n = 512;
  const double dy = 1.0 / n;
  for (int i = 0; i <= n; ++i)
    if (phi(i * dy) < -1e-12) throw Error("cap function must be nonnegative");
  for (int i = 1; i < n; ++i) {
    const double d2 = phi((i + 1) * dy) - 2.0 * phi(i * dy) + phi((i - 1) * dy);
    if (d2 > 1e-8) {
      std::ostringstream os;
      os << "cap function not concave near y=" << i * dy
         << " (second difference " << d2 / (dy * dy) << ")";
      throw Error(os.str());
    }
  }
}

}  // namespace detail

inline NormalizedDomain make_family(const DomainSpec& spec) {
  switch (spec.family) {
    case Family::Rectangle: {
      if (spec.N < 1.0) throw Error("make_family: N must be >= 1");
      return NormalizedDomain(0.0, spec.N,
                              [](double) { return 0.0; },
                              [](double) { return 1.0; }, "rectangle");
    }
    case Family::PerturbedRectangle: {
      if (spec.N < 1.0) throw Error("make_family: N must be >= 1");
      detail::validate_cap(spec.phi);
      const CapFunction phi = spec.phi;
      const auto [ystar, pmax] = detail::cap_argmax(phi);
      if (pmax <= 0.0)  // degenerate cap: plain rectangle
        return NormalizedDomain(0.0, spec.N,
                                [](double) { return 0.0; },
                                [](double) { return 1.0; },
                                "perturbed_rectangle");
      auto lo = [phi, ystar, pmax = pmax](double x) {
        if (x >= 0.0) return 0.0;
        return detail::cap_level_interval(phi, -x, ystar, pmax).first;
      };
      auto hi = [phi, ystar, pmax = pmax](double x) {
        if (x >= 0.0) return 1.0;
        return detail::cap_level_interval(phi, -x, ystar, pmax).second;
      };
      return NormalizedDomain(-pmax, spec.N, lo, hi, "perturbed_rectangle");
    }
    case Family::Ellipse: {
      const double A = spec.axis_x, B = spec.axis_y;
      if (!(A > 0.0) || std::abs(B - 0.5) > 1e-12)
        throw Error("make_family: ellipse requires axis_y = 1/2 (unit height)");
      auto half = [A](double x) {
        const double t = std::max(0.0, 1.0 - (x / A) * (x / A));
        return 0.5 * std::sqrt(t);
      };
      return NormalizedDomain(-A, A,
                              [half](double x) { return 0.5 - half(x); },
                              [half](double x) { return 0.5 + half(x); },
                              "ellipse");
    }
    case Family::Stadium: {
      // straight section of length N-1 with semicircular caps of radius 1/2
      const double S = spec.N - 1.0;
      if (S < 0.0) throw Error("make_family: stadium needs N >= 1");
      auto half = [S](double x) {
        const double d = std::abs(x) - 0.5 * S;
        if (d <= 0.0) return 0.5;
        return std::sqrt(std::max(0.0, 0.25 - d * d));
      };
      return NormalizedDomain(-0.5 * spec.N, 0.5 * spec.N,
                              [half](double x) { return 0.5 - half(x); },
                              [half](double x) { return 0.5 + half(x); },
                              "stadium");
    }
    case Family::CustomHeightFunctions: {
      if (spec.custom_x.size() < 2) throw Error("custom family needs samples");
      MonotoneCubic lo(spec.custom_x, spec.custom_f1);
      MonotoneCubic hi(spec.custom_x, spec.custom_f2);
      NormalizedDomain dom(spec.custom_x.front(), spec.custom_x.back(),
                           [lo](double x) { return lo(x); },
                           [hi](double x) { return hi(x); },
                           "custom_height_functions");
      const auto w = check_convex(dom);
      if (!w.ok) {
        std::ostringstream os;
        os << "custom domain not convex: midpoint (" << w.mid.x << ", "
           << w.mid.y << ") of (" << w.p.x << ", " << w.p.y << ") and ("
           << w.q.x << ", " << w.q.y << ") lies outside by " << w.violation;
        throw Error(os.str());
      }
      return dom;
    }
  }
  throw Error("make_family: unknown family");
}

// ---------------------------------------------------------------------------
// Normalization of a convex point cloud (rotate to minimal width, dilate)
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Pt> convex_hull(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end(), [](const Pt& p, const Pt& q) {
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Pt& p, const Pt& q) {
              return p.x == q.x && p.y == q.y;
            }), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  auto cross = [](const Pt& o, const Pt& a, const Pt& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Pt> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

/// Width of the projection of `pts` onto direction (cos t, sin t).
inline double projection_width(const std::vector<Pt>& pts, double t) {
  const double c = std::cos(t), s = std::sin(t);
  double lo = std::numeric_limits<double>::max(), hi = -lo;
  for (const auto& p : pts) {
    const double v = c * p.x + s * p.y;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

/// Minimal-width direction over the hull (rotating calipers over edges).
inline double min_width_angle(const std::vector<Pt>& hull) {
  double best_w = std::numeric_limits<double>::max(), best_t = 0.0;
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Pt& p = hull[i];
    const Pt& q = hull[(i + 1) % n];
    const double et = std::atan2(q.y - p.y, q.x - p.x);
    const double t = et + kPi / 2.0;  // width measured normal to the edge
    const double w = projection_width(hull, t);
    if (w < best_w) { best_w = w; best_t = t; }
  }
  return best_t;
}

}  // namespace detail

/// Rotate so the minimal-width direction is the y-axis, dilate to height 1,
/// and rebuild the height functions from the hull.
inline NormalizedDomain normalize_domain(const std::vector<Pt>& cloud) {
  if (cloud.size() < 3) throw Error("normalize_domain: need >= 3 points");
  auto hull = detail::convex_hull(cloud);
  if (hull.size() < 3) throw Error("normalize_domain: degenerate input");
  const double t = detail::min_width_angle(hull);
  // rotate direction t onto the y-axis
  const double rot = kPi / 2.0 - t;
  const double c = std::cos(rot), s = std::sin(rot);
  for (auto& p : hull) {
    const double x = c * p.x - s * p.y;
    const double y = s * p.x + c * p.y;
    p = {x, y};
  }
  double ylo = 1e300, yhi = -1e300, xlo = 1e300, xhi = -1e300;
  for (const auto& p : hull) {
    ylo = std::min(ylo, p.y); yhi = std::max(yhi, p.y);
    xlo = std::min(xlo, p.x); xhi = std::max(xhi, p.x);
  }
  const double w = yhi - ylo;
  if (!(w > 0.0)) throw Error("normalize_domain: zero-area input");
  for (auto& p : hull) p = {(p.x - xlo) / w, (p.y - ylo) / w};
  const double bx = (xhi - xlo) / w;

  // height functions from the rescaled hull: for each x, min/max y on the hull
  auto yrange = [&hull](double x) -> std::pair<double, double> {
    double lo = 1e300, hi = -1e300;
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Pt& p = hull[i];
      const Pt& q = hull[(i + 1) % n];
      if ((p.x - x) * (q.x - x) <= 0.0 && p.x != q.x) {
        const double y = p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    if (lo > hi) return {0.5, 0.5};
    return {std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)};
  };
  return NormalizedDomain(0.0, bx,
                          [yrange](double x) { return yrange(x).first; },
                          [yrange](double x) { return yrange(x).second; },
                          "normalized_cloud");
}

inline NormalizedDomain normalize_domain(const NormalizedDomain& dom) {
  return normalize_domain(dom.boundary_polygon(2048));
}

// ---------------------------------------------------------------------------
// Eccentricity = diameter / inradius
// ---------------------------------------------------------------------------

namespace detail {

inline double polygon_diameter(const std::vector<Pt>& poly) {
  const auto hull = convex_hull(poly);
  double d = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j)
      d = std::max(d, dist(hull[i], hull[j]));
  return d;
}

inline double dist_to_polyline(const Pt& p, const std::vector<Pt>& poly) {
  double best = std::numeric_limits<double>::max();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Pt& a = poly[i];
    const Pt& b = poly[(i + 1) % n];
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, dist(p, {a.x + t * dx, a.y + t * dy}));
  }
  return best;
}

}  // namespace detail

/// Largest inscribed circle radius. The distance-to-boundary function of a
/// convex body is concave, so a coarse grid start plus pattern search is
/// sufficient.
inline double inradius(const NormalizedDomain& dom) {
  const auto poly = dom.boundary_polygon(1024);
  Pt best{0.5 * (dom.a() + dom.b()), 0.5};
  double bestd = -1.0;
  const int gx = 96, gy = 24;
  for (int i = 1; i < gx; ++i) {
    for (int j = 1; j < gy; ++j) {
      const double x = dom.a() + dom.length() * i / gx;
      const double y = double(j) / gy;
      if (!dom.inside(x, y)) continue;
      const double d = detail::dist_to_polyline({x, y}, poly);
      if (d > bestd) { bestd = d; best = {x, y}; }
    }
  }
  double step = std::max(dom.length() / gx, 1.0 / gy);
  while (step > 1e-9) {
    bool improved = false;
    for (const auto& [dx, dy] : std::initializer_list<std::pair<double, double>>{
             {step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
      const Pt q{best.x + dx, best.y + dy};
      if (!dom.inside(q.x, q.y)) continue;
      const double d = detail::dist_to_polyline(q, poly);
      if (d > bestd) { bestd = d; best = q; improved = true; }
    }
    if (!improved) step *= 0.5;
  }
  return bestd;
}

inline double diameter(const NormalizedDomain& dom) {
  return detail::polygon_diameter(dom.boundary_polygon(1024));
}

inline double eccentricity(const NormalizedDomain& dom) {
  const double r = inradius(dom);
  if (!(r > 0.0)) throw Error("eccentricity: degenerate domain");
  return diameter(dom) / r;
}

// ---------------------------------------------------------------------------
// The length scale L: fixed point of L -> |longest interval with
// h >= 1 - 1/L^2|, solved by bisection.
// ---------------------------------------------------------------------------

struct LengthScale {
  double L = 0.0;
  double interval_lo = 0.0, interval_hi = 0.0;  // leftmost longest interval
  bool in_bounds = true;                        // N^{1/3} <= L <= N
};

namespace detail {

/// Longest (leftmost) interval where height >= threshold, by dense scan with
/// linear refinement of the endpoints.
inline std::pair<double, double> longest_level_interval(
    const NormalizedDomain& dom, double thr) {
  const int n = std::max(4096, int(dom.length() * 512));
  const double dx = dom.length() / n;
  double best_lo = 0.0, best_hi = 0.0;
  int i = 0;
  while (i <= n) {
    if (dom.height(dom.a() + i * dx) >= thr) {
      int j = i;
      while (j + 1 <= n && dom.height(dom.a() + (j + 1) * dx) >= thr) ++j;
      double lo = dom.a() + i * dx, hi = dom.a() + j * dx;
      // refine both ends by bisection on h - thr
      auto refine = [&](double in, double out) {
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (in + out);
          (dom.height(mid) >= thr ? in : out) = mid;
        }
        return in;
      };
      if (i > 0) lo = refine(lo, lo - dx);
      if (j < n) hi = refine(hi, hi + dx);
      if (hi - lo > best_hi - best_lo) { best_lo = lo; best_hi = hi; }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return {best_lo, best_hi};
}

}  // namespace detail

inline LengthScale compute_L(const NormalizedDomain& dom,
                             double rel_tol = 1e-6) {
  const double N = dom.length();
  auto g = [&](double L) {
    const auto [lo, hi] = detail::longest_level_interval(dom, 1.0 - 1.0 / (L * L));
    return hi - lo;
  };
  double lo = std::cbrt(N), hi = N;
  // F(L) = g(L) - L is >= 0 at the left end and <= 0 at the right for
  // convex domains; g is nondecreasing in L.
  double Flo = g(lo) - lo, Fhi = g(hi) - hi;
  LengthScale out;
  if (Flo < -1e-9 * N) {
    // no fixed point in [N^{1/3}, N]: report the boundary value with a flag
    out.in_bounds = false;
    out.L = lo;
    const auto iv = detail::longest_level_interval(dom, 1.0 - 1.0 / (lo * lo));
    out.interval_lo = iv.first;
    out.interval_hi = iv.second;
    return out;
  }
  if (Fhi >= 0.0) {
    out.L = hi;
  } else {
    while ((hi - lo) / hi > rel_tol) {
      const double mid = 0.5 * (lo + hi);
      ((g(mid) - mid >= 0.0) ? lo : hi) = mid;
    }
    out.L = 0.5 * (lo + hi);
  }
  const auto iv =
      detail::longest_level_interval(dom, 1.0 - 1.0 / (out.L * out.L));
  out.interval_lo = iv.first;
  out.interval_hi = iv.second;
  out.in_bounds = out.L >= std::cbrt(N) - 1e-9 && out.L <= N + 1e-9;
  return out;
}

}  // namespace eigencrit

#endif  // EIGENCRIT_GEOMETRY_HPP
