#ifndef EIGENCRIT_DEGREE_HPP
#define EIGENCRIT_DEGREE_HPP

#include <limits>

#include "eigencrit/level_curves.hpp"

namespace eigencrit {

/// The critical-point counting field
///   T(q) = (u_yy u_x - u_xy u_y, u_xx u_y - u_xy u_x);
/// its zeros are critical points of u or degenerate-Hessian points.
inline std::pair<double, double> vector_field_T(const ScalarField& f,
                                                const Pt& q) {
  const Jet2 j = f.jet(q.x, q.y);
  return {j.gyy * j.gx - j.gxy * j.gy, j.gxx * j.gy - j.gxy * j.gx};
}

using VectorField = std::function<std::pair<double, double>(const Pt&)>;

inline VectorField t_field(const ScalarField& f) {
  return [&f](const Pt& q) { return vector_field_T(f, q); };
}

inline VectorField gradient_field(const ScalarField& f) {
  return [&f](const Pt& q) {
    const Jet2 j = f.jet(q.x, q.y);
    return std::pair<double, double>{j.gx, j.gy};
  };
}

struct DegreeReport {
  std::vector<Pt> path;      // refined sample points, closed implicitly
  std::string field_tag;
  int winding = 0;
  double total_angle = 0.0;  // accumulated angle, should be 2*pi*winding
  double min_magnitude = 0.0;
  int refinements = 0;
  bool ok = false;
};

/// Winding number by angle accumulation: any step turning by >= pi/2 splits
/// the path segment until all steps are small or the refinement budget is
/// exhausted. A zero-free path at sample resolution certifies the integer.
inline DegreeReport winding_number(const VectorField& field,
                                   std::vector<Pt> path, int max_refine = 24,
                                   const std::string& tag = "") {
  DegreeReport rep;
  rep.field_tag = tag;
  if (path.size() < 3) throw Error("winding_number: need a closed path");
  if (dist(path.front(), path.back()) > 1e-12) path.push_back(path.front());

  std::vector<std::pair<double, double>> vals(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) vals[i] = field(path[i]);

  auto mag = [](const std::pair<double, double>& v) {
    return std::hypot(v.first, v.second);
  };
  auto angle_step = [](const std::pair<double, double>& a,
                       const std::pair<double, double>& b) {
    return std::atan2(a.first * b.second - a.second * b.first,
                      a.first * b.first + a.second * b.second);
  };

  rep.min_magnitude = std::numeric_limits<double>::max();
  for (const auto& v : vals) rep.min_magnitude = std::min(rep.min_magnitude, mag(v));
  if (rep.min_magnitude < 1e-10)
    throw Error("winding_number: path touches the zero set");

  // adaptive pass: insert midpoints where the turn is too large
  for (int round = 0; round < max_refine; ++round) {
    bool refined = false;
    std::vector<Pt> np;
    std::vector<std::pair<double, double>> nv;
    np.push_back(path[0]);
    nv.push_back(vals[0]);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (std::abs(angle_step(vals[i], vals[i + 1])) >= kPi / 2.0) {
        const Pt mid{0.5 * (path[i].x + path[i + 1].x),
                     0.5 * (path[i].y + path[i + 1].y)};
        const auto v = field(mid);
        if (mag(v) < 1e-10)
          throw Error("winding_number: path touches the zero set");
        rep.min_magnitude = std::min(rep.min_magnitude, mag(v));
        np.push_back(mid);
        nv.push_back(v);
        refined = true;
        ++rep.refinements;
      }
      np.push_back(path[i + 1]);
      nv.push_back(vals[i + 1]);
    }
    path.swap(np);
    vals.swap(nv);
    if (!refined) break;
    if (round + 1 == max_refine)
      throw Error("winding_number: refinement budget exhausted");
  }

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    total += angle_step(vals[i], vals[i + 1]);
  rep.total_angle = total;
  rep.winding = int(std::lround(total / (2.0 * kPi)));
  rep.ok = std::abs(total / (2.0 * kPi) - rep.winding) < 1e-6;
  rep.path = std::move(path);
  return rep;
}

inline std::vector<Pt> circle_path(const Pt& center, double r, int n = 64) {
  std::vector<Pt> path;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    path.push_back({center.x + r * std::cos(t), center.y + r * std::sin(t)});
  }
  return path;
}

// ---------------------------------------------------------------------------
// Degree of T over the half-domain past the nodal line
// ---------------------------------------------------------------------------

namespace detail {

/// Clip a polygon by the half-plane {n . p <= d} (Sutherland-Hodgman).
inline std::vector<Pt> clip_halfplane(const std::vector<Pt>& poly, double nxv,
                                      double nyv, double d) {
  std::vector<Pt> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Pt& a = poly[i];
    const Pt& b = poly[(i + 1) % n];
    const double da = nxv * a.x + nyv * a.y - d;
    const double db = nxv * b.x + nyv * b.y - d;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0) != (db < 0.0) && da != db) {
      const double t = da / (da - db);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

/// Inward offset of a convex polygon by eps: intersect the half-planes of
/// all edges moved inward. Sample edges are deduplicated by normal angle.
inline std::vector<Pt> inset_convex_polygon(const std::vector<Pt>& poly,
                                            double eps) {
  std::vector<Pt> cur = poly;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n && !cur.empty(); ++i) {
    const Pt& a = poly[i];
    const Pt& b = poly[(i + 1) % n];
    const double ex = b.x - a.x, ey = b.y - a.y;
    const double len = std::hypot(ex, ey);
    if (len < 1e-14) continue;
    // CCW polygon: outward normal is (ey, -ex)/len
    const double nxv = ey / len, nyv = -ex / len;
    const double d = nxv * a.x + nyv * a.y - eps;
    cur = clip_halfplane(cur, nxv, nyv, d);
  }
  return cur;
}

}  // namespace detail

enum class Side { Right, Left };

/// Boundary polygon of (domain cut at the vertical line x = xc on the given
/// side), inset by eps, counterclockwise.
inline std::vector<Pt> inset_region_path(const NormalizedDomain& dom,
                                         Side side, double xc, double eps,
                                         int per_side = 512,
                                         double x_far = std::numeric_limits<double>::quiet_NaN()) {
  auto poly = dom.boundary_polygon(per_side);
  if (side == Side::Right) {
    poly = detail::clip_halfplane(poly, -1.0, 0.0, -xc);  // keep x >= xc
    if (std::isfinite(x_far)) poly = detail::clip_halfplane(poly, 1.0, 0.0, x_far);
  } else {
    poly = detail::clip_halfplane(poly, 1.0, 0.0, xc);    // keep x <= xc
    if (std::isfinite(x_far)) poly = detail::clip_halfplane(poly, -1.0, 0.0, -x_far);
  }
  if (poly.size() < 3) throw Error("inset_region_path: empty cut region");
  poly = detail::inset_convex_polygon(poly, eps);
  if (poly.size() < 3) throw Error("inset_region_path: inset emptied region");
  return poly;
}

namespace detail {

/// Outermost abscissa (on the given side of xc) where the sampled mode is
/// still resolved: column max of |f| at least rel_floor times the global max.
/// Toward a pinched end the mode decays exponentially and its grid values sink
/// below the eigensolver residual; T computed from noise can point anywhere,
/// so the enclosing contour must stop short of that zone.  On the midline the
/// field reduces to (u_yy u_x, 0) with u monotone past its extremum, so the
/// cut removes no zeros of T and the degree is unchanged.
inline double resolved_extent(const ScalarField& f, Side side, double xc,
                              double rel_floor = 1e-6) {
  double gmax = 0.0;
  for (double v : f.values()) gmax = std::max(gmax, std::abs(v));
  const int dir = side == Side::Right ? 1 : -1;
  int i0 = int(std::lround((xc - f.x(0)) / f.h()));
  i0 = std::clamp(i0, 0, f.nx() - 1);
  double x_far = xc;
  for (int i = i0; i >= 0 && i < f.nx(); i += dir) {
    double cmax = 0.0;
    for (int j = 0; j < f.ny(); ++j)
      cmax = std::max(cmax, std::abs(f.node_value(i, j)));
    if (cmax < rel_floor * gmax) break;
    x_far = f.x(i);
  }
  return x_far;
}

}  // namespace detail

/// Winding of T along the inset boundary of the half-domain beyond the
/// (recentered) nodal line; the expected value is 1 for the second mode.
/// The far end of the region is truncated where the mode decays below the
/// numerically resolved range (see detail::resolved_extent).
/// A zero of T on the path triggers automatic inset growth up to 8h.
inline DegreeReport region_degree_T(const ScalarField& f,
                                    const NormalizedDomain& dom, Side side,
                                    double center_x, double eps) {
  const double h = f.h();
  if (eps < 2.0 * h - 1e-12) throw Error("region_degree_T: eps must be >= 2h");
  const double xc = center_x + (side == Side::Right ? 0.5 : -0.5);
  const double x_far = detail::resolved_extent(f, side, xc);
  std::string last;
  for (double e = eps; e <= 8.0 * h + 1e-12; e += h) {
    const auto path = inset_region_path(dom, side, xc, e, 512, x_far);
    try {
      return winding_number(t_field(f), path, 24,
                            side == Side::Right ? "T:right" : "T:left");
    } catch (const Error& err) {
      last = err.what();
    }
  }
  throw Error("region_degree_T: " + last);
}

}  // namespace eigencrit

#endif  // EIGENCRIT_DEGREE_HPP
