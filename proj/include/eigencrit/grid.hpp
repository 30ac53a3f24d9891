#ifndef EIGENCRIT_GRID_HPP
#define EIGENCRIT_GRID_HPP

#include <memory>

#include "eigencrit/geometry.hpp"

namespace eigencrit {

/// Uniform grid embedding of a normalized domain. Node (i, j) sits at
/// (x0 + i*h, j*h); `index` maps nodes to unknowns (-1 for exterior or
/// removed nodes). Boundary fractions give the distance to the domain
/// boundary in units of h for each axis direction, in (0, 1].
struct Grid {
  double h = 0.0;
  double x0 = 0.0, y0 = 0.0;
  int nx = 0, ny = 0;  // node counts

  std::vector<int> index;          // nx*ny, unknown id or -1
  struct Frac { double e = 1, w = 1, n = 1, s = 1; };
  std::vector<Frac> frac;          // per unknown
  std::vector<int> unknown_node;   // unknown id -> node id
  std::shared_ptr<const NormalizedDomain> domain;

  int node(int i, int j) const { return j * nx + i; }
  double x(int i) const { return x0 + i * h; }
  double y(int j) const { return y0 + j * h; }
  int n_unknowns() const { return int(unknown_node.size()); }

  bool is_interior(int i, int j) const {
    return i >= 0 && i < nx && j >= 0 && j < ny && index[node(i, j)] >= 0;
  }

  /// Scatter a vector over unknowns to the full node array (zero elsewhere).
  std::vector<double> scatter(const std::vector<double>& u) const {
    std::vector<double> full(std::size_t(nx) * ny, 0.0);
    for (int k = 0; k < n_unknowns(); ++k) full[unknown_node[k]] = u[k];
    return full;
  }
};

/// Snap threshold: nodes closer than this fraction of h to the boundary are
/// treated as boundary nodes (removed from the unknowns).
inline constexpr double kFractionSnap = 1e-3;

namespace detail {

/// Fraction of h from (x, y) to the boundary along +-x, found by bisection
/// on the inside predicate (the horizontal slice of a convex set is an
/// interval, so there is a single crossing).
inline double x_fraction(const NormalizedDomain& dom, double x, double y,
                         double h, int dir) {
  double lo = 0.0, hi = 1.0;
  if (dom.inside(x + dir * h, y)) return 1.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dom.inside(x + dir * mid * h, y) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline Grid build_grid(const std::shared_ptr<const NormalizedDomain>& dom,
                       double h) {
  if (!(h <= 1.0 / 16.0 + 1e-12)) throw Error("build_grid: h must be <= 1/16");
  Grid g;
  g.h = h;
  g.domain = dom;
  g.x0 = dom->a();
  g.y0 = 0.0;
  g.nx = int(std::floor((dom->b() - dom->a()) / h + 1e-9)) + 1;
  g.ny = int(std::floor(1.0 / h + 1e-9)) + 1;
  g.index.assign(std::size_t(g.nx) * g.ny, -1);

  // interior mask
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (dom->inside(g.x(i), g.y(j))) g.index[g.node(i, j)] = 0;

  // fractions, with sub-threshold nodes snapped to removal
  std::vector<Grid::Frac> fr(std::size_t(g.nx) * g.ny);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int id = g.node(i, j);
      if (g.index[id] < 0) continue;
      const double x = g.x(i), yv = g.y(j);
      Grid::Frac f;
      f.n = std::min(1.0, (dom->f2(x) - yv) / h);
      f.s = std::min(1.0, (yv - dom->f1(x)) / h);
      f.e = (i + 1 < g.nx && g.index[g.node(i + 1, j)] >= 0)
                ? 1.0 : detail::x_fraction(*dom, x, yv, h, +1);
      f.w = (i - 1 >= 0 && g.index[g.node(i - 1, j)] >= 0)
                ? 1.0 : detail::x_fraction(*dom, x, yv, h, -1);
      const double fmin = std::min(std::min(f.e, f.w), std::min(f.n, f.s));
      if (fmin < kFractionSnap) {
        g.index[id] = -1;  // effectively on the boundary
        continue;
      }
      fr[id] = f;
    }
  }

  // number the unknowns
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int id = g.node(i, j);
      if (g.index[id] < 0) continue;
      g.index[id] = int(g.unknown_node.size());
      g.unknown_node.push_back(id);
      g.frac.push_back(fr[id]);
    }
  }
  if (g.unknown_node.empty())
    throw Error("build_grid: no interior nodes (h too coarse)");

  // reject grids that skip an x-slice of the domain between populated columns
  int first_col = g.nx, last_col = -1;
  std::vector<char> has(g.nx, 0);
  for (int k = 0; k < g.n_unknowns(); ++k) {
    const int i = g.unknown_node[k] % g.nx;
    has[i] = 1;
    first_col = std::min(first_col, i);
    last_col = std::max(last_col, i);
  }
  for (int i = first_col; i <= last_col; ++i)
    if (!has[i] && dom->height(g.x(i)) > 2.0 * h)
      throw Error("build_grid: h too coarse near x = " + std::to_string(g.x(i)));
  return g;
}

}  // namespace eigencrit

#endif  // EIGENCRIT_GRID_HPP
