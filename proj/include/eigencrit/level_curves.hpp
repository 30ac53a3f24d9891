#ifndef EIGENCRIT_LEVEL_CURVES_HPP
#define EIGENCRIT_LEVEL_CURVES_HPP

#include <map>

#include "eigencrit/scalar_field.hpp"

namespace eigencrit {

/// Polyline piece of a level set.
struct NodalCurve {
  std::vector<Pt> pts;
  bool closed = false;
  std::vector<Pt> boundary_contacts;  // for open curves, projected endpoints

  double width() const {
    double lo = std::numeric_limits<double>::max(), hi = -lo;
    for (const auto& p : pts) { lo = std::min(lo, p.x); hi = std::max(hi, p.x); }
    return pts.empty() ? 0.0 : hi - lo;
  }
  double length() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += dist(pts[i], pts[i + 1]);
    return s;
  }
};

using NodeMask = std::function<bool(int, int)>;

namespace detail {

// edge keys: 2*node for the horizontal edge leaving (i,j) eastwards,
// 2*node+1 for the vertical edge leaving northwards
inline long hedge(int i, int j, int nx) { return 2L * (long(j) * nx + i); }
inline long vedge(int i, int j, int nx) { return 2L * (long(j) * nx + i) + 1; }

struct Seg { long a, b; };

}  // namespace detail

/// Marching squares with linear edge interpolation over cells whose four
/// corners satisfy `mask`. Ambiguous saddle cells are resolved by sampling
/// the bicubic interpolant at the cell center. Exact-zero corner values are
/// treated as positive so the zero set stays one-dimensional.
inline std::vector<NodalCurve> extract_level_curves(
    const ScalarField& f, double level = 0.0,
    const NodeMask& mask = nullptr) {
  const int nx = f.nx(), ny = f.ny();
  const double h = f.h();
  auto ok = [&](int i, int j) { return !mask || mask(i, j); };
  auto val = [&](int i, int j) { return f.node_value(i, j) - level; };
  auto pos = [&](double v) { return v >= 0.0; };

  std::vector<detail::Seg> segs;
  std::map<long, Pt> verts;
  auto cut = [&](long key, int i0, int j0, int i1, int j1) {
    const double va = val(i0, j0), vb = val(i1, j1);
    const double t = va / (va - vb);
    verts[key] = {f.x(i0) + t * (f.x(i1) - f.x(i0)),
                  f.y(j0) + t * (f.y(j1) - f.y(j0))};
  };

  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      if (!(ok(i, j) && ok(i + 1, j) && ok(i, j + 1) && ok(i + 1, j + 1)))
        continue;
      const double v00 = val(i, j), v10 = val(i + 1, j);
      const double v01 = val(i, j + 1), v11 = val(i + 1, j + 1);
      const int c = (pos(v00) ? 1 : 0) | (pos(v10) ? 2 : 0) |
                    (pos(v01) ? 4 : 0) | (pos(v11) ? 8 : 0);
      if (c == 0 || c == 15) continue;
      const long eS = detail::hedge(i, j, nx);
      const long eN = detail::hedge(i, j + 1, nx);
      const long eW = detail::vedge(i, j, nx);
      const long eE = detail::vedge(i + 1, j, nx);
      auto addseg = [&](long a, long b) { segs.push_back({a, b}); };
      auto cutS = [&] { cut(eS, i, j, i + 1, j); };
      auto cutN = [&] { cut(eN, i, j + 1, i + 1, j + 1); };
      auto cutW = [&] { cut(eW, i, j, i, j + 1); };
      auto cutE = [&] { cut(eE, i + 1, j, i + 1, j + 1); };
      switch (c) {
        case 1: case 14: cutS(); cutW(); addseg(eS, eW); break;
        case 2: case 13: cutS(); cutE(); addseg(eS, eE); break;
        case 4: case 11: cutN(); cutW(); addseg(eN, eW); break;
        case 8: case 7:  cutN(); cutE(); addseg(eN, eE); break;
        case 3: case 12: cutW(); cutE(); addseg(eW, eE); break;
        case 5: case 10: cutS(); cutN(); addseg(eS, eN); break;
        case 6: case 9: {
          // ambiguous: connect according to the interpolant's center sign
          cutS(); cutN(); cutW(); cutE();
          const double center =
              f.value(f.x(i) + 0.5 * h, f.y(j) + 0.5 * h) - level;
          // SW connects diagonally to NE iff the center carries its sign
          if (pos(center) == pos(v00)) {
            addseg(eS, eE);
            addseg(eN, eW);
          } else {
            addseg(eS, eW);
            addseg(eN, eE);
          }
          break;
        }
      }
    }
  }

  // chain segments through shared edges; every edge meets at most two cells
  std::map<long, std::vector<int>> at_edge;
  for (int s = 0; s < int(segs.size()); ++s) {
    at_edge[segs[s].a].push_back(s);
    at_edge[segs[s].b].push_back(s);
  }
  for (const auto& [edge, ss] : at_edge)
    if (ss.size() > 2)
      throw Error("extract_level_curves: orphan segments at edge " +
                  std::to_string(edge));

  std::vector<bool> used(segs.size(), false);
  std::vector<NodalCurve> curves;
  auto walk = [&](int start, long from) {
    std::vector<long> chain{from};
    int s = start;
    long cur = from;
    while (true) {
      used[s] = true;
      cur = (segs[s].a == cur) ? segs[s].b : segs[s].a;
      chain.push_back(cur);
      int next = -1;
      for (int cand : at_edge[cur])
        if (!used[cand]) { next = cand; break; }
      if (next < 0) break;
      s = next;
    }
    return chain;
  };

  auto emit = [&](const std::vector<long>& chain) {
    NodalCurve c;
    for (long e : chain) c.pts.push_back(verts.at(e));
    c.closed = chain.size() > 2 && chain.front() == chain.back();
    curves.push_back(std::move(c));
  };

  // open chains first (start at degree-1 edges), then remaining loops
  for (int s = 0; s < int(segs.size()); ++s) {
    if (used[s]) continue;
    long start_edge = -1;
    if (at_edge[segs[s].a].size() == 1) start_edge = segs[s].a;
    else if (at_edge[segs[s].b].size() == 1) start_edge = segs[s].b;
    if (start_edge >= 0) emit(walk(s, start_edge));
  }
  for (int s = 0; s < int(segs.size()); ++s)
    if (!used[s]) emit(walk(s, segs[s].a));

  std::sort(curves.begin(), curves.end(),
            [](const NodalCurve& a, const NodalCurve& b) {
              return a.pts.size() > b.pts.size();
            });
  return curves;
}

/// Project the endpoints of open curves onto the domain boundary; an open
/// level curve of an eigenfunction must terminate within ~h of it.
inline void attach_boundary_contacts(NodalCurve& c,
                                     const NormalizedDomain& dom) {
  if (c.closed || c.pts.empty()) return;
  c.boundary_contacts.clear();
  for (const Pt& e : {c.pts.front(), c.pts.back()}) {
    // nearest of the four boundary pieces at this abscissa / ordinate
    Pt best{e.x, dom.f1(e.x)};
    double bd = std::abs(e.y - dom.f1(e.x));
    auto consider = [&](Pt q) {
      const double d = dist(e, q);
      if (d < bd) { bd = d; best = q; }
    };
    consider({e.x, dom.f2(e.x)});
    consider({dom.a(), std::clamp(e.y, dom.f1(dom.a()), dom.f2(dom.a()))});
    consider({dom.b(), std::clamp(e.y, dom.f1(dom.b()), dom.f2(dom.b()))});
    c.boundary_contacts.push_back(best);
  }
}

/// Zero level set of a mode restricted to cells strictly inside the domain.
inline std::vector<NodalCurve> nodal_curves(const ScalarField& f,
                                            const Grid& grid,
                                            const NormalizedDomain& dom) {
  auto mask = [&grid](int i, int j) { return grid.is_interior(i, j); };
  auto curves = extract_level_curves(f, 0.0, mask);
  for (auto& c : curves) attach_boundary_contacts(c, dom);
  return curves;
}

/// Number of connected sign components over interior grid nodes.
inline int count_nodal_domains(const Grid& grid,
                               const std::vector<double>& values) {
  std::vector<int> comp(std::size_t(grid.nx) * grid.ny, -1);
  int ncomp = 0;
  std::vector<int> stack;
  for (int start = 0; start < grid.nx * grid.ny; ++start) {
    const int si = start % grid.nx, sj = start / grid.nx;
    if (!grid.is_interior(si, sj) || comp[start] >= 0) continue;
    if (values[start] == 0.0) continue;
    const bool sign = values[start] > 0.0;
    stack.assign(1, start);
    comp[start] = ncomp;
    while (!stack.empty()) {
      const int id = stack.back();
      stack.pop_back();
      const int i = id % grid.nx, j = id / grid.nx;
      for (const auto& [di, dj] :
           std::initializer_list<std::pair<int, int>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const int ii = i + di, jj = j + dj;
        if (!grid.is_interior(ii, jj)) continue;
        const int nid = grid.node(ii, jj);
        if (comp[nid] >= 0 || values[nid] == 0.0) continue;
        if ((values[nid] > 0.0) != sign) continue;
        comp[nid] = ncomp;
        stack.push_back(nid);
      }
    }
    ++ncomp;
  }
  return ncomp;
}

}  // namespace eigencrit

#endif  // EIGENCRIT_LEVEL_CURVES_HPP
