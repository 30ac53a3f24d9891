#ifndef EIGENCRIT_VERIFY_HPP
#define EIGENCRIT_VERIFY_HPP

#include <chrono>
#include <random>

#include "eigencrit/pipeline.hpp"

// Verification suites. Each returns a SuiteResult with one entry per check;
// suites share a PipelineCache so the expensive eigensolves run once.

namespace eigencrit {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline void add(SuiteResult& r, const std::string& name, bool pass,
                const std::string& detail = "") {
  r.checks.push_back({name, pass, detail});
}

inline const char* side_name(Side s) { return s == Side::Right ? "right" : "left"; }

/// The six long-domain cases exercised by the two-critical-point, nodal-width,
/// degree and boundary-saddle suites.
inline std::vector<DomainSpec> sweep_specs() {
  std::vector<DomainSpec> v;
  for (double N : {8.0, 16.0, 32.0}) v.push_back(ellipse_spec(N));
  for (double N : {8.0, 16.0, 32.0}) v.push_back(stadium_spec(N));
  return v;
}

inline CapFunction parabolic_cap(double c) {
  CapFunction phi;
  phi.kind = CapFunction::Kind::Parabolic;
  phi.c = c;
  return phi;
}

/// Eigenvalue table for the capped-rectangle expansion fit: modes 1..3 over
/// N in {8,16,32}, dispersion-corrected so the grid's O(h^2) transverse
/// offset does not mask the model residuals.
inline std::vector<EigenTableEntry> capped_rectangle_table(PipelineCache& cache,
                                                           double c, double h) {
  std::vector<EigenTableEntry> table;
  for (double N : {8.0, 16.0, 32.0}) {
    const PipelineRun& run = cache.get(perturbed_spec(N, parabolic_cap(c)), h, 3);
    for (int m = 1; m <= 3; ++m)
      table.push_back({m, N, dispersion_corrected(run.mode(m).lambda, h)});
  }
  return table;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1. rectangle-exact
// ---------------------------------------------------------------------------
inline SuiteResult verify_rectangle_exact(PipelineCache& cache) {
  SuiteResult r{"rectangle-exact", {}};
  const double h = 1.0 / 64, N = 4.0;
  const auto t0 = std::chrono::steady_clock::now();

  const PipelineRun& run3 = cache.get(rectangle_spec(N), h, 3);
  const auto oracle = rectangle_spectrum_oracle(N, h, 3);
  const auto cont = rectangle_spectrum_continuum(N, 3);
  for (int m = 1; m <= 3; ++m) {
    const double lam = run3.mode(m).lambda;
    const double rd = std::abs(lam - oracle[m - 1]) / oracle[m - 1];
    detail::add(r, "lambda_" + std::to_string(m) + " discrete", rd <= 1e-8,
                "rel=" + detail::fmt(rd));
    const double rc = std::abs(lam - cont[m - 1]) / cont[m - 1];
    detail::add(r, "lambda_" + std::to_string(m) + " continuum", rc <= 5e-3,
                "rel=" + detail::fmt(rc));
  }

  const PipelineRun& run2 = cache.get(rectangle_spec(N), h, 2);
  const auto cp = find_critical_points(run2.field, *run2.domain);
  bool pts_ok = cp.points.size() == 2;
  if (pts_ok) {
    pts_ok = dist(cp.points[0].p, {1.0, 0.5}) <= 2 * h &&
             dist(cp.points[1].p, {3.0, 0.5}) <= 2 * h;
  }
  detail::add(r, "mode-2 critical points at (1,1/2),(3,1/2)", pts_ok,
              "count=" + std::to_string(cp.points.size()));

  bool nodal_ok = run2.curves.size() == 1;
  double worst = 0.0;
  if (nodal_ok)
    for (const auto& p : run2.curves[0].pts)
      worst = std::max(worst, std::abs(p.x - 2.0));
  detail::add(r, "nodal curve x=2", nodal_ok && worst <= h,
              "max|x-2|=" + detail::fmt(worst));

  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
  detail::add(r, "runtime < 30 s", secs < 30.0, detail::fmt(secs) + " s");
  return r;
}

// ---------------------------------------------------------------------------
// 2. thm-two-critical
// ---------------------------------------------------------------------------
inline SuiteResult verify_thm_two_critical(PipelineCache& cache) {
  SuiteResult r{"thm-two-critical", {}};
  const double h = 1.0 / 64;
  for (Family fam : {Family::Ellipse, Family::Stadium}) {
    double prev_pos = -1e300, prev_neg = 1e300;
    for (double N : {8.0, 16.0, 32.0}) {
      const DomainSpec spec =
          fam == Family::Ellipse ? ellipse_spec(N) : stadium_spec(N);
      const PipelineRun& run = cache.get(spec, h, 2);
      const auto cp = find_critical_points(run.field, *run.domain);
      const std::string tag =
          std::string(family_name(fam)) + " N=" + detail::fmt(N);

      bool two = cp.points.size() == 2;
      bool kinds = two && ((cp.points[0].kind == CritKind::Min &&
                            cp.points[1].kind == CritKind::Max) ||
                           (cp.points[0].kind == CritKind::Max &&
                            cp.points[1].kind == CritKind::Min));
      detail::add(r, tag + ": exactly 2 nondegenerate extrema", two && kinds,
                  "count=" + std::to_string(cp.points.size()));
      if (!two) continue;

      const double xn = cp.points[0].p.x - run.center_x;
      const double xp = cp.points[1].p.x - run.center_x;
      detail::add(r, tag + ": abscissae move outward",
                  xp > prev_pos && xn < prev_neg,
                  "x=" + detail::fmt(xn) + "," + detail::fmt(xp));
      prev_pos = xp;
      prev_neg = xn;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// 3. nodal-width
// ---------------------------------------------------------------------------
inline SuiteResult verify_nodal_width(PipelineCache& cache) {
  SuiteResult r{"nodal-width", {}};
  const double h = 1.0 / 64;
  for (Family fam : {Family::Ellipse, Family::Stadium}) {
    double base = 0.0;
    for (double N : {8.0, 16.0, 32.0}) {
      const DomainSpec spec =
          fam == Family::Ellipse ? ellipse_spec(N) : stadium_spec(N);
      const PipelineRun& run = cache.get(spec, h, 2);
      const std::string tag =
          std::string(family_name(fam)) + " N=" + detail::fmt(N);
      if (run.curves.empty()) {
        detail::add(r, tag + ": nodal curve present", false, "no curve");
        continue;
      }
      const double wn = run.curves.front().width() * N;
      if (N == 8.0) {
        base = wn;
        detail::add(r, tag + ": width*N recorded", wn > 0.0,
                    "width*N=" + detail::fmt(wn));
      } else {
        // the 1e-8 floor keeps exactly-straight nodal lines (width at
        // rounding level) from being compared as noise against noise
        detail::add(r, tag + ": width*N <= 2x base", wn <= 2.0 * base + 1e-8,
                    "width*N=" + detail::fmt(wn) + " base=" + detail::fmt(base));
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// 4. degree-one
// ---------------------------------------------------------------------------
inline SuiteResult verify_degree_one(PipelineCache& cache) {
  SuiteResult r{"degree-one", {}};
  const double h = 1.0 / 64;
  for (const DomainSpec& spec : detail::sweep_specs()) {
    const PipelineRun& run = cache.get(spec, h, 2);
    const std::string tag =
        std::string(family_name(spec.family)) + " N=" + detail::fmt(spec.N);
    for (Side side : {Side::Right, Side::Left}) {
      try {
        const DegreeReport rep =
            region_degree_T(run.field, *run.domain, side, run.center_x, 4 * h);
        detail::add(r, tag + ": winding " + detail::side_name(side),
                    rep.winding == 1 && rep.ok,
                    "winding=" + std::to_string(rep.winding));
      } catch (const Error& e) {
        detail::add(r, tag + ": winding " + detail::side_name(side), false,
                    e.what());
      }
    }

    // T . grad u = -K |grad u|^3 at 100 random interior points
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_real_distribution<double> ux(run.domain->a(), run.domain->b());
    std::uniform_real_distribution<double> uy(0.0, 1.0);
    const double gfloor = 1e-3 * run.nmode.max_abs();
    int tested = 0, ok = 0;
    double worst = 0.0;
    while (tested < 100) {
      const double x = ux(rng), y = uy(rng);
      if (!detail::inside_with_margin(*run.domain, x, y, 4 * h)) continue;
      const Jet2 jet = run.field.jet(x, y);
      if (jet.grad_norm() < gfloor) continue;
      ++tested;
      const auto [t1, t2] = vector_field_T(run.field, {x, y});
      const double lhs = t1 * jet.gx + t2 * jet.gy;
      const double g = jet.grad_norm();
      const double rhs = -level_curvature(jet) * g * g * g;
      const double rel =
          std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      worst = std::max(worst, rel);
      if (rel <= 1e-6) ++ok;
    }
    detail::add(r, tag + ": curvature identity at 100 points", ok == 100,
                "worst rel=" + detail::fmt(worst));
  }
  return r;
}

// ---------------------------------------------------------------------------
// 5. strip-limit
// ---------------------------------------------------------------------------
inline SuiteResult verify_strip_limit(PipelineCache& cache) {
  SuiteResult r{"strip-limit", {}};
  const double h = 1.0 / 64, k = 2.0;
  WindowError prev{1e300, 1e300, 1e300};
  const PipelineRun* run32 = nullptr;
  for (double N : {8.0, 16.0, 32.0}) {
    const PipelineRun& run = cache.get(ellipse_spec(N), h, 2);
    const A0Estimate a0 = estimate_A0(run.field, *run.domain, run.center_x, k);
    const WindowError we =
        sup_error_window(run.field, *run.domain, a0.A0, run.center_x, k);
    const std::string tag = "ellipse N=" + detail::fmt(N);
    if (N > 8.0) {
      detail::add(r, tag + ": window errors decrease",
                  we.order0 < prev.order0 && we.order1 < prev.order1 &&
                      we.order2 < prev.order2,
                  "sup=" + detail::fmt(we.order0) + "/" + detail::fmt(we.order1) +
                      "/" + detail::fmt(we.order2));
    } else {
      detail::add(r, tag + ": window errors recorded", true,
                  "sup=" + detail::fmt(we.order0) + "/" + detail::fmt(we.order1) +
                      "/" + detail::fmt(we.order2));
    }
    prev = we;
    if (N == 32.0) run32 = &run;
  }

  const StripUniquenessReport rep = verify_strip_uniqueness(
      [run32](double x, double y) { return run32->field.value(x, y); },
      run32->center_x - k, run32->center_x + k, 5, 1e300);
  const double a1_scale =
      std::max(std::abs(rep.c1 * (run32->center_x - k) + rep.d1),
               std::abs(rep.c1 * (run32->center_x + k) + rep.d1));
  detail::add(r, "N=32 slice: |d1| <= 1e-2", std::abs(rep.d1) <= 1e-2,
              "d1=" + detail::fmt(rep.d1));
  double worst_aj = 0.0;
  for (double v : rep.max_abs_Aj) worst_aj = std::max(worst_aj, v);
  detail::add(r, "N=32 slice: A_2..5 a factor >= 10 below A_1",
              10.0 * worst_aj <= a1_scale,
              "max|A_j|=" + detail::fmt(worst_aj) +
                  " A1 scale=" + detail::fmt(a1_scale));
  return r;
}

// ---------------------------------------------------------------------------
// 6. rn-expansion
// ---------------------------------------------------------------------------
inline SuiteResult verify_rn_expansion(PipelineCache& cache) {
  SuiteResult r{"rn-expansion", {}};
  const double h = 1.0 / 64, c = 0.5;  // phi(y) = y(1-y)/2
  const double max_phi = detail::parabolic_cap(c).max_value();

  const auto table = detail::capped_rectangle_table(cache, c, h);
  const AsymptoticFit fit = fit_a(table, max_phi);
  detail::add(r, "fitted a in [0, 1/8]", fit.a >= 0.0 && fit.a <= 0.125,
              "a=" + detail::fmt(fit.a));

  double r8 = 0.0, r32 = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].N == 8.0) r8 = std::max(r8, std::abs(fit.residuals[i]));
    if (table[i].N == 32.0) r32 = std::max(r32, std::abs(fit.residuals[i]));
  }
  detail::add(r, "residual(32) <= residual(8)/4", r32 <= r8 / 4.0,
              "r8=" + detail::fmt(r8) + " r32=" + detail::fmt(r32));

  // synthetic recovery: exact model data must return a to 1e-8
  const double a_true = 0.0703125;
  std::vector<EigenTableEntry> synth;
  for (double N : {8.0, 16.0, 32.0})
    for (int m = 1; m <= 3; ++m)
      synth.push_back({m, N, expansion_model(m, N, a_true)});
  const AsymptoticFit sfit = fit_a(synth, max_phi);
  detail::add(r, "synthetic a recovery", std::abs(sfit.a - a_true) <= 1e-8,
              "err=" + detail::fmt(std::abs(sfit.a - a_true)));

  // small-x bound for the second mode across N in {16, 32}
  double prev_ratio = 0.0;
  for (double N : {16.0, 32.0}) {
    const PipelineRun& run = cache.get(perturbed_spec(N, detail::parabolic_cap(c)), h, 2);
    const RectangleReference vm{2, N, fit.a};
    const SmallXReport sx = small_x_bound_check(run.field, *run.domain, vm);
    const std::string tag = "small-x N=" + detail::fmt(N);
    if (N == 16.0) {
      detail::add(r, tag + ": applicable", sx.applicable,
                  "ratio=" + detail::fmt(sx.ratio));
      prev_ratio = sx.ratio;
    } else {
      detail::add(r, tag + ": ratio bounded",
                  sx.applicable && sx.ratio <= 2.0 * prev_ratio,
                  "ratio=" + detail::fmt(sx.ratio) +
                      " prev=" + detail::fmt(prev_ratio));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// 7. m-critical
// ---------------------------------------------------------------------------
inline SuiteResult verify_m_critical(PipelineCache& cache) {
  SuiteResult r{"m-critical", {}};
  const double h = 1.0 / 64, N = 16.0, c = 0.5;

  const auto table = detail::capped_rectangle_table(cache, c, h);
  const double a = fit_a(table, detail::parabolic_cap(c).max_value()).a;
  const Landmarks lm = landmarks(N, a);

  for (int m : {2, 3, 4}) {
    const PipelineRun& run =
        cache.get(perturbed_spec(N, detail::parabolic_cap(c)), h, m);
    const auto cp = find_critical_points(run.field, *run.domain);
    const std::string tag = "m=" + std::to_string(m);

    detail::add(r, tag + ": exactly m critical points",
                int(cp.points.size()) == m,
                "count=" + std::to_string(cp.points.size()));
    if (int(cp.points.size()) != m) continue;

    bool alternating = true;
    for (std::size_t i = 0; i + 1 < cp.points.size(); ++i) {
      const bool a_max = cp.points[i].kind == CritKind::Max;
      const bool b_max = cp.points[i + 1].kind == CritKind::Max;
      if (a_max == b_max ||
          (cp.points[i].kind != CritKind::Max &&
           cp.points[i].kind != CritKind::Min))
        alternating = false;
    }
    detail::add(r, tag + ": alternating extrema", alternating);

    bool left_free = true;
    for (const auto& p : cp.points)
      if (p.p.x < lm.x_prime) left_free = false;
    detail::add(r, tag + ": none left of x'", left_free,
                "x'=" + detail::fmt(lm.x_prime));

    const RectangleReference vm{m, N, a};
    const auto pred = vm.critical_abscissae();
    bool placed = true;
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      const double d = dist(cp.points[i].p, {pred[i], 0.5});
      worst = std::max(worst, d);
      if (d > 4 * h) placed = false;
    }
    detail::add(r, tag + ": within 4h of predictions", placed,
                "worst=" + detail::fmt(worst));
  }
  return r;
}

// ---------------------------------------------------------------------------
// 8. directional
// ---------------------------------------------------------------------------
inline SuiteResult verify_directional(PipelineCache& cache) {
  SuiteResult r{"directional", {}};
  const double h = 1.0 / 64;
  const PipelineRun& run = cache.get(ellipse_spec(16.0), h, 2);
  const Grid& g = run.grid;
  const double xc = run.center_x + 0.5;
  // Far cut where the domain is still three-quarters thick: toward the thin
  // end the margin mask develops notches that fragment the crossing curve.
  double x_far = detail::resolved_extent(run.field, Side::Right, xc);
  while (x_far > xc + 1.0 &&
         run.domain->f2(x_far) - run.domain->f1(x_far) < 0.75)
    x_far -= h;

  auto interior = [&g](int i, int j) { return g.is_interior(i, j); };
  NodeMask mask = [&, xc, x_far](int i, int j) {
    if (!interior(i, j)) return false;
    if (g.x(i) < xc || g.x(i) > x_far) return false;
    return interior(i - 1, j) && interior(i + 1, j) && interior(i, j - 1) &&
           interior(i, j + 1);
  };

  for (int t = 0; t < 16; ++t) {
    const double theta = t * kPi / 16.0;
    const ScalarField df = directional_field(run.field, theta, g);
    auto curves = extract_level_curves(df, 0.0, mask);
    int open_long = 0, closed_long = 0;
    const NodalCurve* main = nullptr;
    for (const auto& cvx : curves) {
      if (cvx.length() <= 4 * h) continue;
      if (cvx.closed) ++closed_long;
      else {
        ++open_long;
        main = &cvx;
      }
    }
    bool ok = open_long == 1 && closed_long == 0;
    std::string det = "open=" + std::to_string(open_long) +
                      " closed=" + std::to_string(closed_long);
    if (ok) {
      // the two chain ends are the boundary hits; they must be distinct
      const double sep = dist(main->pts.front(), main->pts.back());
      ok = sep > 4 * h;
      det += " end sep=" + detail::fmt(sep);
    }
    detail::add(r, "theta=" + detail::fmt(theta) + ": single crossing curve",
                ok, det);
  }

  // Poincare-Hopf on random zero-free loops: winding of T equals the summed
  // index of the enclosed zeros of T. Those are the two extrema of u (index
  // +1 each) plus the degenerate-Hessian point where the nodal line crosses
  // the midline: T = adj(Hess u) grad u vanishes there with index -1 (in the
  // strip model T ~ A^2 pi^2 (-x, y-1/2) around it).
  const auto cp = find_critical_points(run.field, *run.domain);
  struct TZero { Pt p; int index; };
  std::vector<TZero> zeros;
  for (const auto& p : cp.points) zeros.push_back({p.p, p.index});
  {
    Pt z{run.center_x, 0.5};
    const double d = h / 8;
    for (int it = 0; it < 60; ++it) {
      const auto [t1, t2] = vector_field_T(run.field, z);
      const auto [txp, typ] = vector_field_T(run.field, {z.x + d, z.y});
      const auto [txm, tym] = vector_field_T(run.field, {z.x - d, z.y});
      const auto [sxp, syp] = vector_field_T(run.field, {z.x, z.y + d});
      const auto [sxm, sym] = vector_field_T(run.field, {z.x, z.y - d});
      const double j11 = (txp - txm) / (2 * d), j12 = (sxp - sxm) / (2 * d);
      const double j21 = (typ - tym) / (2 * d), j22 = (syp - sym) / (2 * d);
      const double det = j11 * j22 - j12 * j21;
      if (std::abs(det) < 1e-300) break;
      const double sx = (j22 * t1 - j12 * t2) / det;
      const double sy = (-j21 * t1 + j11 * t2) / det;
      z.x -= std::clamp(sx, -h, h);
      z.y -= std::clamp(sy, -h, h);
      if (std::hypot(sx, sy) < 1e-12) break;
    }
    zeros.push_back({z, -1});
  }
  std::mt19937_64 rng(0xD1CE);
  std::uniform_real_distribution<double> ucx(run.center_x - 3.0, run.center_x + 3.0);
  std::uniform_real_distribution<double> ucy(0.3, 0.7);
  std::uniform_real_distribution<double> ur(0.1, 0.5);
  int accepted = 0, matched = 0, attempts = 0;
  while (accepted < 20 && attempts < 2000) {
    ++attempts;
    const double cx = ucx(rng), cy = ucy(rng), rad = ur(rng);
    bool inside_ok = true;
    for (int s = 0; s < 64 && inside_ok; ++s) {
      const double ang = 2 * kPi * s / 64;
      if (!detail::inside_with_margin(*run.domain, cx + rad * std::cos(ang),
                                       cy + rad * std::sin(ang), 2 * h))
        inside_ok = false;
    }
    if (!inside_ok) continue;
    bool near_zero = false;
    int expected = 0;
    for (const auto& z : zeros) {
      const double d = dist(z.p, {cx, cy});
      if (std::abs(d - rad) < 4 * h) near_zero = true;
      else if (d < rad) expected += z.index;
    }
    if (near_zero) continue;
    try {
      const DegreeReport rep =
          winding_number(t_field(run.field), circle_path({cx, cy}, rad, 256));
      ++accepted;
      if (rep.winding == expected) ++matched;
    } catch (const Error&) {
      // loop grazed the zero set; draw again
    }
  }
  detail::add(r, "Poincare-Hopf on 20 random loops",
              accepted == 20 && matched == 20,
              "accepted=" + std::to_string(accepted) +
                  " matched=" + std::to_string(matched));
  return r;
}

// ---------------------------------------------------------------------------
// 9. boundary-saddles
// ---------------------------------------------------------------------------
inline SuiteResult verify_boundary_saddles(PipelineCache& cache) {
  SuiteResult r{"boundary-saddles", {}};
  const double h = 1.0 / 64;
  for (const DomainSpec& spec : detail::sweep_specs()) {
    const PipelineRun& run = cache.get(spec, h, 2);
    const std::string tag =
        std::string(family_name(spec.family)) + " N=" + detail::fmt(spec.N);
    if (run.curves.empty() || run.curves.front().boundary_contacts.size() != 2) {
      detail::add(r, tag + ": two boundary contacts", false);
      continue;
    }
    const BoundarySaddleReport rep =
        boundary_saddle_check(run.field, *run.domain, run.curves.front());
    detail::add(r, tag + ": det Hess < 0 at both contacts", rep.all_saddle,
                "det=" + detail::fmt(rep.saddles[0].det) + "," +
                    detail::fmt(rep.saddles[1].det));
    detail::add(r, tag + ": u_xy signs opposite", rep.uxy_opposite,
                "uxy=" + detail::fmt(rep.saddles[0].uxy) + "," +
                    detail::fmt(rep.saddles[1].uxy));
  }
  return r;
}

// ---------------------------------------------------------------------------

inline SuiteResult run_suite(const std::string& name, PipelineCache& cache) {
  if (name == "rectangle-exact") return verify_rectangle_exact(cache);
  if (name == "thm-two-critical") return verify_thm_two_critical(cache);
  if (name == "nodal-width") return verify_nodal_width(cache);
  if (name == "degree-one") return verify_degree_one(cache);
  if (name == "strip-limit") return verify_strip_limit(cache);
  if (name == "rn-expansion") return verify_rn_expansion(cache);
  if (name == "m-critical") return verify_m_critical(cache);
  if (name == "directional") return verify_directional(cache);
  if (name == "boundary-saddles") return verify_boundary_saddles(cache);
  throw Error("unknown suite: " + name);
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "rectangle-exact", "thm-two-critical", "nodal-width",
      "degree-one",      "strip-limit",      "rn-expansion",
      "m-critical",      "directional",      "boundary-saddles"};
  return names;
}

}  // namespace eigencrit

#endif  // EIGENCRIT_VERIFY_HPP
