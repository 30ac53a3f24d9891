#ifndef EIGENCRIT_ASYMPTOTICS_HPP
#define EIGENCRIT_ASYMPTOTICS_HPP

#include "eigencrit/scalar_field.hpp"

namespace eigencrit {

// ---------------------------------------------------------------------------
// Closed-form references
// ---------------------------------------------------------------------------

/// Strip limit u(x, y) = A0 * x * sin(pi y) on R x (0,1).
struct StripReference {
  double A0 = 1.0;

  double value(double x, double y) const { return A0 * x * std::sin(kPi * y); }
  Jet2 jet(double x, double y) const {
    Jet2 j;
    const double s = std::sin(kPi * y), c = std::cos(kPi * y);
    j.v = A0 * x * s;
    j.gx = A0 * s;
    j.gy = A0 * kPi * x * c;
    j.gxx = 0.0;
    j.gxy = A0 * kPi * c;
    j.gyy = -A0 * kPi * kPi * x * s;
    return j;
  }

  /// Sample onto a grid (handy for driving the field pipeline on the oracle).
  ScalarField sample(const Grid& g) const {
    std::vector<double> v(std::size_t(g.nx) * g.ny);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) v[g.node(i, j)] = value(g.x(i), g.y(j));
    return ScalarField(g, std::move(v));
  }
};

/// The m-th rectangle-like mode v_m(x,y) = sin(m pi (x+a)/(N+a)) sin(pi y);
/// vanishes at x = -a and x = N.
struct RectangleReference {
  int m = 2;
  double N = 8.0;
  double a = 0.0;

  double value(double x, double y) const {
    return std::sin(m * kPi * (x + a) / (N + a)) * std::sin(kPi * y);
  }
  /// Abscissae of the critical points (y = 1/2): odd multiples of the
  /// quarter-wavelength.
  std::vector<double> critical_abscissae() const {
    std::vector<double> xs;
    for (int k = 1; k <= m; ++k)
      xs.push_back((2.0 * k - 1.0) * (N + a) / (2.0 * m) - a);
    return xs;
  }
};

/// Section-5 landmark abscissae.
struct Landmarks {
  double x_mid;    // (N+a)/2 - a : nodal abscissa of v_2
  double x_plus;   // (N+a)/4 - a : maximum of v_2
  double x_minus;  // 3(N+a)/4 - a : minimum of v_2
  double x_prime;  // (N+a)/12 - a : left critical-point-free cutoff
};

inline Landmarks landmarks(double N, double a) {
  if (a < 0.0) throw Error("landmarks: a must be >= 0");
  return {0.5 * (N + a) - a, 0.25 * (N + a) - a, 0.75 * (N + a) - a,
          (N + a) / 12.0 - a};
}

// ---------------------------------------------------------------------------
// Fourier analysis on y-slices
// ---------------------------------------------------------------------------

/// A_j(x) = 2 * integral_0^1 u(x, t) sin(j pi t) dt, composite Simpson at
/// grid resolution.
inline double fourier_coefficient(const std::function<double(double, double)>& u,
                                  int j, double x, int n_samples) {
  if (j < 1) throw Error("fourier_coefficient: j must be >= 1");
  if (n_samples < 8) throw Error("fourier_coefficient: slice shorter than 8 samples");
  int n = n_samples;
  if (n % 2 == 1) ++n;
  const double dy = 1.0 / n;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double y = k * dy;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    s += w * u(x, y) * std::sin(j * kPi * y);
  }
  return 2.0 * s * dy / 3.0;
}

inline double fourier_coefficient(const ScalarField& f, int j, double x) {
  const int n = int(std::lround(1.0 / f.h()));
  return fourier_coefficient(
      [&f](double xx, double yy) { return f.value(xx, yy); }, j, x, n);
}

// ---------------------------------------------------------------------------
// Strip uniqueness: on the window, A_1 must be linear through the origin and
// all higher coefficients negligible (c_j + d_j = A_j(0) = 0 plus sub-linear
// growth forces c_j = d_j = 0).
// ---------------------------------------------------------------------------

struct StripUniquenessReport {
  double c1 = 0.0, d1 = 0.0;   // affine fit A_1(x) ~ c1 x + d1
  double fit_residual = 0.0;   // rms residual of the affine fit
  std::vector<double> max_abs_Aj;  // indexed from j=2
  bool pass = false;
  int failing_j = 0;           // 0 when pass, else first failing coefficient
};

inline StripUniquenessReport verify_strip_uniqueness(
    const std::function<double(double, double)>& u, double x_lo, double x_hi,
    int jmax, double tol, int n_slice_samples = 256, int n_x = 33) {
  StripUniquenessReport rep;
  std::vector<double> xs(n_x), A1(n_x);
  for (int i = 0; i < n_x; ++i) {
    xs[i] = x_lo + (x_hi - x_lo) * i / (n_x - 1);
    A1[i] = fourier_coefficient(u, 1, xs[i], n_slice_samples);
  }
  // least-squares affine fit
  double sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (int i = 0; i < n_x; ++i) {
    sx += xs[i]; sxx += xs[i] * xs[i]; sy += A1[i]; sxy += xs[i] * A1[i];
  }
  const double det = n_x * sxx - sx * sx;
  rep.c1 = (n_x * sxy - sx * sy) / det;
  rep.d1 = (sy * sxx - sx * sxy) / det;
  double rss = 0.0;
  for (int i = 0; i < n_x; ++i) {
    const double r = A1[i] - rep.c1 * xs[i] - rep.d1;
    rss += r * r;
  }
  rep.fit_residual = std::sqrt(rss / n_x);

  rep.pass = std::abs(rep.d1) <= tol && rep.fit_residual <= tol;
  if (!rep.pass) rep.failing_j = 1;
  for (int j = 2; j <= jmax; ++j) {
    double mx = 0.0;
    for (int i = 0; i < n_x; ++i)
      mx = std::max(mx, std::abs(fourier_coefficient(u, j, xs[i], n_slice_samples)));
    rep.max_abs_Aj.push_back(mx);
    if (mx > tol && rep.pass) { rep.pass = false; rep.failing_j = j; }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// A0 estimation and window sup-errors against the strip limit
// ---------------------------------------------------------------------------

struct A0Estimate {
  double A0 = 0.0;
  double residual_fraction = 0.0;  // ||u - A0 g|| / ||u|| over the window
  bool in_regime = true;           // false when the residual exceeds 20%
};

/// Least-squares fit of the field against (x - center) sin(pi y) over the
/// window {|x - center| <= k}, grid nodes strictly inside the domain.
inline A0Estimate estimate_A0(const ScalarField& f, const NormalizedDomain& dom,
                              double center_x, double k) {
  if (k < 1.0) throw Error("estimate_A0: window must have k >= 1");
  double sgg = 0.0, sug = 0.0, suu = 0.0;
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      const double x = f.x(i), y = f.y(j);
      if (std::abs(x - center_x) > k || !dom.inside(x, y)) continue;
      const double g = (x - center_x) * std::sin(kPi * y);
      const double u = f.node_value(i, j);
      sgg += g * g;
      sug += u * g;
      suu += u * u;
    }
  if (!(sgg > 0.0)) throw Error("estimate_A0: empty window");
  A0Estimate est;
  est.A0 = sug / sgg;
  const double rss = std::max(0.0, suu - est.A0 * est.A0 * sgg);
  est.residual_fraction = suu > 0.0 ? std::sqrt(rss / suu) : 0.0;
  est.in_regime = est.residual_fraction <= 0.20;
  return est;
}

struct WindowError {
  double order0 = 0.0;  // sup |u - A0 x sin(pi y)|
  double order1 = 0.0;  // sup over first-derivative components
  double order2 = 0.0;  // sup over second-derivative components
};

/// Sup over the window of |D^alpha (u - A0 (x-c) sin(pi y))| for |alpha|<=2.
/// A 2h margin from the boundary keeps the comparison where the interpolant
/// carries trustworthy derivatives.
inline WindowError sup_error_window(const ScalarField& f,
                                    const NormalizedDomain& dom,
                                    double A0, double center_x, double k) {
  WindowError we;
  const double margin = 2.0 * f.h();
  const StripReference ref{A0};
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      const double x = f.x(i), y = f.y(j);
      if (std::abs(x - center_x) > k) continue;
      if (!dom.inside(x, y) || dom.f1(x) + margin > y || y > dom.f2(x) - margin)
        continue;
      const Jet2 a = f.jet(x, y);
      const Jet2 b = ref.jet(x - center_x, y);
      we.order0 = std::max(we.order0, std::abs(a.v - b.v));
      we.order1 = std::max({we.order1, std::abs(a.gx - b.gx),
                            std::abs(a.gy - b.gy)});
      we.order2 = std::max({we.order2, std::abs(a.gxx - b.gxx),
                            std::abs(a.gxy - b.gxy), std::abs(a.gyy - b.gyy)});
    }
  return we;
}

// ---------------------------------------------------------------------------
// Eigenvalue expansion fit: lambda_{m,N} = pi^2 + m^2 pi^2 / (N+a)^2
// ---------------------------------------------------------------------------

struct EigenTableEntry {
  int m = 0;
  double N = 0.0;
  double lambda = 0.0;
};

struct AsymptoticFit {
  double a = 0.0;
  bool boundary_hit = false;  // clamped search ended on an interval end
  double max_phi = 0.0;
  std::vector<EigenTableEntry> table;
  std::vector<double> residuals;   // per table entry, lambda - model
  bool expansion_observed = true;  // false when residuals grow with N
};

inline double expansion_model(int m, double N, double a) {
  return kPi * kPi + m * m * kPi * kPi / ((N + a) * (N + a));
}

/// One-parameter least squares for a in [0, max_phi] by golden-section
/// search (the residual is smooth and unimodal in a).
inline AsymptoticFit fit_a(const std::vector<EigenTableEntry>& table,
                           double max_phi) {
  if (table.size() < 3) throw Error("fit_a: need at least 3 table entries");
  auto sse = [&table](double a) {
    double s = 0.0;
    for (const auto& e : table) {
      const double r = e.lambda - expansion_model(e.m, e.N, a);
      s += r * r;
    }
    return s;
  };
  double lo = 0.0, hi = std::max(max_phi, 0.0);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = sse(c), fd = sse(d);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, max_phi); ++it) {
    if (fc < fd) {
      hi = d; d = c; fd = fc;
      c = hi - gr * (hi - lo);
      fc = sse(c);
    } else {
      lo = c; c = d; fc = fd;
      d = lo + gr * (hi - lo);
      fd = sse(d);
    }
  }
  AsymptoticFit fit;
  fit.a = 0.5 * (lo + hi);
  fit.max_phi = max_phi;
  fit.boundary_hit = fit.a < 1e-10 || fit.a > max_phi - 1e-10;
  fit.table = table;
  for (const auto& e : table)
    fit.residuals.push_back(e.lambda - expansion_model(e.m, e.N, fit.a));

  // flag residual growth with N (discretization error dominating the model)
  double worst_small = 0.0, worst_large = 0.0, n_lo = 1e300, n_hi = -1e300;
  for (const auto& e : table) { n_lo = std::min(n_lo, e.N); n_hi = std::max(n_hi, e.N); }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].N == n_lo) worst_small = std::max(worst_small, std::abs(fit.residuals[i]));
    if (table[i].N == n_hi) worst_large = std::max(worst_large, std::abs(fit.residuals[i]));
  }
  fit.expansion_observed = worst_large <= worst_small + 1e-12;
  return fit;
}

/// Removes the y-direction dispersion of the 5-point scheme from a computed
/// eigenvalue: the discrete transverse symbol (4/h^2) sin^2(pi h/2) replaces
/// pi^2 exactly on grid-aligned strips, so adding the difference back makes
/// the table comparable with the continuum expansion.
inline double dispersion_corrected(double lambda, double h) {
  const double s = std::sin(kPi * h / 2.0);
  return lambda + (kPi * kPi - 4.0 / (h * h) * s * s);
}

// ---------------------------------------------------------------------------
// Lemma-2.1 style measured constants and the small-x bound
// ---------------------------------------------------------------------------

struct BoundsReport {
  double c_upper = 0.0;  // max |u| / (1 + |x - c|)
  double c_lower = 0.0;  // min(|u(c+1, 1/2)|, |u(c-1, 1/2)|)
  bool lower_positive = false;
};

inline BoundsReport check_lemma21_bounds(const ScalarField& f,
                                         const NormalizedDomain& dom,
                                         double center_x) {
  BoundsReport rep;
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      const double x = f.x(i), y = f.y(j);
      if (!dom.inside(x, y)) continue;
      rep.c_upper = std::max(rep.c_upper, std::abs(f.node_value(i, j)) /
                                              (1.0 + std::abs(x - center_x)));
    }
  rep.c_lower = std::min(std::abs(f.value(center_x + 1.0, 0.5)),
                         std::abs(f.value(center_x - 1.0, 0.5)));
  rep.lower_positive = rep.c_lower > 0.0;
  return rep;
}

struct SmallXReport {
  bool applicable = false;
  double sup_small_x = 0.0;  // sup |u| over {x <= 3 log N}, unit v_m amplitude
  double ratio = 0.0;        // sup / (log(N)/N)
  double amplitude = 0.0;    // least-squares scale factor against v_m
};

/// Theorem-5.1 small-x check for R_N modes: rescale the computed mode to
/// unit amplitude against v_m over the bulk, then measure the sup over the
/// left strip {x <= 3 log N} relative to N^{-1} log N.
inline SmallXReport small_x_bound_check(const ScalarField& f,
                                        const NormalizedDomain& dom,
                                        const RectangleReference& vm) {
  SmallXReport rep;
  const double N = vm.N;
  const double cutoff = 3.0 * std::log(N);
  if (cutoff >= dom.b() - 1.0) return rep;  // domain too short: not applicable
  rep.applicable = true;
  double svv = 0.0, suv = 0.0;
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      const double x = f.x(i), y = f.y(j);
      if (!dom.inside(x, y) || x <= cutoff) continue;
      const double v = vm.value(x, y);
      svv += v * v;
      suv += f.node_value(i, j) * v;
    }
  rep.amplitude = suv / svv;
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      const double x = f.x(i), y = f.y(j);
      if (!dom.inside(x, y) || x > cutoff) continue;
      rep.sup_small_x =
          std::max(rep.sup_small_x, std::abs(f.node_value(i, j) / rep.amplitude));
    }
  rep.ratio = rep.sup_small_x / (std::log(N) / N);
  return rep;
}

}  // namespace eigencrit

#endif  // EIGENCRIT_ASYMPTOTICS_HPP
