#include <catch2/catch_amalgamated.hpp>

#include "eigencrit/asymptotics.hpp"
#include "eigencrit/eigensolver.hpp"

using namespace eigencrit;

namespace {

std::shared_ptr<const NormalizedDomain> rect(double N) {
  DomainSpec s;
  s.family = Family::Rectangle;
  s.N = N;
  return std::make_shared<NormalizedDomain>(make_family(s));
}

}  // namespace

TEST_CASE("Fourier slice coefficients are orthonormal on sin(j pi y)") {
  for (int j = 1; j <= 4; ++j)
    for (int k = 1; k <= 4; ++k) {
      const double c = fourier_coefficient(
          [k](double, double y) { return std::sin(k * kPi * y); }, j, 0.0, 256);
      CHECK(c == Catch::Approx(j == k ? 1.0 : 0.0).margin(1e-10));
    }
}

TEST_CASE("Parseval: slice energy equals the coefficient sum") {
  auto u = [](double, double y) {
    return 0.7 * std::sin(kPi * y) - 0.2 * std::sin(3 * kPi * y);
  };
  double sum = 0.0;
  for (int j = 1; j <= 32; ++j) {
    const double a = fourier_coefficient(u, j, 0.0, 512);
    sum += a * a;
  }
  // (1/2) sum a_j^2 = int_0^1 u^2 dy with this normalization
  CHECK(sum == Catch::Approx(0.7 * 0.7 + 0.2 * 0.2).margin(1e-9));
}

TEST_CASE("strip uniqueness passes on the pure strip profile") {
  const auto rep = verify_strip_uniqueness(
      [](double x, double y) { return 2.0 * x * std::sin(kPi * y); },
      -1.0, 1.0, 5, 1e-8);
  CHECK(rep.pass);
  CHECK(rep.c1 == Catch::Approx(2.0).margin(1e-9));
  CHECK(std::abs(rep.d1) <= 1e-10);
  CHECK(rep.failing_j == 0);
}

TEST_CASE("strip uniqueness flags an injected second harmonic") {
  // sinh(sqrt(3) pi x) sin(2 pi y) is harmonic-compatible but violates the
  // single-frequency profile; coefficient grows away from x=0
  const auto rep = verify_strip_uniqueness(
      [](double x, double y) {
        return x * std::sin(kPi * y) +
               0.05 * std::sinh(std::sqrt(3.0) * kPi * x) * std::sin(2 * kPi * y);
      },
      -1.0, 1.0, 5, 1e-3);
  CHECK_FALSE(rep.pass);
  CHECK(rep.failing_j == 2);
}

TEST_CASE("A0 estimate on the recentered rectangle second mode") {
  const double h = 1.0 / 64, N = 4.0;
  const auto dom = rect(N);
  const Grid g = build_grid(dom, h);
  const SparseOperator op = assemble_dirichlet_laplacian(g);
  const auto modes = solve_lowest(op, g, 2);
  const NormalizedMode nm = normalize_mode(modes[1], g, *dom);
  const ScalarField f(g, nm.values);
  // u_hat = 4 sin(pi(x-2)/2) sin(pi y) after sign normalization; the
  // least-squares slope against (x-2) sin(pi y) over |x-2| <= 1 is
  // 4 * int t sin(pi t/2) dt / int t^2 dt = (32/pi^2) / (2/3) = 48/pi^2
  const A0Estimate est = estimate_A0(f, *dom, 2.0, 1.0);
  CHECK(std::abs(est.A0) == Catch::Approx(48.0 / (kPi * kPi)).epsilon(1e-2));
  CHECK(est.in_regime);
}

TEST_CASE("landmark ordering and closed-form positions") {
  const Landmarks lm = landmarks(16.0, 0.1);
  CHECK(lm.x_prime < lm.x_plus);
  CHECK(lm.x_plus < lm.x_mid);
  CHECK(lm.x_mid < lm.x_minus);
  CHECK(lm.x_mid == Catch::Approx(0.5 * 16.1 - 0.1));
  CHECK(lm.x_plus == Catch::Approx(0.25 * 16.1 - 0.1));
  CHECK(lm.x_minus == Catch::Approx(0.75 * 16.1 - 0.1));
  CHECK(lm.x_prime == Catch::Approx(16.1 / 12.0 - 0.1));
  const RectangleReference vm{2, 16.0, 0.1};
  const auto xs = vm.critical_abscissae();
  REQUIRE(xs.size() == 2);
  CHECK(xs[0] == Catch::Approx(lm.x_plus));
  CHECK(xs[1] == Catch::Approx(lm.x_minus));
}

TEST_CASE("fit_a recovers synthetic data and is scale-consistent") {
  const double a_true = 0.09375;
  std::vector<EigenTableEntry> table;
  for (double N : {8.0, 12.0, 16.0, 24.0})
    for (int m = 1; m <= 3; ++m)
      table.push_back({m, N, expansion_model(m, N, a_true)});
  const AsymptoticFit fit = fit_a(table, 0.125);
  CHECK(std::abs(fit.a - a_true) <= 1e-8);
  CHECK_FALSE(fit.boundary_hit);
  CHECK(fit.expansion_observed);
  for (double r : fit.residuals) CHECK(std::abs(r) <= 1e-10);
}

TEST_CASE("fit_a flags residual growth with N") {
  const double a_true = 0.06;
  std::vector<EigenTableEntry> table;
  for (double N : {8.0, 16.0, 32.0})
    for (int m = 1; m <= 2; ++m)
      table.push_back({m, N, expansion_model(m, N, a_true) + 1e-4 * N});
  const AsymptoticFit fit = fit_a(table, 0.125);
  CHECK_FALSE(fit.expansion_observed);
}

TEST_CASE("dispersion correction cancels the transverse symbol error") {
  // discrete ground eigenvalue of the 1 x N strip in y only: the corrected
  // value of (4/h^2) sin^2(pi h / 2) is exactly pi^2
  const double h = 1.0 / 64;
  const double s = std::sin(kPi * h / 2);
  const double discrete = 4.0 / (h * h) * s * s;
  CHECK(dispersion_corrected(discrete, h) == Catch::Approx(kPi * kPi).epsilon(1e-14));
}

TEST_CASE("strip reference jet matches analytic derivatives") {
  const StripReference ref{1.7};
  const Jet2 j = ref.jet(0.4, 0.3);
  CHECK(j.v == Catch::Approx(1.7 * 0.4 * std::sin(0.3 * kPi)));
  CHECK(j.gx == Catch::Approx(1.7 * std::sin(0.3 * kPi)));
  CHECK(j.gy == Catch::Approx(1.7 * 0.4 * kPi * std::cos(0.3 * kPi)));
  CHECK(j.gxx == Catch::Approx(0.0).margin(1e-15));
  CHECK(j.gxy == Catch::Approx(1.7 * kPi * std::cos(0.3 * kPi)));
  CHECK(j.gyy == Catch::Approx(-1.7 * 0.4 * kPi * kPi * std::sin(0.3 * kPi)));
}
