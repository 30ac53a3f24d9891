#include <catch2/catch_amalgamated.hpp>

#include "eigencrit/critical_points.hpp"
#include "eigencrit/eigensolver.hpp"
#include "eigencrit/level_curves.hpp"

using namespace eigencrit;

namespace {

std::shared_ptr<const NormalizedDomain> rect(double N) {
  DomainSpec s;
  s.family = Family::Rectangle;
  s.N = N;
  return std::make_shared<NormalizedDomain>(make_family(s));
}

ScalarField sample(const Grid& g, const std::function<double(double, double)>& f) {
  std::vector<double> v(std::size_t(g.nx) * g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) v[std::size_t(g.node(i, j))] = f(g.x(i), g.y(j));
  return ScalarField(g, std::move(v));
}

}  // namespace

TEST_CASE("interpolant reproduces quadratics with exact derivatives") {
  const Grid g = build_grid(rect(2.0), 1.0 / 16);
  const ScalarField f =
      sample(g, [](double x, double y) { return x * x + x * y - 2 * y * y; });
  for (double x : {0.31, 1.0, 1.77})
    for (double y : {0.22, 0.5, 0.81}) {
      const Jet2 j = f.jet(x, y);
      CHECK(j.v == Catch::Approx(x * x + x * y - 2 * y * y).margin(1e-10));
      CHECK(j.gx == Catch::Approx(2 * x + y).margin(1e-9));
      CHECK(j.gy == Catch::Approx(x - 4 * y).margin(1e-9));
      CHECK(j.gxx == Catch::Approx(2.0).margin(1e-8));
      CHECK(j.gxy == Catch::Approx(1.0).margin(1e-8));
      CHECK(j.gyy == Catch::Approx(-4.0).margin(1e-8));
    }
}

TEST_CASE("Hessian classification covers all signatures") {
  CHECK(classify(-2.0, 0.0, -1.0).kind == CritKind::Max);
  CHECK(classify(2.0, 0.0, 1.0).kind == CritKind::Min);
  CHECK(classify(1.0, 0.0, -1.0).kind == CritKind::Saddle);
  CHECK(classify(1.0, 0.0, -1.0).index == -1);
  CHECK(classify(1.0, 0.0, 0.0).kind == CritKind::Degenerate);
  CHECK(classify(-2.0, 0.0, -1.0).index == 1);
}

TEST_CASE("rectangle mode-2 critical points sit at the quarter points") {
  const double h = 1.0 / 32, N = 4.0;
  const auto dom = rect(N);
  const Grid g = build_grid(dom, h);
  const SparseOperator op = assemble_dirichlet_laplacian(g);
  const auto modes = solve_lowest(op, g, 3);
  {
    const ScalarField f(g, modes[1].values);
    const auto cp = find_critical_points(f, *dom);
    REQUIRE(cp.points.size() == 2);
    CHECK(dist(cp.points[0].p, {1.0, 0.5}) <= 2 * h);
    CHECK(dist(cp.points[1].p, {3.0, 0.5}) <= 2 * h);
    CHECK(cp.points[0].kind != cp.points[1].kind);
  }
  {
    const ScalarField f(g, modes[2].values);
    const auto cp = find_critical_points(f, *dom);
    REQUIRE(cp.points.size() == 3);
    CHECK(dist(cp.points[0].p, {4.0 / 6.0, 0.5}) <= 2 * h);
    CHECK(dist(cp.points[1].p, {2.0, 0.5}) <= 2 * h);
    CHECK(dist(cp.points[2].p, {4.0 - 4.0 / 6.0, 0.5}) <= 2 * h);
  }
}

TEST_CASE("level curve of a radial field is a circle to O(h^2)") {
  const double h = 1.0 / 32;
  const Grid g = build_grid(rect(2.0), h);
  const ScalarField f = sample(g, [](double x, double y) {
    const double dx = x - 1.0, dy = y - 0.5;
    return dx * dx + dy * dy;
  });
  const double r = 0.3;
  auto curves = extract_level_curves(
      f, r * r, [&g](int i, int j) { return g.is_interior(i, j); });
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].closed);
  double worst = 0.0;
  for (const auto& p : curves[0].pts)
    worst = std::max(worst, std::abs(std::hypot(p.x - 1.0, p.y - 0.5) - r));
  CHECK(worst <= h * h);
}

TEST_CASE("level-set curvature matches the radial oracle") {
  const Grid g = build_grid(rect(2.0), 1.0 / 32);
  const ScalarField f = sample(g, [](double x, double y) {
    const double dx = x - 1.0, dy = y - 0.5;
    return dx * dx + dy * dy;
  });
  // K = -1/r on circles of u = r^2 with this orientation convention
  for (double r : {0.2, 0.3, 0.4})
    CHECK(level_curvature(f, {1.0 + r, 0.5}) ==
          Catch::Approx(-1.0 / r).epsilon(1e-6));
  CHECK_THROWS_AS(level_curvature(f, {1.0, 0.5}), Error);
}

TEST_CASE("directional field at theta = pi/2 is the y-derivative") {
  const Grid g = build_grid(rect(2.0), 1.0 / 32);
  const ScalarField f =
      sample(g, [](double x, double y) { return std::sin(kPi * x / 2) * std::sin(kPi * y); });
  const ScalarField df = directional_field(f, kPi / 2, g);
  for (double x : {0.5, 1.0, 1.5})
    CHECK(df.value(x, 0.37) ==
          Catch::Approx(kPi * std::sin(kPi * x / 2) * std::cos(kPi * 0.37))
              .margin(5e-3));
  CHECK_THROWS_AS(directional_field(f, -0.1, g), Error);
  CHECK_THROWS_AS(directional_field(f, kPi, g), Error);
}

TEST_CASE("nodal curve of the mode-2 rectangle is the vertical midline") {
  const double h = 1.0 / 32, N = 4.0;
  const auto dom = rect(N);
  const Grid g = build_grid(dom, h);
  const SparseOperator op = assemble_dirichlet_laplacian(g);
  const auto modes = solve_lowest(op, g, 2);
  const ScalarField f(g, modes[1].values);
  auto curves = nodal_curves(f, g, *dom);
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].width() <= 1e-9);
  for (const auto& p : curves[0].pts) CHECK(p.x == Catch::Approx(2.0).margin(1e-9));
  REQUIRE(curves[0].boundary_contacts.size() == 2);
  CHECK(std::abs(curves[0].boundary_contacts[0].y -
                 curves[0].boundary_contacts[1].y) == Catch::Approx(1.0).margin(2 * h));
}
