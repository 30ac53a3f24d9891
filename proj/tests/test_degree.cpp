#include <catch2/catch_amalgamated.hpp>

#include "eigencrit/degree.hpp"

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

TEST_CASE("T of the strip profile matches the hand computation") {
  // u = x sin(pi y):  T = (-pi^2 x, -(pi/2) sin(2 pi y))
  const Grid g = build_grid(rect(2.0), 1.0 / 64);
  const ScalarField f =
      sample(g, [](double x, double y) { return x * std::sin(kPi * y); });
  // second derivatives of the C1 bicubic are first-order at cell corners,
  // so the comparison tolerance is a few percent at h = 1/64
  const auto [t1, t2] = vector_field_T(f, {1.0, 0.25});
  CHECK(t1 == Catch::Approx(-kPi * kPi).epsilon(3e-2));
  CHECK(t2 == Catch::Approx(-kPi / 2.0).epsilon(3e-2));
}

TEST_CASE("winding of explicit fields around the origin") {
  auto loop = circle_path({0.0, 0.0}, 1.0, 128);
  const DegreeReport rot = winding_number(
      [](Pt p) { return std::pair{-p.y, p.x}; }, loop);
  CHECK(rot.winding == 1);
  const DegreeReport saddle = winding_number(
      [](Pt p) { return std::pair{p.x, -p.y}; }, loop);
  CHECK(saddle.winding == -1);
  const DegreeReport dbl = winding_number(
      [](Pt p) { return std::pair{p.x * p.x - p.y * p.y, 2 * p.x * p.y}; }, loop);
  CHECK(dbl.winding == 2);
  const DegreeReport off = winding_number(
      [](Pt p) { return std::pair{p.x + 3.0, p.y}; }, loop);
  CHECK(off.winding == 0);
}

TEST_CASE("winding refines coarse paths instead of aliasing") {
  // 5 samples around a degree-2 zero force angle steps beyond pi/2
  auto loop = circle_path({0.0, 0.0}, 1.0, 5);
  const DegreeReport rep = winding_number(
      [](Pt p) { return std::pair{p.x * p.x - p.y * p.y, 2 * p.x * p.y}; }, loop);
  CHECK(rep.winding == 2);
  CHECK(rep.refinements > 0);
}

TEST_CASE("winding rejects paths through the zero set") {
  auto loop = circle_path({1.0, 0.0}, 1.0, 64);  // passes through the origin
  CHECK_THROWS_AS(
      winding_number([](Pt p) { return std::pair{p.x, p.y}; }, loop), Error);
}

TEST_CASE("winding is additive over subdivision of the enclosed zeros") {
  // field with zeros at (+-1/2, 0): indices +1 and +1
  auto field = [](Pt p) {
    const double ax = p.x - 0.5, bx = p.x + 0.5;
    // product of two rotations: (a+ib)(c+id) with a=(ax,y), c=(bx,y)
    return std::pair{ax * bx - p.y * p.y, p.y * (ax + bx)};
  };
  const DegreeReport both = winding_number(field, circle_path({0, 0}, 1.0, 256));
  const DegreeReport left = winding_number(field, circle_path({-0.5, 0}, 0.3, 128));
  const DegreeReport right = winding_number(field, circle_path({0.5, 0}, 0.3, 128));
  CHECK(both.winding == left.winding + right.winding);
  CHECK(both.winding == 2);
}

TEST_CASE("convex polygon inset stays inside and preserves orientation") {
  std::vector<Pt> square = {{0, 0}, {4, 0}, {4, 2}, {0, 2}};
  const auto inner = detail::inset_convex_polygon(square, 0.5);
  REQUIRE(inner.size() >= 4);
  double area2 = 0.0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const Pt& a = inner[i];
    const Pt& b = inner[(i + 1) % inner.size()];
    area2 += a.x * b.y - b.x * a.y;
    CHECK(a.x >= 0.5 - 1e-9);
    CHECK(a.x <= 3.5 + 1e-9);
    CHECK(a.y >= 0.5 - 1e-9);
    CHECK(a.y <= 1.5 + 1e-9);
  }
  CHECK(area2 > 0.0);                       // still counterclockwise
  CHECK(area2 / 2 == Catch::Approx(3.0));   // 3 x 1 box
}

TEST_CASE("gradient and T fields agree with the curvature identity") {
  const Grid g = build_grid(rect(2.0), 1.0 / 64);
  const ScalarField f = sample(g, [](double x, double y) {
    return std::sin(kPi * x / 2) * std::sin(kPi * y);
  });
  for (double x : {0.4, 1.3, 1.7})
    for (double y : {0.21, 0.6}) {
      const Jet2 j = f.jet(x, y);
      const auto [t1, t2] = vector_field_T(f, {x, y});
      const double lhs = t1 * j.gx + t2 * j.gy;
      const double gnorm = j.grad_norm();
      const double rhs = -level_curvature(j) * gnorm * gnorm * gnorm;
      CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
    }
}
