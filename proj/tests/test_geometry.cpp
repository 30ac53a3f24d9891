#include <catch2/catch_amalgamated.hpp>

#include "eigencrit/geometry.hpp"

using namespace eigencrit;

namespace {
DomainSpec rect4() {
  DomainSpec s;
  s.family = Family::Rectangle;
  s.N = 4;
  return s;
}
}  // namespace

TEST_CASE("monotone cubic interpolates its nodes and stays monotone") {
  MonotoneCubic f({0.0, 1.0, 2.0, 4.0}, {0.0, 1.0, 1.5, 1.6});
  CHECK(f(0.0) == Catch::Approx(0.0));
  CHECK(f(1.0) == Catch::Approx(1.0));
  CHECK(f(4.0) == Catch::Approx(1.6));
  double prev = f(0.0);
  for (int i = 1; i <= 400; ++i) {
    const double v = f(i / 100.0);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("rectangle family has flat height functions and exact metrics") {
  const NormalizedDomain dom = make_family(rect4());
  CHECK(dom.a() == Catch::Approx(0.0));
  CHECK(dom.b() == Catch::Approx(4.0));
  CHECK(dom.f1(1.7) == Catch::Approx(0.0).margin(1e-12));
  CHECK(dom.f2(2.3) == Catch::Approx(1.0));
  CHECK(dom.inside(2.0, 0.5));
  CHECK_FALSE(dom.inside(2.0, 1.5));
  // diameter sqrt(N^2+1), inradius 1/2
  CHECK(diameter(dom) == Catch::Approx(std::sqrt(17.0)).epsilon(1e-6));
  CHECK(inradius(dom) == Catch::Approx(0.5).epsilon(1e-3));
  CHECK(eccentricity(dom) ==
        Catch::Approx(2.0 * std::sqrt(17.0)).epsilon(2e-3));
}

TEST_CASE("ellipse height functions match the closed form") {
  DomainSpec s;
  s.family = Family::Ellipse;
  s.N = 8;
  s.axis_x = 4.0;
  s.axis_y = 0.5;
  const NormalizedDomain dom = make_family(s);
  for (double x : {-3.0, -1.0, 0.0, 2.0, 3.5}) {
    const double half = 0.5 * std::sqrt(1.0 - x * x / 16.0);
    CHECK(dom.f2(x) == Catch::Approx(0.5 + half).margin(1e-5));
    CHECK(dom.f1(x) == Catch::Approx(0.5 - half).margin(1e-5));
  }
}

TEST_CASE("perturbed rectangle carries the cap on the left") {
  CapFunction phi;
  phi.kind = CapFunction::Kind::Parabolic;
  phi.c = 0.5;  // phi(y) = y(1-y)/2, max 1/8
  DomainSpec s;
  s.family = Family::PerturbedRectangle;
  s.N = 8;
  s.phi = phi;
  const NormalizedDomain dom = make_family(s);
  CHECK(dom.a() == Catch::Approx(-0.125).margin(1e-9));
  CHECK(dom.inside(-0.12, 0.5));
  CHECK_FALSE(dom.inside(-0.12, 0.05));
  CHECK(dom.inside(7.9, 0.5));
}

TEST_CASE("convexity check rejects a dented domain with a witness") {
  DomainSpec s;
  s.family = Family::CustomHeightFunctions;
  for (int i = 0; i <= 64; ++i) {
    const double x = 8.0 * i / 64.0;
    s.custom_x.push_back(x);
    s.custom_f1.push_back(0.0);
    // dent in the top boundary
    s.custom_f2.push_back(1.0 - 0.2 * std::exp(-8.0 * (x - 4.0) * (x - 4.0)));
  }
  CHECK_THROWS_AS(make_family(s), Error);
}

TEST_CASE("normalize_domain rotates and scales a tilted rectangle to width 1") {
  // rectangle 6 x 1.5 rotated by 0.3 rad
  std::vector<Pt> cloud;
  const double c = std::cos(0.3), sn = std::sin(0.3);
  for (int i = 0; i <= 60; ++i)
    for (int j = 0; j <= 15; ++j) {
      const double x = 6.0 * i / 60.0, y = 1.5 * j / 15.0;
      cloud.push_back({c * x - sn * y, sn * x + c * y});
    }
  const NormalizedDomain dom = normalize_domain(cloud);
  double maxh = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = dom.a() + (dom.b() - dom.a()) * i / 100.0;
    maxh = std::max(maxh, dom.f2(x) - dom.f1(x));
  }
  CHECK(maxh == Catch::Approx(1.0).margin(1e-5));
  CHECK(dom.b() - dom.a() == Catch::Approx(4.0).margin(1e-5));
}

TEST_CASE("compute_L equals N on the rectangle") {
  const LengthScale ls = compute_L(make_family(rect4()));
  CHECK(ls.L == Catch::Approx(4.0).margin(1e-5));
}

TEST_CASE("compute_L fixed point on the ellipse") {
  DomainSpec s;
  s.family = Family::Ellipse;
  s.N = 16;
  s.axis_x = 8.0;
  s.axis_y = 0.5;
  const NormalizedDomain dom = make_family(s);
  const LengthScale ls = compute_L(dom);
  // self-consistency: the level interval at 1 - 1/L^2 has length L
  const double half = 8.0 * std::sqrt(1.0 - std::pow(1.0 - 1.0 / (ls.L * ls.L), 2));
  CHECK(2.0 * half == Catch::Approx(ls.L).epsilon(1e-4));
}
