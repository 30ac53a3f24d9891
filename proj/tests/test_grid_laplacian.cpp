#include <catch2/catch_amalgamated.hpp>

#include "eigencrit/laplacian.hpp"

using namespace eigencrit;

namespace {

std::shared_ptr<const NormalizedDomain> rect(double N) {
  DomainSpec s;
  s.family = Family::Rectangle;
  s.N = N;
  return std::make_shared<NormalizedDomain>(make_family(s));
}

std::shared_ptr<const NormalizedDomain> ellipse(double N) {
  DomainSpec s;
  s.family = Family::Ellipse;
  s.N = N;
  s.axis_x = 0.5 * N;
  s.axis_y = 0.5;
  return std::make_shared<NormalizedDomain>(make_family(s));
}

}  // namespace

TEST_CASE("grid on the rectangle has full interior and unit fractions") {
  const Grid g = build_grid(rect(2.0), 1.0 / 16);
  int count = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.is_interior(i, j)) {
        ++count;
        const Grid::Frac f = g.frac[std::size_t(g.index[g.node(i, j)])];
        if (i > 1 && i < g.nx - 2 && j > 1 && j < g.ny - 2) {
          CHECK(f.e == Catch::Approx(1.0));
          CHECK(f.n == Catch::Approx(1.0));
        }
      }
  CHECK(count == (2 * 16 - 1) * (16 - 1));
}

TEST_CASE("scheme is exact on quadratics over the rectangle") {
  const Grid g = build_grid(rect(2.0), 1.0 / 16);
  const SparseOperator op = assemble_dirichlet_laplacian(g);
  // u = x^2 + x y - 3 y^2  =>  -lap u = 4
  std::vector<double> u(std::size_t(op.n()), 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index[g.node(i, j)];
      if (k >= 0) u[k] = g.x(i) * g.x(i) + g.x(i) * g.y(j) - 3 * g.y(j) * g.y(j);
    }
  const std::vector<double> Au = op.apply(u);
  for (int j = 2; j < g.ny - 2; ++j)
    for (int i = 2; i < g.nx - 2; ++i) {
      const int k = g.index[g.node(i, j)];
      REQUIRE(k >= 0);
      CHECK(Au[std::size_t(k)] == Catch::Approx(4.0).margin(1e-8));
    }
}

TEST_CASE("boundary-adjacent row uses the fractional-arm coefficients") {
  // Wall half a cell below the node: alpha_s = 1/2. With h = 1/16 the hand
  // values are diagonal 2/(1*1)/h^2 + 2/(1*0.5)/h^2 = 512 + 1024 = 1536 and
  // north neighbor -2/(1*(1+0.5))/h^2 = -1024/3. (The south arm ends on the
  // Dirichlet boundary, so no matrix entry is stored for it.)
  DomainSpec s;
  s.family = Family::CustomHeightFunctions;
  // slanted floor: f1(1) = 1/32 puts the wall half a cell below y = 1/16
  for (int i = 0; i <= 32; ++i) {
    const double x = 2.0 * i / 32.0;
    s.custom_x.push_back(x);
    s.custom_f1.push_back((1.0 / 16.0) * (1.0 - 0.5 * x));
    s.custom_f2.push_back(1.0);
  }
  const auto dom = std::make_shared<NormalizedDomain>(make_family(s));
  const double h = 1.0 / 16;
  const Grid g = build_grid(dom, h);
  int i0 = -1, j0 = -1;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.is_interior(i, j) && std::abs(g.x(i) - 1.0) < 1e-9 &&
          std::abs(g.y(j) - h) < 1e-9) { i0 = i; j0 = j; }
  REQUIRE(i0 >= 0);
  const Grid::Frac f = g.frac[std::size_t(g.index[g.node(i0, j0)])];
  CHECK(f.s == Catch::Approx(0.5));
  const SparseOperator op = assemble_dirichlet_laplacian(g);
  const int row = g.index[g.node(i0, j0)];
  const int north_col = g.index[g.node(i0, j0 + 1)];
  double diag = 0.0, north = 0.0;
  for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(op.A, row);
       it; ++it) {
    if (it.col() == row) diag = it.value();
    if (it.col() == north_col) north = it.value();
  }
  CHECK(diag == Catch::Approx(1536.0));
  CHECK(north == Catch::Approx(-1024.0 / 3.0));
}

TEST_CASE("matrix is symmetric on the rectangle") {
  const Grid g = build_grid(rect(2.0), 1.0 / 16);
  const SparseOperator op = assemble_dirichlet_laplacian(g);
  const Eigen::SparseMatrix<double> At = op.A.transpose();
  const Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(op.A) - At;
  double asym = 0.0;
  for (int c = 0; c < diff.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, c); it; ++it)
      asym = std::max(asym, std::abs(it.value()));
  CHECK(asym < 1e-12);
}

TEST_CASE("h-refinement shows second-order convergence on the ellipse") {
  // Dirichlet quadratic residual: apply the operator to the exact harmonic-
  // plus-quadratic test function and compare against -lap at interior nodes.
  auto worst = [](double h) {
    const Grid g = build_grid(ellipse(4.0), h);
    const SparseOperator op = assemble_dirichlet_laplacian(g);
    std::vector<double> u(std::size_t(op.n()), 0.0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const int k = g.index[g.node(i, j)];
        if (k >= 0) u[k] = std::sin(g.x(i)) * std::exp(g.y(j));
      }
    const std::vector<double> Au = op.apply(u);
    double w = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const int k = g.index[g.node(i, j)];
        if (k < 0) continue;
        const Grid::Frac fr = g.frac[std::size_t(k)];
        if (fr.e < 1 || fr.w < 1 || fr.n < 1 || fr.s < 1) continue;  // boundary rows are O(h)
        w = std::max(w, std::abs(Au[std::size_t(k)]));
      }
    return w;
  };
  const double e1 = worst(1.0 / 16), e2 = worst(1.0 / 32);
  CHECK(e1 / e2 >= 3.0);  // ~4 for a second-order scheme
}

TEST_CASE("mask dump writes a readable PGM") {
  const Grid g = build_grid(rect(2.0), 1.0 / 16);
  std::ostringstream os;
  dump_mask_pgm(g, os);
  const std::string s = os.str();
  CHECK(s.substr(0, 2) == "P2");
  CHECK(s.find("255") != std::string::npos);
}
