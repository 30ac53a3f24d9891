#ifndef EIGENCRIT_LAPLACIAN_HPP
#define EIGENCRIT_LAPLACIAN_HPP

#include <Eigen/Sparse>
#include <fstream>

#include "eigencrit/grid.hpp"

namespace eigencrit {

/// Discrete -Laplacian with Dirichlet data, row-major CSR. Rows at nodes
/// with all four fractions equal to one reduce to the 5-point stencil.
struct SparseOperator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> A;
  int n() const { return int(A.rows()); }

  void apply(const double* x, double* y) const {
    Eigen::Map<const Eigen::VectorXd> xv(x, A.cols());
    Eigen::Map<Eigen::VectorXd> yv(y, A.rows());
    yv = A * xv;
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(x.size());
    apply(x.data(), y.data());
    return y;
  }

  /// Coordinate-format text dump (row col value per line) for cross-checks.
  void dump_coo(std::ostream& os) const {
    os.precision(17);
    for (int r = 0; r < A.outerSize(); ++r)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, r);
           it; ++it)
        os << r << " " << it.col() << " " << it.value() << "\n";
  }
};

/// Shortley-Weller assembly. At a node with arm fractions (aE, aW, aN, aS)
/// the second derivative along x is approximated by
///   u_xx ~ 2/(aE(aE+aW)) uE + 2/(aW(aE+aW)) uW - 2/(aE aW) uC, all over h^2,
/// which is exact on quadratics; neighbors on the boundary carry value zero
/// and drop out of the matrix.
inline SparseOperator assemble_dirichlet_laplacian(const Grid& g) {
  using T = Eigen::Triplet<double>;
  std::vector<T> trips;
  trips.reserve(std::size_t(g.n_unknowns()) * 5);
  const double h2 = g.h * g.h;
  for (int k = 0; k < g.n_unknowns(); ++k) {
    const int id = g.unknown_node[k];
    const int i = id % g.nx, j = id / g.nx;
    const auto& f = g.frac[k];
    const double cE = 2.0 / (f.e * (f.e + f.w)) / h2;
    const double cW = 2.0 / (f.w * (f.e + f.w)) / h2;
    const double cN = 2.0 / (f.n * (f.n + f.s)) / h2;
    const double cS = 2.0 / (f.s * (f.n + f.s)) / h2;
    // negated sum of the neighbor coefficients
    trips.emplace_back(k, k, 2.0 / (f.e * f.w) / h2 + 2.0 / (f.n * f.s) / h2);
    if (f.e >= 1.0 && g.is_interior(i + 1, j))
      trips.emplace_back(k, g.index[g.node(i + 1, j)], -cE);
    if (f.w >= 1.0 && g.is_interior(i - 1, j))
      trips.emplace_back(k, g.index[g.node(i - 1, j)], -cW);
    if (f.n >= 1.0 && g.is_interior(i, j + 1))
      trips.emplace_back(k, g.index[g.node(i, j + 1)], -cN);
    if (f.s >= 1.0 && g.is_interior(i, j - 1))
      trips.emplace_back(k, g.index[g.node(i, j - 1)], -cS);
  }
  SparseOperator op;
  op.A.resize(g.n_unknowns(), g.n_unknowns());
  op.A.setFromTriplets(trips.begin(), trips.end());
  op.A.makeCompressed();
  return op;
}

/// Interior mask as a portable graymap (P2): white inside, black outside.
inline void dump_mask_pgm(const Grid& g, std::ostream& os) {
  os << "P2\n" << g.nx << " " << g.ny << "\n255\n";
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i)
      os << (g.index[g.node(i, j)] >= 0 ? 255 : 0) << (i + 1 < g.nx ? " " : "");
    os << "\n";
  }
}

}  // namespace eigencrit

#endif  // EIGENCRIT_LAPLACIAN_HPP
