#ifndef EIGENCRIT_EIGENSOLVER_HPP
#define EIGENCRIT_EIGENSOLVER_HPP

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <random>

#include "eigencrit/laplacian.hpp"

namespace eigencrit {

struct EigenMode {
  int index = 0;                 // 1-based position in the spectrum
  double lambda = 0.0;
  std::vector<double> values;    // full grid nodes, row-major, zero outside
  double residual = 0.0;
  bool simple = true;            // false when the gap to a neighbor is < 10*tol
};

class SolveError : public Error {
 public:
  SolveError(const std::string& what, std::vector<double> best_residuals)
      : Error(what), best_residuals(std::move(best_residuals)) {}
  std::vector<double> best_residuals;
};

inline constexpr std::uint64_t kStartBasisSeed = 0x5EED;

/// Lowest m Dirichlet eigenpairs by shift-invert subspace iteration with
/// block size m+4 and shift 0.9*pi^2 (the low spectrum clusters just above
/// pi^2 for unit-height domains). The shifted operator is factorized once;
/// Ritz values come from projecting A onto the orthonormalized block.
inline std::vector<EigenMode> solve_lowest(const SparseOperator& op,
                                           const Grid& grid, int m,
                                           double tol = 1e-10,
                                           int max_iter = 2000) {
  if (m < 1 || m > 12) throw Error("solve_lowest: need 1 <= m <= 12");
  if (tol < 1e-10) throw Error("solve_lowest: tol must be >= 1e-10");
  const int n = op.n();
  const int p = std::min(n, m + 4);
  if (n < m) throw Error("solve_lowest: grid too small for requested modes");

  const double sigma = 0.9 * kPi * kPi;
  Eigen::SparseMatrix<double> B = op.A;
  for (int i = 0; i < n; ++i) B.coeffRef(i, i) -= sigma;
  B.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(B);
  lu.factorize(B);
  if (lu.info() != Eigen::Success)
    throw Error("solve_lowest: factorization of the shifted operator failed");

  std::mt19937_64 rng(kStartBasisSeed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = unif(rng);

  Eigen::MatrixXd V;
  Eigen::VectorXd ritz(p);
  std::vector<double> best_res(m, std::numeric_limits<double>::max());
  bool converged = false;

  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    Eigen::MatrixXd Y(n, p);
    for (int j = 0; j < p; ++j) Y.col(j) = lu.solve(X.col(j));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);

    // Rayleigh-Ritz on A (mildly nonsymmetric near the boundary)
    Eigen::MatrixXd AQ = op.A * Q;
    Eigen::MatrixXd H = Q.transpose() * AQ;
    Eigen::EigenSolver<Eigen::MatrixXd> es(H);
    std::vector<int> order(p);
    for (int i = 0; i < p; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
    });
    Eigen::MatrixXd W(p, p);
    for (int i = 0; i < p; ++i) {
      ritz(i) = es.eigenvalues()(order[i]).real();
      W.col(i) = es.eigenvectors().col(order[i]).real();
    }
    V = Q * W;

    converged = true;
    for (int i = 0; i < m; ++i) {
      const double nv = V.col(i).norm();
      const double r = (op.A * V.col(i) - ritz(i) * V.col(i)).norm() / nv;
      best_res[i] = std::min(best_res[i], r);
      if (r > tol * std::max(1.0, std::abs(ritz(i)))) converged = false;
    }
    X = V;
  }
  if (!converged)
    throw SolveError("solve_lowest: no convergence within iteration cap",
                     best_res);

  std::vector<EigenMode> out;
  for (int i = 0; i < m; ++i) {
    EigenMode mode;
    mode.index = i + 1;
    mode.lambda = ritz(i);
    Eigen::VectorXd v = V.col(i) / V.col(i).norm();
    mode.residual = (op.A * v - ritz(i) * v).norm();
    std::vector<double> u(v.data(), v.data() + n);
    mode.values = grid.scatter(u);
    // flag near-degenerate pairs: simplicity not resolved at this tolerance
    const double scale = std::max(1.0, std::abs(ritz(i)));
    if ((i > 0 && ritz(i) - ritz(i - 1) < 10.0 * tol * scale) ||
        (i + 1 < p && ritz(i + 1) - ritz(i) < 10.0 * tol * scale))
      mode.simple = false;
    out.push_back(std::move(mode));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normalization: u_hat = L * u / ||u||_inf, positive on the rightmost sign
// component (for the first mode: positive everywhere).
// ---------------------------------------------------------------------------

struct NormalizedMode {
  EigenMode base;
  double scale = 1.0;          // applied factor, |scale| = L / ||u||_inf
  int sign = +1;
  double L = 0.0;
  std::vector<double> values;  // full grid nodes, row-major

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

inline NormalizedMode normalize_mode(const EigenMode& mode, const Grid& grid,
                                     const NormalizedDomain& domain) {
  NormalizedMode nm;
  nm.base = mode;
  nm.L = compute_L(domain).L;
  double umax = 0.0;
  for (double v : mode.values) umax = std::max(umax, std::abs(v));
  if (!(umax > 0.0)) throw Error("normalize_mode: zero mode");

  // sign rule: positive on the rightmost sign component; this matches the
  // convention u > 0 one unit to the right of the nodal line
  const double thresh = 0.1 * umax;
  double sign_val = 0.0;
  for (int i = grid.nx - 1; i >= 0 && sign_val == 0.0; --i)
    for (int j = 0; j < grid.ny; ++j) {
      const double v = mode.values[grid.node(i, j)];
      if (std::abs(v) > thresh) { sign_val = v; break; }
    }
  nm.sign = (sign_val < 0.0) ? -1 : +1;
  nm.scale = nm.sign * nm.L / umax;
  nm.values.resize(mode.values.size());
  for (std::size_t i = 0; i < mode.values.size(); ++i)
    nm.values[i] = nm.scale * mode.values[i];
  return nm;
}

// ---------------------------------------------------------------------------
// Closed-form discrete spectrum of the grid-aligned rectangle (test oracle)
// ---------------------------------------------------------------------------

/// Eigenvalues of the 5-point Laplacian on (0,N)x(0,1) with spacing h:
/// (4/h^2) [ sin^2(j pi h / (2N)) + sin^2(k pi h / 2) ], sorted ascending.
inline std::vector<double> rectangle_spectrum_oracle(double N, double h,
                                                     int count) {
  const double inv = 1.0 / h;
  if (std::abs(inv - std::round(inv)) > 1e-9 ||
      std::abs(N * inv - std::round(N * inv)) > 1e-9)
    throw Error("rectangle_spectrum_oracle: h must divide 1 and N");
  const int jmax = int(std::round(N * inv)) - 1;
  const int kmax = int(std::round(inv)) - 1;
  std::vector<double> vals;
  for (int j = 1; j <= jmax; ++j)
    for (int k = 1; k <= kmax; ++k) {
      const double sj = std::sin(j * kPi * h / (2.0 * N));
      const double sk = std::sin(k * kPi * h / 2.0);
      vals.push_back(4.0 / (h * h) * (sj * sj + sk * sk));
    }
  std::sort(vals.begin(), vals.end());
  if (int(vals.size()) > count) vals.resize(count);
  return vals;
}

/// Continuum counterpart pi^2 (j^2/N^2 + k^2), sorted.
inline std::vector<double> rectangle_spectrum_continuum(double N, int count) {
  std::vector<double> vals;
  for (int j = 1; j <= count + 8; ++j)
    for (int k = 1; k <= count + 8; ++k)
      vals.push_back(kPi * kPi * (j * j / (N * N) + k * k));
  std::sort(vals.begin(), vals.end());
  vals.resize(count);
  return vals;
}

// ---------------------------------------------------------------------------
// Eigenfunction dumps
// ---------------------------------------------------------------------------

inline void dump_field_csv(const Grid& g, const std::vector<double>& values,
                           std::ostream& os) {
  os.precision(17);
  os << "x,y,value\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      os << g.x(i) << "," << g.y(j) << "," << values[g.node(i, j)] << "\n";
}

/// Flat binary dump: 16-byte header (int32 nx, int32 ny, float64 h) followed
/// by row-major float64 node values.
inline void dump_field_binary(const Grid& g, const std::vector<double>& values,
                              std::ostream& os) {
  const std::int32_t nx = g.nx, ny = g.ny;
  os.write(reinterpret_cast<const char*>(&nx), 4);
  os.write(reinterpret_cast<const char*>(&ny), 4);
  os.write(reinterpret_cast<const char*>(&g.h), 8);
  os.write(reinterpret_cast<const char*>(values.data()),
           std::streamsize(values.size() * 8));
}

}  // namespace eigencrit

#endif  // EIGENCRIT_EIGENSOLVER_HPP
