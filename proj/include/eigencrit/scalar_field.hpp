#ifndef EIGENCRIT_SCALAR_FIELD_HPP
#define EIGENCRIT_SCALAR_FIELD_HPP

#include "eigencrit/grid.hpp"

namespace eigencrit {

/// Value and derivatives of a field at a point.
struct Jet2 {
  double v = 0, gx = 0, gy = 0, gxx = 0, gxy = 0, gyy = 0;
  double grad_norm() const { return std::hypot(gx, gy); }
};

/// Grid-sampled scalar field with a C1 bicubic (Hermite) interpolant.
/// Node derivatives come from centered differences, so the gradient of the
/// interpolant reproduces the centered stencil exactly at nodes.
class ScalarField {
 public:
  ScalarField() = default;

  ScalarField(const Grid& grid, std::vector<double> node_values)
      : h_(grid.h), x0_(grid.x0), y0_(grid.y0), nx_(grid.nx), ny_(grid.ny),
        v_(std::move(node_values)) {
    if (v_.size() != std::size_t(nx_) * ny_)
      throw Error("ScalarField: node value count mismatch");
    build_derivatives();
  }

  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double x(int i) const { return x0_ + i * h_; }
  double y(int j) const { return y0_ + j * h_; }
  double node_value(int i, int j) const { return v_[idx(i, j)]; }
  const std::vector<double>& values() const { return v_; }

  /// Centered-difference gradient at a node (what the interpolant carries).
  std::pair<double, double> node_gradient(int i, int j) const {
    return {tx_[idx(i, j)] / h_, ty_[idx(i, j)] / h_};
  }

  double value(double x, double y) const { return jet(x, y).v; }

  Jet2 jet(double x, double y) const {
    int i = int(std::floor((x - x0_) / h_));
    int j = int(std::floor((y - y0_) / h_));
    i = std::clamp(i, 0, nx_ - 2);
    j = std::clamp(j, 0, ny_ - 2);
    const double t = (x - x0_) / h_ - i;
    const double s = (y - y0_) / h_ - j;

    double A[4][4];
    cell_coeffs(i, j, A);

    const double T[4] = {1.0, t, t * t, t * t * t};
    const double Tp[4] = {0.0, 1.0, 2.0 * t, 3.0 * t * t};
    const double Tpp[4] = {0.0, 0.0, 2.0, 6.0 * t};
    const double S[4] = {1.0, s, s * s, s * s * s};
    const double Sp[4] = {0.0, 1.0, 2.0 * s, 3.0 * s * s};
    const double Spp[4] = {0.0, 0.0, 2.0, 6.0 * s};

    auto form = [&A](const double* a, const double* b) {
      double r = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) r += a[k] * A[k][l] * b[l];
      return r;
    };
    Jet2 out;
    out.v = form(T, S);
    out.gx = form(Tp, S) / h_;
    out.gy = form(T, Sp) / h_;
    out.gxx = form(Tpp, S) / (h_ * h_);
    out.gxy = form(Tp, Sp) / (h_ * h_);
    out.gyy = form(T, Spp) / (h_ * h_);
    return out;
  }

 private:
  std::size_t idx(int i, int j) const { return std::size_t(j) * nx_ + i; }

  void build_derivatives() {
    const std::size_t n = v_.size();
    tx_.assign(n, 0.0);
    ty_.assign(n, 0.0);
    txy_.assign(n, 0.0);
    auto dcol = [this](int i, int j, int di, int dj) {
      return v_[idx(i + di, j + dj)];
    };
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) {
        // derivatives in cell units (already multiplied by h)
        if (i == 0) tx_[idx(i, j)] = dcol(i, j, 1, 0) - dcol(i, j, 0, 0);
        else if (i == nx_ - 1) tx_[idx(i, j)] = dcol(i, j, 0, 0) - dcol(i, j, -1, 0);
        else tx_[idx(i, j)] = 0.5 * (dcol(i, j, 1, 0) - dcol(i, j, -1, 0));
        if (j == 0) ty_[idx(i, j)] = dcol(i, j, 0, 1) - dcol(i, j, 0, 0);
        else if (j == ny_ - 1) ty_[idx(i, j)] = dcol(i, j, 0, 0) - dcol(i, j, 0, -1);
        else ty_[idx(i, j)] = 0.5 * (dcol(i, j, 0, 1) - dcol(i, j, 0, -1));
      }
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) {
        if (i == 0) txy_[idx(i, j)] = ty_[idx(i + 1, j)] - ty_[idx(i, j)];
        else if (i == nx_ - 1) txy_[idx(i, j)] = ty_[idx(i, j)] - ty_[idx(i - 1, j)];
        else txy_[idx(i, j)] = 0.5 * (ty_[idx(i + 1, j)] - ty_[idx(i - 1, j)]);
      }
  }

  void cell_coeffs(int i, int j, double A[4][4]) const {
    // F holds values/derivatives at the four corners in Hermite layout
    const std::size_t c00 = idx(i, j), c10 = idx(i + 1, j);
    const std::size_t c01 = idx(i, j + 1), c11 = idx(i + 1, j + 1);
    const double F[4][4] = {
        {v_[c00], v_[c01], ty_[c00], ty_[c01]},
        {v_[c10], v_[c11], ty_[c10], ty_[c11]},
        {tx_[c00], tx_[c01], txy_[c00], txy_[c01]},
        {tx_[c10], tx_[c11], txy_[c10], txy_[c11]},
    };
    static constexpr double M[4][4] = {
        {1, 0, 0, 0}, {0, 0, 1, 0}, {-3, 3, -2, -1}, {2, -2, 1, 1}};
    double MF[4][4];
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += M[r][k] * F[k][c];
        MF[r][c] = s;
      }
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += MF[r][k] * M[c][k];
        A[r][c] = s;
      }
  }

  double h_ = 1.0, x0_ = 0.0, y0_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<double> v_, tx_, ty_, txy_;
};

/// Directional derivative field u_theta = cos(theta) u_x + sin(theta) u_y,
/// sampled at grid nodes from the interpolant's node gradient.
inline ScalarField directional_field(const ScalarField& f, double theta,
                                     const Grid& grid) {
  if (theta < 0.0 || theta >= kPi)
    throw Error("directional_field: theta must lie in [0, pi)");
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<double> vals(std::size_t(grid.nx) * grid.ny, 0.0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const auto [gx, gy] = f.node_gradient(i, j);
      vals[grid.node(i, j)] = c * gx + s * gy;
    }
  return ScalarField(grid, std::move(vals));
}

/// Signed curvature of the level set through `point`:
///   K = -(u_yy u_x^2 - 2 u_xy u_x u_y + u_xx u_y^2) / |grad u|^3.
inline double level_curvature(const Jet2& j) {
  const double g = j.grad_norm();
  if (g <= 1e-8) throw Error("level_curvature: curvature undefined at critical point");
  return -(j.gyy * j.gx * j.gx - 2.0 * j.gxy * j.gx * j.gy +
           j.gxx * j.gy * j.gy) / (g * g * g);
}

inline double level_curvature(const ScalarField& f, const Pt& p) {
  const Jet2 j = f.jet(p.x, p.y);
  const double g = j.grad_norm();
  if (g <= 1e-8) throw Error("level_curvature: curvature undefined at critical point");
  return -(j.gyy * j.gx * j.gx - 2.0 * j.gxy * j.gx * j.gy +
           j.gxx * j.gy * j.gy) / (g * g * g);
}

}  // namespace eigencrit

#endif  // EIGENCRIT_SCALAR_FIELD_HPP
