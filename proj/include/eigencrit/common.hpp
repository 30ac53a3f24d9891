#ifndef EIGENCRIT_COMMON_HPP
#define EIGENCRIT_COMMON_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigencrit {

inline constexpr double kPi = 3.14159265358979323846;

struct Pt {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(const Pt& a, const Pt& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Error type for all precondition/diagnostic failures in the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// FNV-1a, used for config hashing (stable across platforms and runs).
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Monotone cubic (Fritsch-Carlson) interpolant on strictly increasing knots.
/// Shape-preserving, C1; evaluation clamps to the knot range.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw Error("MonotoneCubic: need >= 2 samples");
    m_.assign(n, 0.0);
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double dx = x_[i + 1] - x_[i];
      if (!(dx > 0.0)) throw Error("MonotoneCubic: knots must increase");
      d[i] = (y_[i + 1] - y_[i]) / dx;
    }
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        m_[i] = 0.0;
      } else {
        // harmonic mean weighting keeps the interpolant monotone
        const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
        const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
        m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
    // clip endpoint slopes (Fritsch-Carlson condition at the ends)
    for (std::size_t e : {std::size_t(0), n - 1}) {
      const std::size_t k = (e == 0) ? 0 : n - 2;
      if (d[k] == 0.0) {
        m_[e] = 0.0;
      } else if (m_[e] / d[k] < 0.0) {
        m_[e] = 0.0;
      } else if (std::abs(m_[e]) > 3.0 * std::abs(d[k])) {
        m_[e] = 3.0 * d[k];
      }
    }
  }

  double xmin() const { return x_.front(); }
  double xmax() const { return x_.back(); }

  double operator()(double x) const {
    const auto [i, t, hx] = locate(x);
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * hx * m_[i] + h01 * y_[i + 1] + h11 * hx * m_[i + 1];
  }

  double deriv(double x) const {
    const auto [i, t, hx] = locate(x);
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / hx;
    const double g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / hx;
    const double g11 = 3 * t2 - 2 * t;
    return g00 * y_[i] + g10 * m_[i] + g01 * y_[i + 1] + g11 * m_[i + 1];
  }

  std::size_t size() const { return x_.size(); }

 private:
  struct Loc { std::size_t i; double t; double hx; };

  Loc locate(double x) const {
    if (x <= x_.front()) return {0, 0.0, x_[1] - x_[0]};
    const std::size_t n = x_.size();
    if (x >= x_.back()) return {n - 2, 1.0, x_[n - 1] - x_[n - 2]};
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    const double hx = x_[lo + 1] - x_[lo];
    return {lo, (x - x_[lo]) / hx, hx};
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace eigencrit

#endif  // EIGENCRIT_COMMON_HPP
