#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace sbm {

/// Local piecewise-cubic Lagrange interpolation on a nonuniform node set.
/// Interval i = [x_i, x_{i+1}] uses the four nodes centred on it (clamped at
/// the ends), so the interpolant is continuous and exact for cubics.
template <class T>
class PiecewiseCubic {
 public:
  PiecewiseCubic() = default;
  PiecewiseCubic(std::vector<double> nodes, std::vector<T> values)
      : x_(std::move(nodes)), y_(std::move(values)) {}

  std::size_t size() const { return x_.size(); }
  std::size_t intervals() const { return x_.size() < 2 ? 0 : x_.size() - 1; }
  std::span<const double> nodes() const { return x_; }
  std::span<const T> values() const { return y_; }

  /// Index of the interval containing x (clamped to the end intervals).
  std::size_t locate(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::ptrdiff_t i = (it - x_.begin()) - 1;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(x_.size()) - 2));
  }

  std::size_t stencil_start(std::size_t interval) const {
    if (x_.size() <= 4) return 0;
    std::ptrdiff_t s = static_cast<std::ptrdiff_t>(interval) - 1;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(s, 0, static_cast<std::ptrdiff_t>(x_.size()) - 4));
  }

  T eval_in(std::size_t interval, double x) const {
    const std::size_t s = stencil_start(interval);
    const std::size_t m = std::min<std::size_t>(4, x_.size());
    T acc{};
    for (std::size_t a = 0; a < m; ++a) {
      double w = 1.0;
      for (std::size_t b = 0; b < m; ++b) {
        if (a == b) continue;
        w *= (x - x_[s + b]) / (x_[s + a] - x_[s + b]);
      }
      acc += w * y_[s + a];
    }
    return acc;
  }

  T operator()(double x) const { return eval_in(locate(x), x); }

  /// Monomial coefficients of the interval's cubic in u = (x - x_i)/h_i.
  std::array<T, 4> local_coeffs(std::size_t interval) const {
    const double a = x_[interval];
    const double h = x_[interval + 1] - a;
    // samples at u = 0, 1/3, 2/3, 1 then inverse Vandermonde
    const T p0 = eval_in(interval, a);
    const T p1 = eval_in(interval, a + h / 3.0);
    const T p2 = eval_in(interval, a + 2.0 * h / 3.0);
    const T p3 = eval_in(interval, a + h);
    std::array<T, 4> c;
    c[0] = p0;
    c[1] = (-11.0 * p0 + 18.0 * p1 - 9.0 * p2 + 2.0 * p3) / 2.0;
    c[2] = (18.0 * p0 - 45.0 * p1 + 36.0 * p2 - 9.0 * p3) / 2.0;
    c[3] = (-9.0 * p0 + 27.0 * p1 - 27.0 * p2 + 9.0 * p3) / 2.0;
    return c;
  }

 private:
  std::vector<double> x_;
  std::vector<T> y_;
};

/// Four-point Gauss-Legendre rule on [0, 1].
inline constexpr std::array<double, 4> kGauss4Nodes = {
    0.06943184420297371, 0.33000947820757187, 0.6699905217924281, 0.9305681557970262};
inline constexpr std::array<double, 4> kGauss4Weights = {
    0.17392742256872692, 0.32607257743127305, 0.32607257743127305, 0.17392742256872692};

/// Six-point Gauss-Legendre rule on [0, 1].
inline constexpr std::array<double, 6> kGauss6Nodes = {
    0.033765242898423975, 0.16939530676686776, 0.3806904069584016,
    0.6193095930415985,   0.8306046932331322,  0.966234757101576};
inline constexpr std::array<double, 6> kGauss6Weights = {
    0.08566224618958517, 0.18038078652406928, 0.23395696728634552,
    0.23395696728634552, 0.18038078652406928, 0.08566224618958517};

}  // namespace sbm
