#pragma once

// Full-line Fourier integrals (1/2pi) int_R r(k) e^{iks} dk of functions with
// r(-k) = r(k)^*, sampled on k > 0; the result is real. The samples are
// integrated on [0, k_max] with a Filon-type rule (exact for the piecewise
// cubic interpolant); beyond k_max the data are continued by an inverse-power
// series fitted near k_max, whose transform is a generalized exponential
// integral evaluated in closed form.

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sbm/core.hpp"
#include "sbm/interp.hpp"

namespace sbm {

namespace detail {

/// E_n(z) = int_1^inf e^{-zt} t^{-n} dt for complex z off the negative real axis, n >= 1.
inline cplx expint_n(int n, cplx z) {
  constexpr double kEuler = 0.57721566490153286061;
  constexpr double kEps = 1e-16;
  if (std::abs(z) > 1.0) {
    // modified Lentz evaluation of the continued fraction
    cplx b = z + static_cast<double>(n);
    cplx c = 1e300;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 100000; ++i) {
      const double an = -static_cast<double>(i) * (n - 1 + i);
      b += 2.0;
      d = 1.0 / (an * d + b);
      c = b + an / c;
      const cplx del = c * d;
      h *= del;
      if (std::abs(del - 1.0) < kEps) break;
    }
    return h * std::exp(-z);
  }
  cplx ans = (n - 1 != 0) ? cplx(1.0 / (n - 1)) : -std::log(z) - kEuler;
  cplx fact = 1.0;
  for (int i = 1; i < 200; ++i) {
    fact *= -z / static_cast<double>(i);
    cplx del;
    if (i != n - 1) {
      del = -fact / static_cast<double>(i - n + 1);
    } else {
      double psi = -kEuler;
      for (int ii = 1; ii <= n - 1; ++ii) psi += 1.0 / ii;
      del = fact * (-std::log(z) + psi);
    }
    ans += del;
    if (std::abs(del) < std::abs(ans) * kEps) break;
  }
  return ans;
}

}  // namespace detail

class ConjSymmetricFourier {
 public:
  static constexpr int kTailTerms = 6;

  ConjSymmetricFourier() = default;

  /// fit_tail = false treats r as zero beyond k_max.
  ConjSymmetricFourier(const KGrid& grid, std::span<const cplx> values, bool fit_tail = true) {
    require(values.size() == grid.size() && grid.size() >= 8, ErrorKind::InvalidArgument,
            "ConjSymmetricFourier: bad samples");
    for (cplx v : values)
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::InvalidData,
              "ConjSymmetricFourier: non-finite sample");
    const auto k = grid.points();
    k_max_ = k.back();
    tail_.fill(0.0);
    if (fit_tail) fit(k, values);

    std::vector<double> nodes{0.0};
    nodes.insert(nodes.end(), k.begin(), k.end());
    PiecewiseCubic<cplx> head(std::vector<double>(k.begin(), k.begin() + 4),
                              std::vector<cplx>(values.begin(), values.begin() + 4));
    std::vector<cplx> vals{head.eval_in(0, 0.0)};
    vals.insert(vals.end(), values.begin(), values.end());
    PiecewiseCubic<cplx> cubic(nodes, vals);
    coeffs_.resize(nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) coeffs_[i] = cubic.local_coeffs(i);
    nodes_ = std::move(nodes);
  }

  /// (1/2pi) int_R r(k) e^{iks} dk; at s = 0 a 1/k tail contributes its right-hand limit.
  double operator()(double s) const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) acc += interval(i, s);
    return (acc.real() + tail_transform(s)) / kPi;
  }

  std::vector<double> sample(std::span<const double> s) const {
    std::vector<double> out(s.size());
    parallel_for(s.size(), [&](std::size_t i) { out[i] = (*this)(s[i]); });
    return out;
  }

  /// Coefficients d_m of the continuation sum_m d_m (k_max/k)^m, m = 1..6.
  const std::array<cplx, kTailTerms>& tail_coefficients() const { return tail_; }

 private:
  // odd powers carry imaginary, even powers real coefficients so that the
  // continuation keeps r(-k) = r(k)^*
  void fit(std::span<const double> k, std::span<const cplx> values) {
    const double K = k.back();
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] >= 0.5 * K) rows.push_back(i);
    Eigen::MatrixXd A(2 * rows.size(), kTailTerms);
    Eigen::VectorXd b(2 * rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double u = K / k[rows[r]];
      for (int m = 1; m <= kTailTerms; ++m) {
        const cplx basis = (m % 2 == 1 ? kI : cplx(1.0)) * std::pow(u, m);
        A(2 * r, m - 1) = basis.real();
        A(2 * r + 1, m - 1) = basis.imag();
      }
      b(2 * r) = values[rows[r]].real();
      b(2 * r + 1) = values[rows[r]].imag();
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
    for (int m = 1; m <= kTailTerms; ++m) tail_[m - 1] = (m % 2 == 1 ? kI : cplx(1.0)) * x(m - 1);
  }

  // Re int_K^inf sum_m d_m (K/k)^m e^{iks} dk = Re sum_m d_m K E_m(-iKs)
  double tail_transform(double s) const {
    const double K = k_max_;
    double acc = 0.0;
    for (int m = 1; m <= kTailTerms; ++m) {
      const cplx d = tail_[m - 1];
      if (d == cplx(0.0)) continue;
      if (s == 0.0) {
        // right-hand limit; the m = 1 term has purely imaginary d
        acc += (m == 1) ? -d.imag() * K * kPi / 2.0 : d.real() * K / (m - 1);
        continue;
      }
      const cplx e = detail::expint_n(m, cplx(0.0, -K * std::abs(s)));
      const cplx t = s > 0.0 ? e : std::conj(e);
      acc += (d * K * t).real();
    }
    return acc;
  }

  cplx interval(std::size_t i, double s) const {
    const double a = nodes_[i], h = nodes_[i + 1] - a;
    const auto& c = coeffs_[i];
    if (std::abs(s) * h < 0.5) {
      cplx acc = 0.0;
      for (std::size_t q = 0; q < 6; ++q) {
        const double u = kGauss6Nodes[q];
        const cplx p = c[0] + u * (c[1] + u * (c[2] + u * c[3]));
        acc += kGauss6Weights[q] * p * std::polar(1.0, (a + h * u) * s);
      }
      return acc * h;
    }
    // repeated integration by parts, exact for the cubic
    const cplx is(0.0, s);
    auto primitive = [&](double u) {
      const cplx p = c[0] + u * (c[1] + u * (c[2] + u * c[3]));
      const cplx d1 = (c[1] + u * (2.0 * c[2] + 3.0 * u * c[3])) / h;
      const cplx d2 = (2.0 * c[2] + 6.0 * u * c[3]) / (h * h);
      const cplx d3 = 6.0 * c[3] / (h * h * h);
      return std::polar(1.0, (a + h * u) * s) *
             (p / is - d1 / (is * is) + d2 / (is * is * is) - d3 / (is * is * is * is));
    };
    return primitive(1.0) - primitive(0.0);
  }

  double k_max_ = 0.0;
  std::array<cplx, kTailTerms> tail_{};
  std::vector<double> nodes_;
  std::vector<std::array<cplx, 4>> coeffs_;
};

}  // namespace sbm
