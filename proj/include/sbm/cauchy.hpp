#pragma once

// Cauchy integrals of sampled functions over the half line and the full line.
//
// The integrand is a piecewise cubic on {0, k_0, ..., k_max}. Intervals far
// from the evaluation point use four-point Gauss sums; near intervals are
// integrated exactly against 1/(t - z), which also yields principal values
// and the boundary limits z +/- i0 for real z. Beyond k_max the samples are
// continued by a short inverse-power series fitted on [k_max/2, k_max].

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sbm/core.hpp"
#include "sbm/interp.hpp"

namespace sbm {

enum class TailModel {
  None,        ///< integrand treated as zero beyond k_max
  EvenPowers,  ///< c2/t^2 + c4/t^4 + ... + c10/t^10
  OddPowers,   ///< c1/t + c3/t^3 + ... + c9/t^9
};

namespace detail {

/// log x with the boundary convention used for real evaluation points:
/// x = 0 gives 0 (the divergent pieces cancel pairwise in a principal value),
/// x < 0 real gives log|x| - side*i*pi, i.e. the limit of log(x - side*i0).
inline cplx boundary_log(cplx x, int side) {
  if (x.imag() == 0.0) {
    if (x.real() == 0.0) return 0.0;
    if (x.real() < 0.0) return cplx(std::log(-x.real()), -side * kPi);
    return std::log(x.real());
  }
  return std::log(x);
}

/// int_K^inf dt / (t^m (t - z)), m >= 1.
inline cplx tail_kernel(int m, double K, cplx z, int side) {
  const cplx w = z / K;
  if (std::abs(w) < 0.5) {
    cplx acc = 0.0, pw = 1.0;
    for (int j = m; j < m + 60; ++j) {
      const cplx term = pw / static_cast<double>(j);
      acc += term;
      if (std::abs(term) < 1e-18 * std::abs(acc)) break;
      pw *= w;
    }
    return acc / std::pow(K, m);
  }
  cplx acc = -boundary_log(K - z, side) + std::log(K);
  cplx pw = 1.0;
  for (int j = 1; j < m; ++j) {
    pw *= w;
    acc -= pw / static_cast<double>(j);
  }
  return acc / std::pow(z, m);
}

}  // namespace detail

/// C(z) = int_0^inf g(t)/(t - z) dt for samples of g on a KGrid.
class HalfLineCauchy {
 public:
  HalfLineCauchy() = default;

  HalfLineCauchy(const KGrid& grid, std::span<const cplx> values, TailModel tail = TailModel::EvenPowers)
      : tail_(tail) {
    require(values.size() == grid.size(), ErrorKind::InvalidArgument, "HalfLineCauchy: length mismatch");
    require(grid.size() >= 8, ErrorKind::InvalidArgument, "HalfLineCauchy: grid too small");
    const auto k = grid.points();
    // value at t = 0 by cubic extrapolation from the first four samples
    PiecewiseCubic<cplx> head(std::vector<double>(k.begin(), k.begin() + 4),
                              std::vector<cplx>(values.begin(), values.begin() + 4));
    std::vector<double> nodes;
    std::vector<cplx> vals;
    nodes.reserve(k.size() + 1);
    vals.reserve(k.size() + 1);
    nodes.push_back(0.0);
    vals.push_back(head.eval_in(0, 0.0));
    nodes.insert(nodes.end(), k.begin(), k.end());
    vals.insert(vals.end(), values.begin(), values.end());
    cubic_ = PiecewiseCubic<cplx>(nodes, vals);
    nodes_ = std::move(nodes);

    const std::size_t m = nodes_.size() - 1;
    coeffs_.resize(m);
    gauss_t_.resize(m);
    gauss_w_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      coeffs_[i] = cubic_.local_coeffs(i);
      const double a = nodes_[i], h = nodes_[i + 1] - a;
      for (std::size_t q = 0; q < 4; ++q) {
        const double u = kGauss4Nodes[q];
        const auto& c = coeffs_[i];
        gauss_t_[i][q] = a + h * u;
        gauss_w_[i][q] = h * kGauss4Weights[q] * (c[0] + u * (c[1] + u * (c[2] + u * c[3])));
      }
    }
    fit_tail(values);
  }

  /// Integral against 1/(t - z). For real z the result is the limit from
  /// z + side*i0 (side = +1 from above, -1 from below).
  cplx operator()(cplx z, int side = +1) const {
    cplx acc = 0.0;
    const std::size_t m = coeffs_.size();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = nodes_[i], b = nodes_[i + 1], h = b - a;
      const double dre = z.real() < a ? a - z.real() : (z.real() > b ? z.real() - b : 0.0);
      const double dist = std::hypot(dre, z.imag());
      if (dist > kNearFactor * h) {
        const auto& t = gauss_t_[i];
        const auto& w = gauss_w_[i];
        acc += w[0] / (t[0] - z) + w[1] / (t[1] - z) + w[2] / (t[2] - z) + w[3] / (t[3] - z);
      } else {
        acc += near_interval(i, z, side);
      }
    }
    return acc + tail(z, side);
  }

  double k_max() const { return nodes_.back(); }
  /// Extrapolated integrand value at t = 0.
  cplx value_at_zero() const { return cubic_.values()[0]; }

 private:
  static constexpr double kNearFactor = 4.0;
  static constexpr int kTailTerms = 5;

  cplx near_interval(std::size_t i, cplx z, int side) const {
    const double a = nodes_[i], h = nodes_[i + 1] - a;
    const auto& c = coeffs_[i];
    const cplx w = (z - a) / h;
    const cplx pw = c[0] + w * (c[1] + w * (c[2] + w * c[3]));
    const cplx logs = detail::boundary_log(nodes_[i + 1] - z, side) - detail::boundary_log(a - z, side);
    // (p(u) - p(w))/(u - w) integrated over u in [0, 1]
    const cplx poly = c[1] + c[2] * (w + 0.5) + c[3] * (w * w + 0.5 * w + 1.0 / 3.0);
    return pw * logs + poly;
  }

  void fit_tail(std::span<const cplx> values) {
    tail_coef_.fill(0.0);
    if (tail_ == TailModel::None) return;
    const double K = nodes_.back();
    const auto k = std::span<const double>(nodes_).subspan(1);
    const int first = tail_ == TailModel::EvenPowers ? 2 : 1;
    for (int r = 0; r < kTailTerms; ++r) powers_[r] = first + 2 * r;
    // least squares for g(t) = sum_r d_r (K/t)^{p_r} on [K/2, K]
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] >= 0.5 * K) rows.push_back(i);
    require(rows.size() >= static_cast<std::size_t>(2 * kTailTerms), ErrorKind::IntegrationFailure,
            "HalfLineCauchy: too few samples for the tail fit");
    Eigen::MatrixXd A(rows.size(), kTailTerms);
    Eigen::MatrixXd b(rows.size(), 2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double u = K / k[rows[r]];
      for (int c = 0; c < kTailTerms; ++c) A(r, c) = std::pow(u, powers_[c]);
      b(r, 0) = values[rows[r]].real();
      b(r, 1) = values[rows[r]].imag();
    }
    const Eigen::MatrixXd d = A.colPivHouseholderQr().solve(b);
    for (int c = 0; c < kTailTerms; ++c) tail_coef_[c] = cplx(d(c, 0), d(c, 1));
  }

  cplx tail(cplx z, int side) const {
    if (tail_ == TailModel::None) return 0.0;
    const double K = nodes_.back();
    cplx acc = 0.0;
    for (int r = 0; r < kTailTerms; ++r) {
      if (tail_coef_[r] == cplx(0.0)) continue;
      acc += tail_coef_[r] * std::pow(K, powers_[r]) * detail::tail_kernel(powers_[r], K, z, side);
    }
    return acc;
  }

  TailModel tail_ = TailModel::None;
  std::vector<double> nodes_;
  PiecewiseCubic<cplx> cubic_;
  std::vector<std::array<cplx, 4>> coeffs_;
  std::vector<std::array<double, 4>> gauss_t_;
  std::vector<std::array<cplx, 4>> gauss_w_;
  std::array<cplx, kTailTerms> tail_coef_{};
  std::array<int, kTailTerms> powers_{};
};

/// Full-line Cauchy integral int_R g(t)/(t - z - i0) dt for samples of g on
/// k > 0 with g(-t) = sign * g(t).
class LineCauchy {
 public:
  LineCauchy() = default;
  LineCauchy(const KGrid& grid, std::span<const cplx> values, int sign, TailModel tail)
      : half_(grid, values, tail), sign_(sign) {
    require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "LineCauchy: sign must be +1 or -1");
  }

  /// z in the closed upper half plane; real z is the limit from above.
  cplx operator()(cplx z) const {
    require(z.imag() >= 0.0, ErrorKind::OutOfDomain, "LineCauchy: evaluation point below the real axis");
    cplx acc = half_(z, +1) - static_cast<double>(sign_) * half_(-z, -1);
    // at z = 0 the residue term i*pi*g(0) sits between the two half lines
    if (z == cplx(0.0) && sign_ == 1) acc += kI * kPi * half_.value_at_zero();
    return acc;
  }

  double k_max() const { return half_.k_max(); }

 private:
  HalfLineCauchy half_;
  int sign_ = 1;
};

inline std::vector<cplx> to_complex(std::span<const double> v) { return std::vector<cplx>(v.begin(), v.end()); }

}  // namespace sbm
