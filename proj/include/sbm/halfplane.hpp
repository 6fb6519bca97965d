#pragma once

// Reconstruction of functions analytic in the upper half plane from boundary
// data on k > 0: from the real part (Schwarz integral), from the modulus
// (outer function times a Blaschke factor) and from the imaginary part of the
// logarithm. Also an argument-principle zero counter used to certify results.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbm/cauchy.hpp"
#include "sbm/core.hpp"

namespace sbm {

/// Throws `kind` unless samples decay toward k_max: |g(k_max)| must not exceed
/// `ratio` times the largest |g| on [k_max/2, k_max), or be negligible.
inline void require_decay(const KGrid& grid, std::span<const double> g, ErrorKind kind, const std::string& what,
                          double ratio = 0.75) {
  const auto k = grid.points();
  const double K = grid.k_max();
  double peak = 0.0, overall = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    require(std::isfinite(g[i]), ErrorKind::InvalidData, what + ": non-finite sample");
    overall = std::max(overall, std::abs(g[i]));
    if (k[i] >= 0.5 * K && i + 1 < g.size()) peak = std::max(peak, std::abs(g[i]));
  }
  const double last = std::abs(g.back());
  if (last <= 1e-10 * std::max(overall, 1e-300) || last <= 1e-14) return;
  require(last <= ratio * peak, kind, what + ": samples do not decay toward k_max");
}

/// int_0^inf g(t) dt for samples decaying like t^{-2} or faster; beyond k_max
/// the data are continued by c2/t^2 + c4/t^4 + ... + c10/t^10 fitted on [k_max/2, k_max].
inline double half_line_integral(const KGrid& grid, std::span<const double> g) {
  require(g.size() == grid.size() && grid.size() >= 8, ErrorKind::InvalidArgument, "half_line_integral: bad samples");
  const auto k = grid.points();
  std::vector<double> nodes{0.0};
  nodes.insert(nodes.end(), k.begin(), k.end());
  PiecewiseCubic<double> head(std::vector<double>(k.begin(), k.begin() + 4), std::vector<double>(g.begin(), g.begin() + 4));
  std::vector<double> vals{head.eval_in(0, 0.0)};
  vals.insert(vals.end(), g.begin(), g.end());
  PiecewiseCubic<double> cubic(nodes, vals);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const auto c = cubic.local_coeffs(i);
    acc += (nodes[i + 1] - nodes[i]) * (c[0] + c[1] / 2.0 + c[2] / 3.0 + c[3] / 4.0);
  }
  const double K = k.back();
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] >= 0.5 * K) rows.push_back(i);
  constexpr int kTerms = 5;
  Eigen::MatrixXd A(rows.size(), kTerms);
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double u = K / k[rows[r]];
    for (int m = 0; m < kTerms; ++m) A(r, m) = std::pow(u, 2 * m + 2);
    b(r) = g[rows[r]];
  }
  const Eigen::VectorXd d = A.colPivHouseholderQr().solve(b);
  // int_K^inf (K/t)^m dt = K/(m - 1)
  for (int m = 0; m < kTerms; ++m) acc += d(m) * K / (2 * m + 1);
  return acc;
}

/// Schwarz integral (1/(pi i)) int_R g(t)/(t - z - i0) dt of real data g with
/// g(-t) = parity * g(t). For real z this is PV/(pi i) + g(z).
class SchwarzIntegral {
 public:
  SchwarzIntegral() = default;
  SchwarzIntegral(const KGrid& grid, std::span<const double> re, int parity)
      : cauchy_(std::make_shared<LineCauchy>(grid, to_complex(re), parity,
                                             parity == 1 ? TailModel::EvenPowers : TailModel::OddPowers)) {}

  cplx operator()(cplx z) const {
    require(z.imag() >= 0.0, ErrorKind::OutOfDomain, "schwarz: evaluation point in the open lower half plane");
    return (*cauchy_)(z) / (kPi * kI);
  }

 private:
  std::shared_ptr<const LineCauchy> cauchy_;
};

/// Analytic, O(1/k) function on the closed upper half plane with the given
/// real part on R. parity = +1 for even real parts, -1 for odd ones.
inline HalfPlaneFunction schwarz_reconstruct(const KGrid& grid, std::span<const double> re, int parity = 1) {
  require(re.size() == grid.size(), ErrorKind::InvalidArgument, "schwarz_reconstruct: length mismatch");
  require_decay(grid, re, ErrorKind::InvalidData, "schwarz_reconstruct");
  SchwarzIntegral s(grid, re, parity);
  return HalfPlaneFunction([s](cplx z) { return s(z); }, HalfPlaneFunction::Representation::Numeric,
                           parity == 1 ? Parity::Conjugate : Parity::AntiConjugate);
}

/// Point evaluation form.
inline cplx schwarz_reconstruct(const KGrid& grid, std::span<const double> re, cplx z, int parity = 1) {
  return schwarz_reconstruct(grid, re, parity)(z);
}

/// Power p of the k -> 0 behaviour |F(k)| ~ k^p read off the geometric part of the grid.
inline int small_k_power(const KGrid& grid, std::span<const double> modulus) {
  const auto k = grid.points();
  std::size_t j = 0;
  while (j + 1 < k.size() && k[j] < 100.0 * k[0]) ++j;
  const double slope = (std::log(modulus[j]) - std::log(modulus[0])) / (std::log(k[j]) - std::log(k[0]));
  return static_cast<int>(std::lround(slope));
}

namespace detail {
// log|t/(t + i)|, real part of log(k/(k + i)) on R
inline double log_ratio_to_shifted(double t) { return std::log(t) - 0.5 * std::log1p(t * t); }
}  // namespace detail

/// Jost-type function from its modulus on R and its zeros i*kappa in C+.
/// Robin: F(k) = k B(k) exp(-S[log|t/F(t)|](k)); Dirichlet: F(k) = B(k) exp(S[log|F(t)|](k)),
/// with S the Schwarz integral and B the Blaschke product with zeros at i*kappa.
/// A zero or pole of F/k (Robin) or F (Dirichlet) at k = 0 is split off analytically.
inline HalfPlaneFunction outer_from_modulus(const KGrid& grid, std::span<const double> modulus, const EigenSet& zeros,
                                            BoundaryKind kind) {
  require(modulus.size() == grid.size(), ErrorKind::InvalidArgument, "outer_from_modulus: length mismatch");
  for (double m : modulus)
    require(std::isfinite(m) && m > 0.0, ErrorKind::InvalidModulus, "outer_from_modulus: modulus must be positive");
  const auto k = grid.points();
  const int slope = small_k_power(grid, modulus);
  const bool robin = kind == BoundaryKind::Robin;
  // p = 1 when the logarithm has a log|t| singularity at t = 0
  const int p = robin ? 1 - slope : slope;
  require(p == 0 || p == 1, ErrorKind::InvalidModulus, "outer_from_modulus: unsupported behaviour near k = 0");

  std::vector<double> g(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double base = robin ? std::log(k[i] / modulus[i]) : std::log(modulus[i]);
    g[i] = base - p * detail::log_ratio_to_shifted(k[i]);
  }
  if (robin) {
    // |F|/k -> 1 is required for the exponent to decay
    require_decay(grid, g, ErrorKind::InvalidModulus, "outer_from_modulus (Robin)");
  } else {
    require_decay(grid, g, ErrorKind::InvalidModulus, "outer_from_modulus (Dirichlet)");
  }
  SchwarzIntegral s(grid, g, 1);
  HalfPlaneFunction::Evaluator f;
  if (robin) {
    f = [s, zeros, p](cplx z) {
      const cplx pre = p == 1 ? z + kI : z;
      return pre * blaschke(z, zeros) * std::exp(-s(z));
    };
  } else {
    f = [s, zeros, p](cplx z) {
      const cplx pre = p == 1 ? z / (z + kI) : cplx(1.0);
      return pre * blaschke(z, zeros) * std::exp(s(z));
    };
  }
  return HalfPlaneFunction(std::move(f), HalfPlaneFunction::Representation::Numeric, parity_for(kind));
}

enum class LogVariant {
  Plain,          ///< Z(k) = exp(S_im[theta](k)), theta = Im log Z on R
  IkNormalized,   ///< Z(k) = i k exp(S_im[theta](k)), theta = Im log(Z(t)/(i t)) on R
};

/// Function with decaying logarithm from Im log on R (odd data):
/// log Z(z) = (1/pi) int_R theta(t)/(t - z - i0) dt.
inline HalfPlaneFunction log_schwarz_reconstruct(const KGrid& grid, std::span<const double> im_log,
                                                 LogVariant variant = LogVariant::Plain) {
  require(im_log.size() == grid.size(), ErrorKind::InvalidArgument, "log_schwarz_reconstruct: length mismatch");
  require_decay(grid, im_log, ErrorKind::InvalidData, "log_schwarz_reconstruct");
  auto c = std::make_shared<LineCauchy>(grid, to_complex(im_log), -1, TailModel::OddPowers);
  HalfPlaneFunction::Evaluator f;
  if (variant == LogVariant::Plain) {
    f = [c](cplx z) { return std::exp((*c)(z) / kPi); };
  } else {
    f = [c](cplx z) { return kI * z * std::exp((*c)(z) / kPi); };
  }
  return HalfPlaneFunction(std::move(f), HalfPlaneFunction::Representation::Numeric);
}

/// Number of zeros minus poles of f inside the rectangle
/// [-half_width, half_width] x [y_low, y_high], by the argument principle.
/// f must not vanish on the boundary.
inline int winding_number(const HalfPlaneFunction& f, double half_width, double y_low, double y_high,
                          int base_points_per_side = 400) {
  require(half_width > 0.0 && y_high > y_low && y_low >= 0.0, ErrorKind::InvalidArgument,
          "winding_number: bad rectangle");
  const std::array<cplx, 5> corners = {cplx(-half_width, y_low), cplx(half_width, y_low), cplx(half_width, y_high),
                                       cplx(-half_width, y_high), cplx(-half_width, y_low)};
  double total = 0.0;
  for (int side = 0; side < 4; ++side) {
    const cplx a = corners[side], b = corners[side + 1];
    cplx prev_val = f(a);
    double t_prev = 0.0;
    const int n = base_points_per_side;
    for (int j = 1; j <= n; ++j) {
      const double t = static_cast<double>(j) / n;
      cplx val = f(a + t * (b - a));
      double step = std::arg(val / prev_val);
      // refine segments where the phase moves too fast to be resolved
      if (std::abs(step) > 0.5) {
        const int m = 64;
        step = 0.0;
        cplx pv = prev_val;
        for (int q = 1; q <= m; ++q) {
          const double tq = t_prev + (t - t_prev) * q / m;
          const cplx vq = f(a + tq * (b - a));
          step += std::arg(vq / pv);
          pv = vq;
        }
      }
      require(std::abs(val) > 0.0, ErrorKind::SingularPoint, "winding_number: zero on the contour");
      total += step;
      prev_val = val;
      t_prev = t;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

}  // namespace sbm
