#pragma once

// Krein's spectral shift function xi for a pair beta < alpha, defined through
// the phase of Z = F_alpha/F_beta (Robin) or Z = i F_beta/F_pi (alpha = pi).
// On R+ xi takes values in (0, 1); on the positive imaginary axis it is a 0/1
// step function whose jumps sit at the bound states of both problems. The
// full recovery of alpha, beta, F_alpha and F_beta from xi lives here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "sbm/borg_marchenko.hpp"
#include "sbm/core.hpp"
#include "sbm/forward.hpp"
#include "sbm/halfplane.hpp"

namespace sbm {

/// xi on the sampled half line R+ and its step profile on I+.
struct KreinShift {
  KGrid grid;
  std::vector<double> real_axis;  ///< xi(k) on grid, odd extension implied
  /// (location omega, value of xi(i omega) just above omega), increasing in omega
  std::vector<std::pair<double, int>> jumps;
  int value_near_zero = 0;   ///< xi(i omega) for small omega > 0
  double normalization = 0;  ///< xi(+infinity): 0 (Robin alpha) or 1/2 (alpha = pi)

  BoundaryKind alpha_kind() const { return normalization > 0.25 ? BoundaryKind::Dirichlet : BoundaryKind::Robin; }

  /// xi(i omega) from the jump list.
  int on_imaginary_axis(double omega) const {
    int v = value_near_zero;
    for (const auto& [at, after] : jumps)
      if (omega > at) v = after;
    return v;
  }
  int value_at_infinity() const { return jumps.empty() ? value_near_zero : jumps.back().second; }

  /// Throws invalid-xi unless the profile alternates and the R+ samples lie in (0, 1).
  void validate() const {
    require(normalization == 0.0 || normalization == 0.5, ErrorKind::InvalidXi,
            "KreinShift: normalization at infinity must be 0 or 1/2");
    require(real_axis.size() == grid.size(), ErrorKind::InvalidXi, "KreinShift: sample count differs from grid");
    for (double v : real_axis)
      require(std::isfinite(v) && v > 0.0 && v < 1.0, ErrorKind::InvalidXi, "KreinShift: xi outside (0, 1) on R+");
    require(value_near_zero == 0 || value_near_zero == 1, ErrorKind::InvalidXi, "KreinShift: values must be 0 or 1");
    int prev = value_near_zero;
    double at_prev = 0.0;
    for (const auto& [at, after] : jumps) {
      require(at > at_prev, ErrorKind::InvalidXi, "KreinShift: jump locations must be positive and increasing");
      require(after == 1 - prev, ErrorKind::InvalidXi, "KreinShift: values on I+ must alternate");
      prev = after;
      at_prev = at;
    }
  }
};

struct ZRatio {
  HalfPlaneFunction Z;
  BoundaryKind alpha_kind = BoundaryKind::Robin;
};

namespace detail {

// Sign of the product in the closed form for xi on I+. Robin: xi = 1 where
// prod_a (w - ka)/(w + ka) * prod_b (w + kb)/(w - kb) < 0. For alpha = pi the
// roles flip: xi = 1 where prod_pi (w + kp)/(w - kp) * prod_b (w - kb)/(w + kb) > 0,
// which is what the sign of Z(i w) gives.
inline int xi_closed_form_on_imaginary_axis(double omega, const EigenSet& alpha, const EigenSet& beta,
                                            BoundaryKind kind) {
  double p = 1.0;
  for (double k : alpha.kappas()) p *= (omega - k) / (omega + k);
  for (double k : beta.kappas()) p *= (omega + k) / (omega - k);
  if (kind == BoundaryKind::Robin) return p < 0.0 ? 1 : 0;
  return p < 0.0 ? 0 : 1;
}

// Jump list of the closed form: an alpha state switches xi to 1 (Robin) or 0 (alpha = pi),
// a beta state to the other value.
inline KreinShift imaginary_axis_profile(const EigenSet& alpha, const EigenSet& beta, BoundaryKind kind) {
  KreinShift out;
  out.normalization = kind == BoundaryKind::Robin ? 0.0 : 0.5;
  const int alpha_after = kind == BoundaryKind::Robin ? 1 : 0;
  std::vector<std::pair<double, int>> j;
  for (double k : alpha.kappas()) j.emplace_back(k, alpha_after);
  for (double k : beta.kappas()) j.emplace_back(k, 1 - alpha_after);
  std::sort(j.begin(), j.end());
  out.jumps = std::move(j);
  out.value_near_zero = out.jumps.empty() ? xi_closed_form_on_imaginary_axis(1.0, alpha, beta, kind)
                                          : 1 - out.jumps.front().second;
  return out;
}

// Real-valued restriction of a Jost function to I+: Re(i F(i w)) for Robin, Re F(i w) for Dirichlet.
inline double jost_real_on_imaginary_axis(const HalfPlaneFunction& F, BoundaryKind kind, double omega) {
  const cplx v = F(cplx(0.0, omega));
  return kind == BoundaryKind::Robin ? (kI * v).real() : v.real();
}

}  // namespace detail

struct ZeroScanOptions {
  double omega_max = 0.0;  ///< 0 selects max(4, k_max / 4)
  std::size_t points = 800;
  double tolerance = 1e-12;
};

/// Zeros i*omega of a Jost function on I+ by sign scan and bracketed refinement.
inline EigenSet zeros_on_imaginary_axis(const HalfPlaneFunction& F, BoundaryKind kind, double omega_max,
                                        ZeroScanOptions opt = {}) {
  const std::size_t n = opt.points;
  std::vector<double> w(n + 1), v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) w[i] = omega_max * (1e-4 + (1.0 - 1e-4) * static_cast<double>(i) / n);
  parallel_for(n + 1, [&](std::size_t i) { v[i] = detail::jost_real_on_imaginary_axis(F, kind, w[i]); });
  std::vector<double> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if ((v[i] < 0.0) == (v[i + 1] < 0.0)) continue;
    auto fn = [&](double x) { return detail::jost_real_on_imaginary_axis(F, kind, x); };
    std::uintmax_t iters = 200;
    const double tol = opt.tolerance;
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    const auto [lo, hi] = boost::math::tools::toms748_solve(fn, w[i], w[i + 1], v[i], v[i + 1], stop, iters);
    require(iters < 200, ErrorKind::RootFailure, "zeros_on_imaginary_axis: refinement did not converge");
    roots.push_back(0.5 * (lo + hi));
  }
  return EigenSet(std::move(roots));
}

/// xi from a Jost pair with known bound states. alpha_kind selects the form of Z.
inline KreinShift xi_from_jost(const HalfPlaneFunction& F_alpha, const HalfPlaneFunction& F_beta,
                               const BoundaryParam& alpha, const BoundaryParam& beta, const KGrid& grid,
                               const EigenSet& eig_alpha, const EigenSet& eig_beta) {
  require(!beta.is_dirichlet(), ErrorKind::InvalidArgument, "xi_from_jost: beta must be a Robin condition");
  require(alpha.is_dirichlet() || beta.angle() < alpha.angle(), ErrorKind::InvalidArgument,
          "xi_from_jost: beta < alpha required");
  KreinShift xi = detail::imaginary_axis_profile(eig_alpha, eig_beta, alpha.kind);
  xi.grid = grid;
  xi.real_axis.resize(grid.size());
  const bool dirichlet = alpha.is_dirichlet();
  std::vector<int> bad(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const cplx k(grid[i], 0.0);
    const cplx z = dirichlet ? kI * F_beta(k) / F_alpha(k) : F_alpha(k) / F_beta(k);
    if (!(z.imag() > 0.0)) bad[i] = 1;
    // Im Z > 0 puts the principal argument in (0, pi), which is the branch fixed at infinity
    xi.real_axis[i] = std::arg(z) / kPi;
  });
  for (int b : bad) require(b == 0, ErrorKind::ConsistencyFailure, "xi_from_jost: Im Z <= 0 on R+");
  return xi;
}

/// Same, with the bound states located on I+ first.
inline KreinShift xi_from_jost(const HalfPlaneFunction& F_alpha, const HalfPlaneFunction& F_beta,
                               const BoundaryParam& alpha, const BoundaryParam& beta, const KGrid& grid,
                               ZeroScanOptions opt = {}) {
  const double omega_max = opt.omega_max > 0.0 ? opt.omega_max : std::max(4.0, 0.25 * grid.k_max());
  const EigenSet ea = zeros_on_imaginary_axis(F_alpha, alpha.kind, omega_max, opt);
  const EigenSet eb = zeros_on_imaginary_axis(F_beta, BoundaryKind::Robin, omega_max, opt);
  return xi_from_jost(F_alpha, F_beta, alpha, beta, grid, ea, eb);
}

struct KreinEigen {
  BoundaryKind alpha_kind = BoundaryKind::Robin;
  Interlacing interlacing = Interlacing::Equal;
  EigenSet eig_alpha;  ///< kappa_pi when alpha = pi
  EigenSet eig_beta;
};

/// Classifies the jumps on I+ against the four interlacing tables.
inline KreinEigen eigen_from_jumps(const KreinShift& xi) {
  xi.validate();
  KreinEigen out;
  out.alpha_kind = xi.alpha_kind();
  const bool robin = out.alpha_kind == BoundaryKind::Robin;
  const int alpha_after = robin ? 1 : 0;
  std::vector<double> a, b;
  for (const auto& [at, after] : xi.jumps) (after == alpha_after ? a : b).push_back(at);
  out.eig_alpha = EigenSet(std::move(a));
  out.eig_beta = EigenSet(std::move(b));
  try {
    out.interlacing = interlacing_check(out.eig_alpha, out.eig_beta);
  } catch (const Error&) {
    fail(ErrorKind::InvalidXi, "eigen_from_jumps: jump pattern matches no interlacing table");
  }
  const KreinShift expect = detail::imaginary_axis_profile(out.eig_alpha, out.eig_beta, out.alpha_kind);
  require(expect.value_near_zero == xi.value_near_zero && expect.value_at_infinity() == xi.value_at_infinity(),
          ErrorKind::InvalidXi, "eigen_from_jumps: values near 0 or at infinity match no interlacing table");
  return out;
}

/// xi^[0] on the grid: xi with the Blaschke phases of both bound-state sets removed.
/// Robin: xi + (2/pi)[sum_a atan(ka/k) - sum_b atan(kb/k)];
/// alpha = pi: xi + (2/pi)[sum_b atan(kb/k) - sum_pi atan(kp/k)].
/// Also checks that the I+ profile equals the closed form, i.e. xi^[0] = 0 there.
inline std::vector<double> reduce_xi(const KreinShift& xi, const KreinEigen& eigs) {
  const bool robin = eigs.alpha_kind == BoundaryKind::Robin;
  const auto& plus = robin ? eigs.eig_alpha : eigs.eig_beta;
  const auto& minus = robin ? eigs.eig_beta : eigs.eig_alpha;
  std::vector<double> out(xi.grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double k = xi.grid[i];
    double s = 0.0;
    for (double kap : plus.kappas()) s += std::atan(kap / k);
    for (double kap : minus.kappas()) s -= std::atan(kap / k);
    out[i] = xi.real_axis[i] + 2.0 * s / kPi;
  }
  std::vector<double> probes;
  double prev = 0.0;
  for (const auto& [at, after] : xi.jumps) {
    probes.push_back(0.5 * (prev + at));
    prev = at;
  }
  probes.push_back(2.0 * prev + 1.0);
  for (double w : probes) {
    const int closed = detail::xi_closed_form_on_imaginary_axis(w, eigs.eig_alpha, eigs.eig_beta, eigs.alpha_kind);
    require(closed == xi.on_imaginary_axis(w), ErrorKind::ReductionFailure,
            "reduce_xi: reduced shift does not vanish on I+");
  }
  return out;
}

/// Z from xi^[0]: exp of the Cauchy integral of the odd extension, times ik for
/// alpha = pi, then the Blaschke factors put back. A jump of the odd extension at
/// k = 0 is split off as a power of k/(k + i).
inline ZRatio z_from_xi(const KGrid& grid, std::span<const double> xi0, const KreinEigen& eigs) {
  require(xi0.size() == grid.size(), ErrorKind::InvalidArgument, "z_from_xi: length mismatch");
  const bool robin = eigs.alpha_kind == BoundaryKind::Robin;
  std::vector<double> theta(grid.size());
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = kPi * (robin ? xi0[i] : xi0[i] - 0.5);
  // Im log(k/(k+i)) = -atan(1/k) on k > 0 tends to -pi/2 at 0+
  // the jump is a multiple of pi/2, so the split-off power is an integer
  const double lambda = std::round(-2.0 * theta.front() / kPi);
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= lambda * -std::atan(1.0 / grid[i]);
  const HalfPlaneFunction z0 =
      log_schwarz_reconstruct(grid, theta, robin ? LogVariant::Plain : LogVariant::IkNormalized);
  const EigenSet top = robin ? eigs.eig_alpha : eigs.eig_beta;
  const EigenSet bottom = robin ? eigs.eig_beta : eigs.eig_alpha;
  auto f = [z0, lambda, top, bottom](cplx k) {
    const cplx split = lambda == 0.0 ? cplx(1.0) : std::pow(k / (k + kI), lambda);
    return z0(k) * split * blaschke(k, top) * blaschke(k, bottom, BlaschkeOrientation::PolesAtIKappa);
  };
  return {HalfPlaneFunction(std::move(f), HalfPlaneFunction::Representation::Numeric), eigs.alpha_kind};
}

/// xi(0+) against N_b - N_a + (d_b - d_a)/2 (Robin) or N_pi - N_b + (d_pi - d_b)/2. Diagnostic only.
struct XiAtZeroReport {
  double value;
  double formula;
  double residual;
};

struct KreinRecovery {
  BoundaryParam alpha;
  BoundaryParam beta;
  std::optional<double> h;
  KreinEigen eigs;
  ZRatio Z;
  HalfPlaneFunction F_alpha;
  HalfPlaneFunction F_beta;
  AsymptoticFit fit;
  XiAtZeroReport xi_at_zero;
};

struct KreinOptions {
  AsymptoticFitOptions fit;
  double exceptional_threshold = 1e-4;
};

/// alpha, beta, F_alpha and F_beta from xi alone.
inline KreinRecovery recover_from_xi(const KreinShift& xi, KreinOptions opt = {}) {
  KreinRecovery out;
  out.eigs = with_stage("eigen_from_jumps", [&] { return eigen_from_jumps(xi); });
  const std::vector<double> xi0 = with_stage("reduce_xi", [&] { return reduce_xi(xi, out.eigs); });
  out.Z = with_stage("z_from_xi", [&] { return z_from_xi(xi.grid, xi0, out.eigs); });
  const bool robin = out.eigs.alpha_kind == BoundaryKind::Robin;
  const KGrid& grid = xi.grid;
  out.fit = with_stage("fit_boundary_asymptotics",
                       [&] { return fit_boundary_asymptotics(out.Z.Z, out.eigs.alpha_kind, grid.k_max(), opt.fit); });
  out.beta = BoundaryParam::robin(out.fit.cot_beta);
  if (robin) {
    out.h = out.fit.h;
    out.alpha = BoundaryParam::robin(out.fit.cot_beta - out.fit.h);
  } else {
    out.alpha = BoundaryParam::dirichlet();
  }

  // |F_beta|^2 = k h / Im Z (Robin), |F_pi|^2 = k / Im Z
  const BoundaryFunction zs = out.Z.Z.sample(grid, Parity::Conjugate);
  const auto zv = zs.values();
  std::vector<double> mod(grid.size());
  for (std::size_t i = 0; i < mod.size(); ++i) {
    const double im = zv[i].imag();
    require(im > 0.0, ErrorKind::RecoveryFailure, "recover_from_xi: Im Z <= 0 on R+");
    mod[i] = std::sqrt(grid[i] * (robin ? out.fit.h : 1.0) / im);
  }
  const HalfPlaneFunction Z = out.Z.Z;
  with_stage("outer_from_modulus", [&] {
    if (robin) {
      out.F_beta = outer_from_modulus(grid, mod, out.eigs.eig_beta, BoundaryKind::Robin);
      const HalfPlaneFunction Fb = out.F_beta;
      out.F_alpha = detail::removable_at([Fb, Z](cplx k) { return Z(k) * Fb(k); }, out.eigs.eig_beta,
                                         Parity::AntiConjugate);
    } else {
      out.F_alpha = outer_from_modulus(grid, mod, out.eigs.eig_alpha, BoundaryKind::Dirichlet);
      const HalfPlaneFunction Fp = out.F_alpha;
      out.F_beta = detail::removable_at([Fp, Z](cplx k) { return -kI * Z(k) * Fp(k); }, out.eigs.eig_alpha,
                                        Parity::AntiConjugate);
    }
    return 0;
  });

  // exceptional flags from the recovered Jost functions near k = 0
  auto d_flag = [&](const HalfPlaneFunction& F) {
    const double near = std::abs(F(cplx(grid[0], 0.0)));
    const double far = std::abs(F(cplx(grid.k_max(), 0.0)));
    return near < opt.exceptional_threshold * (1.0 + far) ? 1 : 0;
  };
  const int da = d_flag(out.F_alpha), db = d_flag(out.F_beta);
  const double na = static_cast<double>(out.eigs.eig_alpha.size()), nb = static_cast<double>(out.eigs.eig_beta.size());
  const double formula = robin ? nb - na + (db - da) / 2.0 : na - nb + (da - db) / 2.0;
  out.xi_at_zero = {xi.real_axis.front(), formula, xi.real_axis.front() - formula};
  return out;
}

}  // namespace sbm
