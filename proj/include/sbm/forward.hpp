#pragma once

// Direct problem on the half line: Jost solution and Jost function of a
// sampled potential, bound states, norming constants, phase shift,
// scattering matrix, spectral measure, Levinson and interlacing diagnostics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "sbm/core.hpp"
#include "sbm/parallel.hpp"

namespace sbm {

/// f(k, 0) and f'(k, 0).
struct JostAtOrigin {
  cplx f0;
  cplx fprime0;
  cplx k;
};

/// Jost solution samples on the potential's XGrid.
struct JostSolution {
  std::vector<cplx> f;
  std::vector<cplx> fprime;
};

/// Backward RK4 integration of f = e^{ikx} u, with u'' = V u - 2ik u',
/// u = 1 and u' = 0 at x_max. For k = i kappa this is f = e^{-kappa x} u and
/// the backward sweep is stable.
class JostIntegrator {
 public:
  JostIntegrator() = default;
  explicit JostIntegrator(Potential v) : v_(std::make_shared<Potential>(std::move(v))) {
    require(v_->all_finite(), ErrorKind::InvalidData, "JostIntegrator: non-finite potential samples");
    const auto& g = v_->grid();
    const std::size_t n = g.size();
    at_node_.assign(v_->values().begin(), v_->values().end());
    at_mid_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) at_mid_[i] = (*v_)(0.5 * (g[i] + g[i + 1]));
  }

  const Potential& potential() const { return *v_; }

  JostAtOrigin at_origin(cplx k) const {
    JostAtOrigin out{};
    run(k, [&](std::size_t i, cplx u, cplx up) {
      if (i == 0) {
        out.f0 = u;
        out.fprime0 = kI * k * u + up;
      }
    });
    out.k = k;
    return out;
  }

  JostSolution solution(cplx k) const {
    const auto& g = v_->grid();
    JostSolution s;
    s.f.resize(g.size());
    s.fprime.resize(g.size());
    run(k, [&](std::size_t i, cplx u, cplx up) {
      const cplx e = std::exp(kI * k * g[i]);
      s.f[i] = e * u;
      s.fprime[i] = e * (kI * k * u + up);
    });
    return s;
  }

  /// Real u(x) for k = i kappa, where f(i kappa, x) = e^{-kappa x} u(x).
  std::vector<double> bound_profile(double kappa) const {
    std::vector<double> u(v_->grid().size());
    run(cplx(0.0, kappa), [&](std::size_t i, cplx uu, cplx) { u[i] = uu.real(); });
    return u;
  }

 private:
  template <class Visit>
  void run(cplx k, Visit&& visit) const {
    require(k.imag() >= 0.0, ErrorKind::OutOfDomain, "jost_solution: Im k must be >= 0");
    const auto& g = v_->grid();
    const std::size_t n = g.size();
    const double dx = g.dx();
    const int sub = std::max(1, static_cast<int>(std::ceil(std::abs(k) * dx / 0.2)));
    const cplx c = -2.0 * kI * k;
    cplx u = 1.0, up = 0.0;
    visit(n - 1, u, up);
    for (std::size_t i = n - 1; i > 0; --i) {
      const double h = -dx / sub;
      for (int s = 0; s < sub; ++s) {
        double v0, vm, v1;
        if (sub == 1) {
          v0 = at_node_[i];
          vm = at_mid_[i - 1];
          v1 = at_node_[i - 1];
        } else {
          const double x0 = g[i] + s * h;
          v0 = (*v_)(x0);
          vm = (*v_)(x0 + 0.5 * h);
          v1 = (*v_)(x0 + h);
        }
        // y = (u, u'), y' = (u', V u + c u')
        const cplx k1u = up, k1p = v0 * u + c * up;
        const cplx u2 = u + 0.5 * h * k1u, p2 = up + 0.5 * h * k1p;
        const cplx k2u = p2, k2p = vm * u2 + c * p2;
        const cplx u3 = u + 0.5 * h * k2u, p3 = up + 0.5 * h * k2p;
        const cplx k3u = p3, k3p = vm * u3 + c * p3;
        const cplx u4 = u + h * k3u, p4 = up + h * k3p;
        const cplx k4u = p4, k4p = v1 * u4 + c * p4;
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        up += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      }
      if (!(std::isfinite(std::abs(u)) && std::isfinite(std::abs(up))) || std::abs(u) > 1e250)
        fail(ErrorKind::IntegrationFailure, "jost_solution: overflow in backward integration");
      visit(i - 1, u, up);
    }
  }

  std::shared_ptr<const Potential> v_;
  std::vector<double> at_node_;
  std::vector<double> at_mid_;
};

inline JostSolution jost_solution(const Potential& v, cplx k) { return JostIntegrator(v).solution(k); }

/// Robin: -i [f'(k,0) + cot(alpha) f(k,0)]; Dirichlet: f(k,0).
inline cplx jost_from_origin(const JostAtOrigin& j, const BoundaryParam& bc) {
  if (bc.is_dirichlet()) return j.f0;
  return -kI * (j.fprime0 + bc.cot * j.f0);
}

inline cplx jost_function(const JostIntegrator& integ, const BoundaryParam& bc, cplx k) {
  return jost_from_origin(integ.at_origin(k), bc);
}

inline cplx jost_function(const Potential& v, const BoundaryParam& bc, cplx k) {
  return jost_function(JostIntegrator(v), bc, k);
}

/// Jost function as an evaluator on the closed upper half plane.
inline HalfPlaneFunction jost_function(const JostIntegrator& integ, const BoundaryParam& bc) {
  return HalfPlaneFunction([integ, bc](cplx k) { return jost_function(integ, bc, k); },
                           HalfPlaneFunction::Representation::Numeric, parity_for(bc.kind));
}

/// Jost function samples on a KGrid.
inline BoundaryFunction jost_on_grid(const JostIntegrator& integ, const BoundaryParam& bc, const KGrid& grid) {
  return BoundaryFunction::from_function(
      grid, [&](double k) { return jost_function(integ, bc, cplx(k, 0.0)); }, parity_for(bc.kind));
}

namespace detail {
// Real-valued restriction to I+: i F(i kappa) (Robin) or F(i kappa) (Dirichlet).
inline double jost_on_imaginary_axis(const JostIntegrator& integ, const BoundaryParam& bc, double kappa) {
  const JostAtOrigin j = integ.at_origin(cplx(0.0, kappa));
  if (bc.is_dirichlet()) return j.f0.real();
  return (j.fprime0 + bc.cot * j.f0).real();
}
}  // namespace detail

struct BoundStateOptions {
  std::size_t scan_points = 600;
  double tolerance = 1e-12;
};

/// All kappa > 0 with F(i kappa) = 0, by sign scan on (0, kappa_max] and
/// bracketed refinement. The scan bound 1 + sqrt(max(0, -min V) + max(0, cot)^2) covers
/// the extra binding of an attractive Robin condition.
inline EigenSet bound_states(const JostIntegrator& integ, const BoundaryParam& bc, BoundStateOptions opt = {}) {
  const double robin_binding = bc.is_dirichlet() ? 0.0 : std::max(0.0, bc.cot);
  const double kappa_max =
      1.0 + std::sqrt(std::max(0.0, -integ.potential().min_value()) + robin_binding * robin_binding);
  const std::size_t n = opt.scan_points;
  std::vector<double> kap(n + 1), val(n + 1);
  for (std::size_t i = 0; i <= n; ++i) kap[i] = kappa_max * (1e-4 + (1.0 - 1e-4) * static_cast<double>(i) / n);
  parallel_for(n + 1, [&](std::size_t i) { val[i] = detail::jost_on_imaginary_axis(integ, bc, kap[i]); });
  std::vector<double> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (val[i] == 0.0) {
      roots.push_back(kap[i]);
      continue;
    }
    if ((val[i] < 0.0) == (val[i + 1] < 0.0) || val[i + 1] == 0.0) continue;
    auto fn = [&](double x) { return detail::jost_on_imaginary_axis(integ, bc, x); };
    std::uintmax_t iters = 200;
    const double tol = opt.tolerance;
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    const auto [lo, hi] = boost::math::tools::toms748_solve(fn, kap[i], kap[i + 1], val[i], val[i + 1], stop, iters);
    require(iters < 200, ErrorKind::RootFailure, "bound_states: root refinement did not converge");
    roots.push_back(0.5 * (lo + hi));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a - b) < 1e-10; }),
              roots.end());
  return EigenSet(std::move(roots));
}

inline EigenSet bound_states(const Potential& v, const BoundaryParam& bc, BoundStateOptions opt = {}) {
  return bound_states(JostIntegrator(v), bc, opt);
}

struct NormingConstants {
  std::vector<double> g;  ///< spectral-measure weights
  std::vector<double> m;  ///< 1/||f(i kappa, .)||
};

/// Norms by Simpson on the XGrid plus the exact tail e^{-2 kappa x_max}/(2 kappa).
inline NormingConstants norming_constants(const JostIntegrator& integ, const BoundaryParam& bc, const EigenSet& eigs) {
  const auto& grid = integ.potential().grid();
  NormingConstants out;
  for (double kappa : eigs.kappas()) {
    const std::vector<double> u = integ.bound_profile(kappa);
    std::vector<double> f2(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double f = std::exp(-kappa * grid[i]) * u[i];
      f2[i] = f * f;
    }
    const double tail = std::exp(-2.0 * kappa * grid.x_max()) * u.back() * u.back() / (2.0 * kappa);
    const double norm2 = simpson(f2, grid.dx()) + tail;
    require(norm2 > 0.0 && std::isfinite(norm2), ErrorKind::DegenerateState, "norming_constants: zero norm");
    const JostAtOrigin j = integ.at_origin(cplx(0.0, kappa));
    const double at0 = bc.is_dirichlet() ? std::abs(j.fprime0) : std::abs(j.f0);
    out.g.push_back(at0 / std::sqrt(norm2));
    out.m.push_back(1.0 / std::sqrt(norm2));
  }
  return out;
}

inline NormingConstants norming_constants(const Potential& v, const BoundaryParam& bc, const EigenSet& eigs) {
  return norming_constants(JostIntegrator(v), bc, eigs);
}

/// phi(k) = -arg F(k) unwrapped downward from k_max, anchored at the principal value there.
inline std::vector<double> phase_shift(const BoundaryFunction& F) {
  const auto v = F.values();
  const std::size_t n = v.size();
  for (std::size_t i = 1; i < n; ++i)
    require(std::abs(v[i]) >= 1e-12, ErrorKind::ZeroCrossing, "phase_shift: Jost function vanishes on the grid");
  std::vector<double> phi(n);
  phi[n - 1] = -std::arg(v[n - 1]);
  for (std::size_t i = n - 1; i > 0; --i) {
    const double step = -std::arg(v[i - 1] / v[i]);
    require(std::abs(step) < kPi, ErrorKind::ZeroCrossing, "phase_shift: phase step too large to unwrap");
    phi[i - 1] = phi[i] + step;
  }
  return phi;
}

/// S(k) = -F(-k)/F(k) (Robin) or F(-k)/F(k) (Dirichlet); both reduce to F(k)^*/F(k).
inline BoundaryFunction scattering_matrix(const BoundaryFunction& F, BoundaryKind kind) {
  std::vector<cplx> s(F.size());
  const auto v = F.values();
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(std::abs(v[i]) > 0.0, ErrorKind::ZeroCrossing, "scattering_matrix: zero Jost function");
    const double k = F.grid()[i];
    const cplx minus = F.extend_by_symmetry(-k);
    s[i] = (kind == BoundaryKind::Robin ? -minus : minus) / v[i];
    require(std::abs(std::abs(s[i]) - 1.0) <= 1e-10, ErrorKind::ConsistencyFailure, "scattering_matrix: |S| != 1");
  }
  return BoundaryFunction(F.grid(), std::move(s), Parity::Conjugate);
}

struct SpectralMeasure {
  std::vector<double> lambda;   ///< k^2 on the KGrid
  std::vector<double> density;  ///< sqrt(lambda)/(pi |F(sqrt(lambda))|^2)
  std::vector<std::pair<double, double>> masses;  ///< (-kappa^2, g^2)
};

inline SpectralMeasure spectral_measure(const BoundaryFunction& F, const EigenSet& eigs, std::span<const double> g) {
  require(g.size() == eigs.size(), ErrorKind::InvalidArgument, "spectral_measure: length mismatch");
  SpectralMeasure out;
  const auto v = F.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double k = F.grid()[i];
    const double mod2 = std::norm(v[i]);
    require(mod2 > 0.0, ErrorKind::ZeroCrossing, "spectral_measure: zero Jost function");
    out.lambda.push_back(k * k);
    out.density.push_back(k / (kPi * mod2));
  }
  for (std::size_t j = 0; j < eigs.size(); ++j) {
    require(g[j] > 0.0, ErrorKind::InvalidArgument, "spectral_measure: weights must be positive");
    out.masses.emplace_back(-eigs[j] * eigs[j], g[j] * g[j]);
  }
  return out;
}

struct LevinsonReport {
  double phi0;
  double formula;
  double residual;
};

/// phi(0+) against (N + (1 + d)/2) pi (Robin) or (N + d/2) pi (Dirichlet). Diagnostic only.
inline LevinsonReport levinson_report(std::span<const double> phase, std::size_t n_eigs, int d_flag, BoundaryKind kind) {
  require(!phase.empty(), ErrorKind::InvalidArgument, "levinson_report: empty phase");
  const double n = static_cast<double>(n_eigs);
  const double formula = kind == BoundaryKind::Robin ? (n + (1.0 + d_flag) / 2.0) * kPi : (n + d_flag / 2.0) * kPi;
  return {phase[0], formula, phase[0] - formula};
}

enum class Interlacing { Equal, PlusOne };

/// kappa_a1 < kappa_b1 < kappa_a2 < ... (equal counts) or
/// kappa_b1 < kappa_a1 < kappa_b2 < ... < kappa_b,N+1 (one extra beta state).
inline Interlacing interlacing_check(const EigenSet& alpha, const EigenSet& beta) {
  const std::size_t na = alpha.size(), nb = beta.size();
  std::vector<double> merged;
  if (nb == na) {
    for (std::size_t j = 0; j < na; ++j) {
      merged.push_back(alpha[j]);
      merged.push_back(beta[j]);
    }
  } else if (nb == na + 1) {
    for (std::size_t j = 0; j < na; ++j) {
      merged.push_back(beta[j]);
      merged.push_back(alpha[j]);
    }
    merged.push_back(beta[na]);
  } else {
    fail(ErrorKind::InterlacingViolation, "interlacing_check: eigenvalue counts differ by more than one");
  }
  for (std::size_t i = 1; i < merged.size(); ++i)
    require(merged[i] > merged[i - 1], ErrorKind::InterlacingViolation, "interlacing_check: ordering violated");
  return nb == na ? Interlacing::Equal : Interlacing::PlusOne;
}

struct ForwardOptions {
  double exceptional_threshold = 1e-4;
  BoundStateOptions bound;
};

struct ForwardSummary {
  BoundaryParam bc;
  BoundaryFunction F;
  EigenSet eigs;
  std::vector<double> g;
  std::vector<double> m;
  int d_flag = 0;
  std::vector<double> phase;
};

inline ForwardSummary forward_summary(const JostIntegrator& integ, const BoundaryParam& bc, const KGrid& grid,
                                      ForwardOptions opt = {}) {
  ForwardSummary s;
  s.bc = bc;
  s.F = jost_on_grid(integ, bc, grid);
  s.eigs = bound_states(integ, bc, opt.bound);
  const NormingConstants nc = norming_constants(integ, bc, s.eigs);
  s.g = nc.g;
  s.m = nc.m;
  const auto v = s.F.values();
  s.d_flag = std::abs(v.front()) < opt.exceptional_threshold * (1.0 + std::abs(v.back())) ? 1 : 0;
  s.phase = phase_shift(s.F);
  return s;
}

inline ForwardSummary forward_summary(const Potential& v, const BoundaryParam& bc, const KGrid& grid,
                                      ForwardOptions opt = {}) {
  return forward_summary(JostIntegrator(v), bc, grid, opt);
}

}  // namespace sbm
