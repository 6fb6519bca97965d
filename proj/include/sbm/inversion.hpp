#pragma once

// Potential reconstruction by the Gel'fand-Levitan, Marchenko and right
// Faddeev-Marchenko integral equations. Each kernel is translation structured,
// so it is stored as a 1-D profile on a uniform s-grid commensurate with the
// XGrid; each x is an independent dense Nystrom solve.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "sbm/borg_marchenko.hpp"
#include "sbm/core.hpp"
#include "sbm/fourier.hpp"
#include "sbm/parallel.hpp"

namespace sbm {

struct GLData {
  BoundaryFunction modulus;  ///< |F_alpha| on the KGrid
  EigenSet eigs;
  std::vector<double> g;

  void validate() const {
    require(g.size() == eigs.size(), ErrorKind::InvalidData, "GLData: one norming constant per eigenvalue");
    for (double v : g) require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidData, "GLData: g must be positive");
    for (double v : modulus.abs_values())
      require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidData, "GLData: modulus must be positive");
  }
};

struct MarchenkoData {
  BoundaryFunction S;
  EigenSet eigs;
  std::vector<double> m;

  void validate() const {
    require(m.size() == eigs.size(), ErrorKind::InvalidData, "MarchenkoData: one norming constant per eigenvalue");
    for (double v : m) require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidData, "MarchenkoData: m must be positive");
    for (cplx s : S.values())
      require(std::abs(std::abs(s) - 1.0) <= 1e-8, ErrorKind::InvalidData, "MarchenkoData: |S| != 1");
  }
};

struct FMData {
  BoundaryFunction L;
  EigenSet taus;  ///< poles of L at i*tau
  std::vector<double> c;

  void validate() const {
    require(c.size() == taus.size(), ErrorKind::InvalidData, "FMData: one norming constant per pole");
    for (double v : c) require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidData, "FMData: c must be positive");
    for (cplx l : L.values()) require(std::abs(l) <= 1.0 + 1e-8, ErrorKind::InvalidData, "FMData: |L| > 1");
  }
};

enum class KernelKind { GelfandLevitan, Marchenko, FaddeevMarchenko };

/// Translation-structured kernel: profile(s) sampled at s = s0 + j ds.
/// GL: G(x,y) = T(x-y) +- T(x+y) + sum_j w_j phi_j(x) phi_j(y), with + and cosh for
/// Robin, - and sinh/kappa for Dirichlet. Marchenko: M(s). FM: Omega(s).
struct Kernel2D {
  KernelKind kind = KernelKind::GelfandLevitan;
  BoundaryKind bc = BoundaryKind::Robin;
  XGrid x;
  double s0 = 0.0;
  double ds = 0.0;
  std::vector<double> profile;
  EigenSet eigs;                ///< GL bound-state part
  std::vector<double> weights;  ///< g^2
  double truncation = 0.0;      ///< Marchenko/FM half-line cut length

  double at_index(long j) const {
    require(j >= 0 && static_cast<std::size_t>(j) < profile.size(), ErrorKind::OutOfRange,
            "Kernel2D: profile index out of range");
    return profile[static_cast<std::size_t>(j)];
  }
  /// Profile at s = s0 + j ds for an arbitrary real s on the sampled range (linear interpolation).
  double at(double s) const {
    const double u = (s - s0) / ds;
    const long j = std::clamp(static_cast<long>(std::floor(u)), 0L, static_cast<long>(profile.size()) - 2);
    const double t = u - static_cast<double>(j);
    return (1.0 - t) * profile[j] + t * profile[j + 1];
  }

  /// GL kernel on the XGrid nodes.
  double gl(std::size_t i, std::size_t j) const {
    const long d = static_cast<long>(i > j ? i - j : j - i);
    const long s = static_cast<long>(i + j);
    const double sign = bc == BoundaryKind::Robin ? 1.0 : -1.0;
    double v = at_index(d) + sign * at_index(s);
    const double xi = x[i], yj = x[j];
    for (std::size_t q = 0; q < eigs.size(); ++q) {
      const double k = eigs[q];
      v += bc == BoundaryKind::Robin ? weights[q] * std::cosh(k * xi) * std::cosh(k * yj)
                                     : weights[q] / (k * k) * std::sinh(k * xi) * std::sinh(k * yj);
    }
    return v;
  }
};

struct InversionOptions {
  double x_max = 4.0;
  std::size_t points = 201;  ///< XGrid size, dx = x_max/(points - 1)
};

namespace detail {
inline void require_decay_for_kernel(const KGrid& grid, std::span<const cplx> r, const std::string& what) {
  std::vector<double> a(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) a[i] = std::abs(r[i]);
  require_decay(grid, a, ErrorKind::InvalidData, what);
}

inline std::vector<double> uniform_points(double s0, double ds, std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = s0 + ds * static_cast<double>(j);
  return s;
}

// d/dx of samples on a uniform grid: 4th-order central, one-sided 4th-order at the ends.
inline std::vector<double> derivative_4th(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  require(n >= 5, ErrorKind::InvalidArgument, "derivative: need at least 5 samples");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * dx);
    } else if (i < 2) {
      // forward stencil on f[i..i+4]
      const double* p = f.data() + i;
      d[i] = (-25.0 * p[0] + 48.0 * p[1] - 36.0 * p[2] + 16.0 * p[3] - 3.0 * p[4]) / (12.0 * dx);
    } else {
      const double* p = f.data() + i;
      d[i] = (25.0 * p[0] - 48.0 * p[-1] + 36.0 * p[-2] - 16.0 * p[-3] + 3.0 * p[-4]) / (12.0 * dx);
    }
  }
  return d;
}

// Trapezoid weights for m + 1 equispaced nodes.
inline std::vector<double> trapezoid_weights(std::size_t m, double h) {
  std::vector<double> w(m + 1, h);
  w.front() *= 0.5;
  w.back() *= 0.5;
  if (m == 0) w[0] = 0.0;
  return w;
}

inline Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::string& what) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rc = lu.rcond();
  require(std::isfinite(rc) && rc > 1e-14, ErrorKind::SolverFailure, what + ": singular Nystrom matrix");
  Eigen::VectorXd x = lu.solve(b);
  require(x.allFinite(), ErrorKind::SolverFailure, what + ": non-finite solution");
  return x;
}
}  // namespace detail

/// Gel'fand-Levitan kernel. The continuous part is
/// (1/pi) int_R w(k) cos kx cos ky dk = T(x-y) + T(x+y) with T the full-line
/// transform of w = k^2/|F|^2 - 1 (Robin) or 1/|F|^2 - 1 with sines (Dirichlet).
inline Kernel2D gl_kernel(const GLData& data, BoundaryKind bc, InversionOptions opt = {}) {
  data.validate();
  const KGrid& grid = data.modulus.grid();
  const auto mod = data.modulus.abs_values();
  std::vector<cplx> w(grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double k = grid[i];
    const double m2 = mod[i] * mod[i];
    w[i] = (bc == BoundaryKind::Robin ? k * k / m2 : 1.0 / m2) - 1.0;
  }
  detail::require_decay_for_kernel(grid, w, "gl_kernel");
  Kernel2D ker;
  ker.kind = KernelKind::GelfandLevitan;
  ker.bc = bc;
  ker.x = make_xgrid(opt.x_max, opt.points);
  ker.ds = ker.x.dx();
  const ConjSymmetricFourier ft(grid, w);
  ker.profile = ft.sample(detail::uniform_points(0.0, ker.ds, 2 * opt.points - 1));
  ker.eigs = data.eigs;
  for (double g : data.g) ker.weights.push_back(g * g);
  return ker;
}

/// Solves A(x,y) + G(x,y) + int_0^x G(y,z) A(x,z) dz = 0 per x and returns V = 2 d/dx A(x,x).
/// A(0,0) = -G(0,0) equals -cot(alpha) for a Robin condition.
inline Potential gl_invert(const Kernel2D& ker, std::vector<double>* diagonal = nullptr) {
  require(ker.kind == KernelKind::GelfandLevitan, ErrorKind::InvalidArgument, "gl_invert: not a GL kernel");
  const std::size_t n = ker.x.size();
  const double dx = ker.x.dx();
  std::vector<double> a(n);
  parallel_for(n, [&](std::size_t p) {
    // nodes y_0..y_p on [0, x_p]
    const std::size_t m = p;
    const std::vector<double> w = detail::trapezoid_weights(m, dx);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m + 1, m + 1);
    Eigen::VectorXd b(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
      b(i) = -ker.gl(p, i);
      for (std::size_t j = 0; j <= m; ++j) A(i, j) += w[j] * ker.gl(i, j);
    }
    const Eigen::VectorXd sol = detail::solve_dense(A, b, "gl_invert");
    a[p] = sol(m);
  });
  std::vector<double> v = detail::derivative_4th(a, dx);
  for (double& e : v) e *= 2.0;
  if (diagonal) *diagonal = a;
  return Potential(ker.x, std::move(v));
}

namespace detail {
// Half-line cut for the Marchenko equation: 10/kappa_min clamped to [5, 20], 10 without bound states.
inline double marchenko_truncation(const EigenSet& eigs) {
  if (eigs.empty()) return 10.0;
  return std::clamp(10.0 / eigs[0], 5.0, 20.0);
}
}  // namespace detail

/// M(y) = (1/2pi) int_R [S - 1] e^{iky} dk + sum m^2 e^{-kappa y} (Robin), with 1 - S for Dirichlet.
inline Kernel2D marchenko_kernel(const MarchenkoData& data, BoundaryKind bc, InversionOptions opt = {}) {
  data.validate();
  const KGrid& grid = data.S.grid();
  const auto S = data.S.values();
  std::vector<cplx> r(grid.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = bc == BoundaryKind::Robin ? S[i] - 1.0 : 1.0 - S[i];
  detail::require_decay_for_kernel(grid, r, "marchenko_kernel");
  Kernel2D ker;
  ker.kind = KernelKind::Marchenko;
  ker.bc = bc;
  ker.x = make_xgrid(opt.x_max, opt.points);
  ker.ds = ker.x.dx();
  ker.truncation = detail::marchenko_truncation(data.eigs);
  const std::size_t cut = static_cast<std::size_t>(std::ceil(ker.truncation / ker.ds));
  const std::size_t count = 2 * (opt.points - 1) + 2 * cut + 1;
  const ConjSymmetricFourier ft(grid, r);
  const std::vector<double> s = detail::uniform_points(0.0, ker.ds, count);
  ker.profile = ft.sample(s);
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t q = 0; q < data.eigs.size(); ++q)
      ker.profile[j] += data.m[q] * data.m[q] * std::exp(-data.eigs[q] * s[j]);
  ker.eigs = data.eigs;
  return ker;
}

/// With y = x + u, z = x + v: K(u) + M(2x + u) + int_0^cut M(2x + u + v) K(v) dv = 0.
/// V = -2 d/dx K(x, x).
inline Potential marchenko_invert(const Kernel2D& ker) {
  require(ker.kind == KernelKind::Marchenko, ErrorKind::InvalidArgument, "marchenko_invert: not a Marchenko kernel");
  const std::size_t n = ker.x.size();
  const double dx = ker.x.dx();
  const std::size_t cut = static_cast<std::size_t>(std::ceil(ker.truncation / ker.ds));
  const std::vector<double> w = detail::trapezoid_weights(cut, ker.ds);
  std::vector<double> diag(n);
  parallel_for(n, [&](std::size_t p) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(cut + 1, cut + 1);
    Eigen::VectorXd b(cut + 1);
    for (std::size_t i = 0; i <= cut; ++i) {
      b(i) = -ker.at_index(static_cast<long>(2 * p + i));
      for (std::size_t j = 0; j <= cut; ++j) A(i, j) += w[j] * ker.at_index(static_cast<long>(2 * p + i + j));
    }
    diag[p] = detail::solve_dense(A, b, "marchenko_invert")(0);
  });
  std::vector<double> v = detail::derivative_4th(diag, dx);
  for (double& e : v) e *= -2.0;
  return Potential(ker.x, std::move(v));
}

/// Left reflection coefficient L = (ik f - f')/(ik f + f') from f(k,0), f'(k,0) of the Jost pair.
struct ReflectionData {
  HalfPlaneFunction L;
  HalfPlaneFunction numerator;    ///< ik f - f'
  HalfPlaneFunction denominator;  ///< ik f + f'
  BoundaryFunction on_grid;
};

inline ReflectionData reflection_coefficient(const HalfPlaneFunction& F_alpha, const HalfPlaneFunction& F_beta,
                                             const BoundaryParam& alpha, const BoundaryParam& beta,
                                             const KGrid& grid) {
  require(alpha.is_dirichlet() != beta.is_dirichlet() || alpha.cot != beta.cot, ErrorKind::InvalidArgument,
          "reflection_coefficient: alpha and beta must differ");
  auto fdata = [F_alpha, F_beta, alpha, beta](cplx k) { return boundary_data_f(F_alpha, F_beta, alpha, beta, k); };
  ReflectionData out;
  out.numerator = HalfPlaneFunction(
      [fdata](cplx k) {
        const JostAtOrigin j = fdata(k);
        return kI * k * j.f0 - j.fprime0;
      },
      HalfPlaneFunction::Representation::Numeric);
  out.denominator = HalfPlaneFunction(
      [fdata](cplx k) {
        const JostAtOrigin j = fdata(k);
        return kI * k * j.f0 + j.fprime0;
      },
      HalfPlaneFunction::Representation::Numeric);
  out.L = HalfPlaneFunction(
      [fdata](cplx k) {
        const JostAtOrigin j = fdata(k);
        return (kI * k * j.f0 - j.fprime0) / (kI * k * j.f0 + j.fprime0);
      },
      HalfPlaneFunction::Representation::Numeric, Parity::Conjugate);
  out.on_grid = out.L.sample(grid, Parity::Conjugate);
  for (cplx l : out.on_grid.values())
    require(std::abs(l) <= 1.0 + 1e-8, ErrorKind::ConsistencyFailure, "reflection_coefficient: |L| > 1 on R");
  return out;
}

struct FMDiscrete {
  EigenSet taus;
  std::vector<double> c;
};

struct PoleScanOptions {
  double omega_max = 0.0;  ///< 0 selects max(4, k_max / 4)
  std::size_t points = 800;
  double tolerance = 1e-12;
};

/// Poles i*tau of L from sign changes of the real function D(i tau) = -tau f + f',
/// residues Res = numerator / D' and c = sqrt(-i Res).
inline FMDiscrete fm_discrete_data(const ReflectionData& r, double k_max, PoleScanOptions opt = {}) {
  const double top = opt.omega_max > 0.0 ? opt.omega_max : std::max(4.0, 0.25 * k_max);
  const std::size_t n = opt.points;
  auto den = [&](double t) { return r.denominator(cplx(0.0, t)).real(); };
  std::vector<double> t(n + 1), v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = top * (1e-4 + (1.0 - 1e-4) * static_cast<double>(i) / n);
  parallel_for(n + 1, [&](std::size_t i) { v[i] = den(t[i]); });
  std::vector<double> taus;
  for (std::size_t i = 0; i < n; ++i) {
    if ((v[i] < 0.0) == (v[i + 1] < 0.0)) continue;
    std::uintmax_t iters = 200;
    const double tol = opt.tolerance;
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    const auto [lo, hi] = boost::math::tools::toms748_solve(den, t[i], t[i + 1], v[i], v[i + 1], stop, iters);
    require(iters < 200, ErrorKind::RootFailure, "fm_discrete_data: pole refinement did not converge");
    taus.push_back(0.5 * (lo + hi));
  }
  FMDiscrete out;
  out.taus = EigenSet(taus);
  for (double tau : taus) {
    const cplx slope = detail::derivative_on_imaginary_axis(r.denominator, tau);
    const cplx res = r.numerator(cplx(0.0, tau)) / slope;
    out.c.push_back(std::sqrt(detail::positive_real_square(-kI * res, "fm_discrete_data (c)")));
  }
  return out;
}

namespace detail {
// Omega vanishes for s > 0 (the bound-state terms cancel the pole contributions),
// so the z-integral only needs -2x + y + z <= 1.
inline constexpr double kFMOverhang = 1.0;
}  // namespace detail

/// Omega(s) = (1/2pi) int_R L e^{iks} dk + sum c^2 e^{-tau s} on s in [-2 x_max, 2 x_max + 2 overhang].
inline Kernel2D fm_kernel(const FMData& data, InversionOptions opt = {}) {
  data.validate();
  const KGrid& grid = data.L.grid();
  const auto L = data.L.values();
  std::vector<cplx> r(L.begin(), L.end());
  detail::require_decay_for_kernel(grid, r, "fm_kernel");
  Kernel2D ker;
  ker.kind = KernelKind::FaddeevMarchenko;
  ker.x = make_xgrid(opt.x_max, opt.points);
  ker.ds = ker.x.dx();
  ker.truncation = detail::kFMOverhang;
  const std::size_t half = 2 * (opt.points - 1);
  const std::size_t over = static_cast<std::size_t>(std::ceil(detail::kFMOverhang / ker.ds));
  ker.s0 = -static_cast<double>(half) * ker.ds;
  const std::size_t count = 2 * half + 2 * over + 1;
  const ConjSymmetricFourier ft(grid, r);
  const std::vector<double> s = detail::uniform_points(ker.s0, ker.ds, count);
  ker.profile = ft.sample(s);
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t q = 0; q < data.taus.size(); ++q)
      ker.profile[j] += data.c[q] * data.c[q] * std::exp(-data.taus[q] * s[j]);
  return ker;
}

/// B(x,y) + Omega(-2x + y) + int_0^{2x+overhang} Omega(-2x + y + z) B(x,z) dz = 0, V = 2 d/dx B(x, 0+).
inline Potential fm_invert(const Kernel2D& ker) {
  require(ker.kind == KernelKind::FaddeevMarchenko, ErrorKind::InvalidArgument, "fm_invert: not an FM kernel");
  const std::size_t n = ker.x.size();
  const double dx = ker.x.dx();
  const std::size_t over = static_cast<std::size_t>(std::ceil(ker.truncation / ker.ds));
  const long origin = static_cast<long>(2 * (n - 1));  // index of s = 0
  std::vector<double> b0(n);
  parallel_for(n, [&](std::size_t p) {
    const std::size_t m = 2 * p + over;
    const std::vector<double> w = detail::trapezoid_weights(m, ker.ds);
    const long shift = origin - static_cast<long>(2 * p);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m + 1, m + 1);
    Eigen::VectorXd b(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
      b(i) = -ker.at_index(shift + static_cast<long>(i));
      for (std::size_t j = 0; j <= m; ++j) A(i, j) += w[j] * ker.at_index(shift + static_cast<long>(i + j));
    }
    b0[p] = detail::solve_dense(A, b, "fm_invert")(0);
  });
  std::vector<double> v = detail::derivative_4th(b0, dx);
  for (double& e : v) e *= 2.0;
  return Potential(ker.x, std::move(v));
}

}  // namespace sbm
