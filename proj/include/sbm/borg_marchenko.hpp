#pragma once

// Recovery of the boundary parameters and the Jost functions of a pair of
// boundary conditions beta < alpha from one of the data sets D1..D8: the real
// part of an auxiliary function Lambda_j is formed from the data, Lambda_j is
// rebuilt by a Schwarz integral, and the ratio Z = F_alpha/F_beta (Robin) or
// i F_beta/F_pi (Dirichlet) is read off from it.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "sbm/core.hpp"
#include "sbm/forward.hpp"
#include "sbm/halfplane.hpp"

namespace sbm {

namespace detail {

// Re Lambda_j = offset + scale * k^power * prod_num(k^2 + kappa^2) / (|F|^2 prod_den(k^2 + kappa^2)),
// where the numerator set is the alpha set for j <= 4 and the beta set otherwise.
struct LambdaShape {
  double offset_unit;  // multiplies 1 or h
  bool offset_h;
  double scale_unit;
  bool scale_h;
  int power;
};

inline LambdaShape lambda_shape(DataTag tag) {
  switch (tag) {
    case DataTag::D1: return {0.0, false, 1.0, true, 1};
    case DataTag::D2: return {-1.0, false, 1.0, false, 0};
    case DataTag::D3: return {0.0, false, 1.0, true, 2};
    case DataTag::D4: return {-1.0, false, 1.0, false, 2};
    case DataTag::D5: return {-1.0, true, 1.0, true, 2};
    case DataTag::D6: return {-1.0, false, 1.0, false, 2};
    case DataTag::D7: return {1.0, true, -1.0, true, 0};
    case DataTag::D8: return {-1.0, false, 1.0, false, 0};
  }
  return {};
}

inline double real_kappa_poly(double k, std::span<const double> kappas) {
  double acc = 1.0;
  for (double kap : kappas) acc *= k * k + kap * kap;
  return acc;
}

}  // namespace detail

/// Re Lambda_j on the data grid, with a free slot for the beta eigenvalue
/// missing from D3/D4.
class LambdaFamily {
 public:
  LambdaFamily() = default;
  explicit LambdaFamily(SpectralDataSet data) : data_(std::move(data)) {}

  DataTag tag() const { return data_.tag; }
  const SpectralDataSet& data() const { return data_; }
  const KGrid& grid() const { return data_.modulus.grid(); }
  bool has_missing_slot() const { return tag_partial_beta(data_.tag); }

  /// Beta set with the missing element inserted (D3/D4) or as given.
  EigenSet beta_set(std::optional<double> kappa) const {
    if (!has_missing_slot()) return data_.eig_beta;
    require(kappa.has_value(), ErrorKind::InvalidArgument, "LambdaFamily: missing-eigenvalue parameter required");
    for (double k : data_.eig_beta.kappas())
      require(std::abs(k - *kappa) > 1e-12, ErrorKind::RecoveryFailure, "LambdaFamily: parameter collides with data");
    return data_.eig_beta.with(*kappa);
  }

  std::vector<double> re_samples(std::optional<double> kappa = std::nullopt) const {
    require(kappa.has_value() == has_missing_slot(), ErrorKind::InvalidArgument,
            "LambdaFamily: parameter given iff the tag is D3 or D4");
    const EigenSet beta = beta_set(kappa);
    const bool alpha_on_top = tag_index(data_.tag) <= 4;
    const auto num = alpha_on_top ? data_.eig_alpha.kappas() : beta.kappas();
    const auto den = alpha_on_top ? beta.kappas() : data_.eig_alpha.kappas();
    const detail::LambdaShape shape = detail::lambda_shape(data_.tag);
    const double h = data_.h.value_or(0.0);
    const double offset = shape.offset_unit * (shape.offset_h ? h : 1.0);
    const double scale = shape.scale_unit * (shape.scale_h ? h : 1.0);
    const auto k = grid().points();
    const auto mod = data_.modulus.values();
    std::vector<double> out(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
      const double m2 = std::norm(mod[i]);
      require(m2 > 0.0, ErrorKind::ZeroCrossing, "build_re_lambda: modulus vanishes on the grid");
      const double ratio = detail::real_kappa_poly(k[i], num) / detail::real_kappa_poly(k[i], den);
      out[i] = offset + scale * std::pow(k[i], shape.power) * ratio / m2;
    }
    return out;
  }

  /// Parity of Re Lambda_j on R: odd for D1, even otherwise.
  int parity() const { return data_.tag == DataTag::D1 ? -1 : 1; }

 private:
  SpectralDataSet data_;
};

/// Validates the data set, checks interlacing of the given sets and, except
/// for the one-parameter tags, the decay of Re Lambda_j.
inline LambdaFamily build_re_lambda(const SpectralDataSet& d) {
  d.validate();
  if (tag_partial_beta(d.tag)) {
    require(d.eig_beta.size() == d.eig_alpha.size(), ErrorKind::InvalidDataset,
            "build_re_lambda: the partial beta set must have N_alpha elements");
  } else {
    const Interlacing got = interlacing_check(d.eig_alpha, d.eig_beta);
    const Interlacing want = tag_plus_one(d.tag) ? Interlacing::PlusOne : Interlacing::Equal;
    require(got == want, ErrorKind::InvalidDataset, "build_re_lambda: eigenvalue counts do not match the tag");
  }
  LambdaFamily fam(d);
  if (!fam.has_missing_slot())
    require_decay(fam.grid(), fam.re_samples(), ErrorKind::NotInClass, "build_re_lambda");
  return fam;
}

/// lim k Lambda(k) as k -> infinity for an even real part decaying like 1/k^2:
/// (i/pi) int_R Re Lambda dt.
inline cplx lambda_leading_coefficient(const KGrid& grid, std::span<const double> re_even) {
  return kI * (2.0 / kPi) * half_line_integral(grid, re_even);
}

namespace detail {
// Expected lim k Lambda_j(k) where the tag fixes it: i for D3, -i cot(beta) for D4.
inline std::optional<cplx> lambda_leading_target(const SpectralDataSet& d) {
  if (d.tag == DataTag::D3) return kI;
  if (d.tag == DataTag::D4) return -kI * d.cot_beta.value();
  return std::nullopt;
}
}  // namespace detail

struct LambdaOptions {
  double leading_tolerance = 1e-5;  ///< on |lim k Lambda - target| for D3/D4
};

/// Lambda_j from its real part via the Schwarz integral, with an O(1/k)
/// certificate along the imaginary axis and, for D3/D4, the leading-order
/// condition that pins the missing eigenvalue.
inline HalfPlaneFunction reconstruct_lambda(const LambdaFamily& fam, std::optional<double> kappa = std::nullopt,
                                            LambdaOptions opt = {}) {
  const std::vector<double> re = fam.re_samples(kappa);
  require_decay(fam.grid(), re, ErrorKind::NotInClass, "reconstruct_lambda");
  HalfPlaneFunction lam = schwarz_reconstruct(fam.grid(), re, fam.parity());
  const double K = fam.grid().k_max();
  double prev = 0.0;
  for (double s : {K, 2.0 * K, 4.0 * K}) {
    const double v = s * std::abs(lam(cplx(0.0, s)));
    require(std::isfinite(v), ErrorKind::NotInClass, "reconstruct_lambda: non-finite value");
    if (prev > 0.0)
      require(v <= 2.0 * prev + 1e-6, ErrorKind::NotInClass, "reconstruct_lambda: growth faster than 1/k");
    prev = v;
  }
  if (const auto target = detail::lambda_leading_target(fam.data())) {
    const cplx lead = lambda_leading_coefficient(fam.grid(), re);
    require(std::abs(lead - *target) <= opt.leading_tolerance * std::max(1.0, std::abs(*target)),
            ErrorKind::NotInClass, "reconstruct_lambda: leading-order condition fails for this parameter");
  }
  return lam;
}

/// Residual (1/pi) int_R Re Lambda_j - target as a function of the missing beta eigenvalue.
inline double missing_eigenvalue_residual(const LambdaFamily& fam, double kappa) {
  const auto target = detail::lambda_leading_target(fam.data());
  require(target.has_value(), ErrorKind::InvalidArgument, "missing_eigenvalue_residual: D3 or D4 only");
  const cplx lead = lambda_leading_coefficient(fam.grid(), fam.re_samples(kappa));
  return ((lead - *target) / kI).real();
}

/// Open interval forced by interlacing for the beta eigenvalue missing from D3/D4.
inline std::pair<double, double> missing_eigenvalue_interval(const LambdaFamily& fam) {
  const auto alpha = fam.data().eig_alpha.kappas();
  const auto known = fam.data().eig_beta.kappas();
  const std::size_t n = alpha.size();
  // slots: (0, a1), (a1, a2), ..., (aN, inf); each known beta fills one
  std::vector<int> filled(n + 1, 0);
  for (double b : known) {
    std::size_t slot = 0;
    while (slot < n && b > alpha[slot]) ++slot;
    require(slot == n || b != alpha[slot], ErrorKind::RecoveryFailure, "resolve_missing_eigenvalue: kappa collision");
    require(filled[slot] == 0, ErrorKind::RecoveryFailure, "resolve_missing_eigenvalue: interlacing violated");
    filled[slot] = 1;
  }
  for (std::size_t slot = 0; slot <= n; ++slot) {
    if (filled[slot]) continue;
    const double lo = slot == 0 ? 0.0 : alpha[slot - 1];
    const double hi = slot == n ? std::numeric_limits<double>::infinity() : alpha[slot];
    return {lo, hi};
  }
  fail(ErrorKind::RecoveryFailure, "resolve_missing_eigenvalue: no admissible interval");
}

/// The missing beta eigenvalue of D3/D4: the root in the interlacing interval
/// of the leading-order residual of Lambda_3 (lim k Lambda_3 = i) or
/// Lambda_4 (lim k Lambda_4 = -i cot beta).
inline double resolve_missing_eigenvalue(const LambdaFamily& fam, double tolerance = 1e-13) {
  require(fam.has_missing_slot(), ErrorKind::InvalidArgument, "resolve_missing_eigenvalue: D3 or D4 only");
  auto [lo, hi] = missing_eigenvalue_interval(fam);
  auto f = [&](double kap) { return missing_eigenvalue_residual(fam, kap); };
  const double width0 = std::isfinite(hi) ? hi - lo : std::max(1.0, lo);
  double a = lo + 1e-9 * width0;
  double fa = f(a);
  double b = std::isfinite(hi) ? hi - 1e-9 * width0 : lo + width0;
  double fb = f(b);
  if (!std::isfinite(hi)) {
    for (int grow = 0; grow < 40 && (fa < 0.0) == (fb < 0.0); ++grow) {
      a = b;
      fa = fb;
      b = lo + (b - lo) * 2.0;
      fb = f(b);
    }
  }
  require((fa < 0.0) != (fb < 0.0), ErrorKind::RecoveryFailure,
          "resolve_missing_eigenvalue: no sign change in the admissible interval");
  std::uintmax_t iters = 200;
  auto stop = [tolerance](double x, double y) { return std::abs(y - x) <= tolerance; };
  const auto [r0, r1] = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, iters);
  require(iters < 200, ErrorKind::RecoveryFailure, "resolve_missing_eigenvalue: root refinement did not converge");
  return 0.5 * (r0 + r1);
}

struct AsymptoticFit {
  double h = std::numeric_limits<double>::quiet_NaN();  ///< Robin pairs only
  double cot_beta = 0.0;
  double residual = 0.0;  ///< max misfit of the asymptotic model
};

struct AsymptoticFitOptions {
  double s_min_factor = 0.5;  ///< s from s_min_factor * k_max
  double s_max_factor = 8.0;  ///< to s_max_factor * k_max
  int points = 40;
  int terms = 7;
  double tolerance = 1e-6;
};

/// Z(is) = 1 + h/s + h cot(beta)/s^2 + ... (Robin pair) or
/// Z(is) = -s + cot(beta) + ... (alpha = pi), fitted by least squares along the imaginary axis.
inline AsymptoticFit fit_boundary_asymptotics(const HalfPlaneFunction& Z, BoundaryKind alpha_kind, double k_max,
                                              AsymptoticFitOptions opt = {}) {
  const bool robin = alpha_kind == BoundaryKind::Robin;
  const int n = opt.points, m = opt.terms;
  std::vector<double> s(n), y(n);
  const double a = opt.s_min_factor * k_max, b = opt.s_max_factor * k_max;
  for (int i = 0; i < n; ++i) s[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  std::vector<cplx> z(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) { z[i] = Z(cplx(0.0, s[i])); });
  Eigen::MatrixXd A(n, m);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    y[i] = robin ? z[i].real() - 1.0 : z[i].real() + s[i];
    require(std::isfinite(y[i]), ErrorKind::AsymptoticsFailure, "fit_boundary_asymptotics: non-finite Z");
    for (int j = 0; j < m; ++j) A(i, j) = robin ? std::pow(s[i], -(j + 1)) : std::pow(s[i], -j);
    rhs(i) = y[i];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(rhs);
  AsymptoticFit fit;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    fit.residual = std::max(fit.residual, std::abs((A.row(i) * c)(0) - rhs(i)));
    scale = std::max(scale, std::abs(rhs(i)));
    // Z must be real on the imaginary axis
    fit.residual = std::max(fit.residual, std::abs(z[i].imag()) * 1e-3);
  }
  require(fit.residual <= opt.tolerance * std::max(1.0, scale), ErrorKind::AsymptoticsFailure,
          "fit_boundary_asymptotics: residual above tolerance");
  if (robin) {
    fit.h = c(0);
    require(fit.h > 0.0, ErrorKind::AsymptoticsFailure, "fit_boundary_asymptotics: h must be positive");
    fit.cot_beta = c(1) / fit.h;
  } else {
    fit.cot_beta = c(0);
  }
  return fit;
}

struct ParamsAndRatio {
  BoundaryParam alpha;
  BoundaryParam beta;
  double h = std::numeric_limits<double>::quiet_NaN();  ///< Robin pairs only
  HalfPlaneFunction Z;
  EigenSet eig_alpha;
  EigenSet eig_beta;
  HalfPlaneFunction lambda;
};

/// Z from the closed forms of Lambda_j, then h and cot(beta) from the large-k
/// behaviour of Z where the data set does not carry them.
inline ParamsAndRatio recover_params_and_ratio(const LambdaFamily& fam, const HalfPlaneFunction& lambda,
                                               std::optional<double> kappa = std::nullopt,
                                               AsymptoticFitOptions fit_opt = {}) {
  const SpectralDataSet& d = fam.data();
  const DataTag tag = d.tag;
  const EigenSet alpha_set = d.eig_alpha;
  const EigenSet beta_set = fam.beta_set(kappa);
  const bool dirichlet = tag_dirichlet(tag);
  const double h = d.h.value_or(0.0);
  const std::vector<double> re = fam.re_samples(kappa);
  // lim k Lambda_j for the tags whose closed form carries an unknown constant
  const cplx lead = fam.parity() == 1 ? lambda_leading_coefficient(fam.grid(), re) : cplx(0.0);
  double sigma = 0.0;
  for (double kb : beta_set.kappas()) sigma += kb * kb;
  for (double ka : alpha_set.kappas()) sigma -= ka * ka;

  std::vector<double> ka(alpha_set.kappas().begin(), alpha_set.kappas().end());
  std::vector<double> kb(beta_set.kappas().begin(), beta_set.kappas().end());
  auto ratio_ab = [ka, kb](cplx k) { return kappa_poly(k, ka) / kappa_poly(k, kb); };
  auto ratio_ba = [ka, kb](cplx k) { return kappa_poly(k, kb) / kappa_poly(k, ka); };
  const double cot_beta_given = d.cot_beta.value_or(0.0);

  HalfPlaneFunction::Evaluator z;
  switch (tag) {
    case DataTag::D1:
      z = [lambda, ratio_ab](cplx k) { return kI * ratio_ab(k) / (lambda(k) + kI); };
      break;
    case DataTag::D2: {
      const cplx c = -kI * cot_beta_given - lead;
      z = [lambda, ratio_ab, c](cplx k) { return kI * (k * (lambda(k) + 1.0) + c) / ratio_ab(k); };
      break;
    }
    case DataTag::D3:
      z = [lambda, ratio_ab](cplx k) { return kI * k * ratio_ab(k) / lambda(k); };
      break;
    case DataTag::D4:
      z = [lambda, ratio_ab](cplx k) { return kI * (lambda(k) + 1.0) / (k * ratio_ab(k)); };
      break;
    case DataTag::D5:
      z = [lambda, ratio_ba, h](cplx k) { return (kI * k - h - lambda(k)) / (kI * k * ratio_ba(k)); };
      break;
    case DataTag::D6:
      z = [lambda, ratio_ba](cplx k) { return kI * k * ratio_ba(k) / (lambda(k) + 1.0); };
      break;
    case DataTag::D7: {
      const cplx c = sigma - h * cot_beta_given + kI * lead;
      z = [lambda, ratio_ba, h, c](cplx k) {
        return (k * lambda(k) + kI * k * k - h * k + kI * c) / (kI * ratio_ba(k));
      };
      break;
    }
    case DataTag::D8: {
      const cplx c = kI * cot_beta_given - lead;
      z = [lambda, ratio_ba, c](cplx k) { return kI * ratio_ba(k) / (k * (lambda(k) + 1.0) + c); };
      break;
    }
  }
  ParamsAndRatio out;
  out.Z = HalfPlaneFunction(std::move(z), HalfPlaneFunction::Representation::Numeric,
                            dirichlet ? Parity::AntiConjugate : Parity::Conjugate);
  out.lambda = lambda;
  out.eig_alpha = alpha_set;
  out.eig_beta = beta_set;
  const double K = fam.grid().k_max();
  if (dirichlet) {
    const double cot_beta = tag_has_beta(tag) ? cot_beta_given
                                              : fit_boundary_asymptotics(out.Z, BoundaryKind::Dirichlet, K, fit_opt).cot_beta;
    out.alpha = BoundaryParam::dirichlet();
    out.beta = BoundaryParam::robin(cot_beta);
  } else {
    const double cot_beta =
        tag_has_beta(tag) ? cot_beta_given : fit_boundary_asymptotics(out.Z, BoundaryKind::Robin, K, fit_opt).cot_beta;
    out.h = h;
    out.beta = BoundaryParam::robin(cot_beta);
    out.alpha = BoundaryParam::robin(cot_beta - h);
  }
  return out;
}

struct JostPair {
  HalfPlaneFunction F_alpha;
  HalfPlaneFunction F_beta;
};

struct JostPairOptions {
  bool verify_zeros = true;
  int contour_points = 400;
};

namespace detail {
inline void verify_zero_count(const HalfPlaneFunction& F, const EigenSet& zeros, double k_max, int points,
                              const std::string& what) {
  double top = 1.0, bottom = 1.0;
  for (double kap : zeros.kappas()) {
    top = std::max(top, kap);
    bottom = std::min(bottom, kap);
  }
  const int count = winding_number(F, 0.5 * k_max, 0.25 * bottom, 2.0 * top + 1.0, points);
  require(count == static_cast<int>(zeros.size()), ErrorKind::RecoveryFailure,
          what + ": zero count in C+ differs from the eigenvalue count");
}

// Evaluator with removable singularities at i kappa for kappa in `points` (a quotient
// 0/0 or a product of a pole and a zero). Close to those points the value is the
// mean over a small circle (8 nodes), exact for analytic functions up to O(r^8).
inline HalfPlaneFunction removable_at(HalfPlaneFunction::Evaluator q, const EigenSet& points, Parity parity) {
  std::vector<double> kap(points.kappas().begin(), points.kappas().end());
  return HalfPlaneFunction(
      [q = std::move(q), kap](cplx k) {
        for (double kappa : kap) {
          const double r = 1e-2 * kappa;
          if (std::abs(k - cplx(0.0, kappa)) >= r) continue;
          cplx sum = 0.0;
          for (int j = 0; j < 8; ++j) sum += q(cplx(0.0, kappa) + r * std::polar(1.0, kPi * j / 4.0));
          return sum / 8.0;
        }
        return q(k);
      },
      HalfPlaneFunction::Representation::Numeric, parity);
}
}  // namespace detail

/// The Jost function whose modulus is in the data is the outer function times
/// its Blaschke product; the partner follows from Z.
inline JostPair recover_jost_pair(const SpectralDataSet& d, const ParamsAndRatio& pr, JostPairOptions opt = {}) {
  const KGrid& grid = d.modulus.grid();
  const std::vector<double> mod = d.modulus.abs_values();
  const bool dirichlet = pr.alpha.is_dirichlet();
  const HalfPlaneFunction Z = pr.Z;
  JostPair out;
  if (tag_has_alpha_modulus(d.tag)) {
    out.F_alpha = outer_from_modulus(grid, mod, pr.eig_alpha, pr.alpha.kind);
    const HalfPlaneFunction Fa = out.F_alpha;
    if (dirichlet) {
      out.F_beta = detail::removable_at([Fa, Z](cplx k) { return -kI * Z(k) * Fa(k); }, pr.eig_alpha,
                                        Parity::AntiConjugate);
    } else {
      out.F_beta = detail::removable_at([Fa, Z](cplx k) { return Fa(k) / Z(k); }, pr.eig_alpha, Parity::AntiConjugate);
    }
  } else {
    out.F_beta = outer_from_modulus(grid, mod, pr.eig_beta, BoundaryKind::Robin);
    const HalfPlaneFunction Fb = out.F_beta;
    if (dirichlet) {
      out.F_alpha = detail::removable_at([Fb, Z](cplx k) { return kI * Fb(k) / Z(k); }, pr.eig_beta, Parity::Conjugate);
    } else {
      out.F_alpha = detail::removable_at([Fb, Z](cplx k) { return Z(k) * Fb(k); }, pr.eig_beta, Parity::AntiConjugate);
    }
  }
  if (opt.verify_zeros) {
    detail::verify_zero_count(out.F_alpha, pr.eig_alpha, grid.k_max(), opt.contour_points, "recover_jost_pair (alpha)");
    detail::verify_zero_count(out.F_beta, pr.eig_beta, grid.k_max(), opt.contour_points, "recover_jost_pair (beta)");
  }
  return out;
}

/// f(k,0) and f'(k,0) from the two Jost functions.
inline JostAtOrigin boundary_data_f(const HalfPlaneFunction& F_alpha, const HalfPlaneFunction& F_beta,
                                    const BoundaryParam& alpha, const BoundaryParam& beta, cplx k) {
  require(!beta.is_dirichlet(), ErrorKind::InvalidArgument, "boundary_data_f: beta must be a Robin condition");
  const cplx fa = F_alpha(k), fb = F_beta(k);
  if (alpha.is_dirichlet()) return {fa, kI * fb - beta.cot * fa, k};
  const double h = beta.cot - alpha.cot;
  require(h != 0.0, ErrorKind::InvalidArgument, "boundary_data_f: alpha and beta coincide");
  return {kI / h * (fb - fa), kI / h * (beta.cot * fa - alpha.cot * fb), k};
}

namespace detail {
// dF/dk at i kappa by a five-point central difference along the imaginary axis
inline cplx derivative_on_imaginary_axis(const HalfPlaneFunction& F, double kappa) {
  const double d = 1e-3 * kappa;
  auto at = [&](double t) { return F(cplx(0.0, kappa + t * d)); };
  return (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * kI * d);
}

inline double positive_real_square(cplx v, const std::string& what) {
  require(std::abs(v.imag()) <= 1e-6 * std::abs(v) && v.real() > 0.0,
          ErrorKind::ConsistencyFailure, what + ": squared norming constant is not a positive real");
  return v.real();
}
}  // namespace detail

/// g_j and m_j from F_alpha, F_beta at the bound states of F_alpha.
inline NormingConstants norming_from_jost(const HalfPlaneFunction& F_alpha, const HalfPlaneFunction& F_beta, double h,
                                          const EigenSet& eigs, BoundaryKind kind) {
  NormingConstants out;
  for (double kap : eigs.kappas()) {
    const cplx dF = detail::derivative_on_imaginary_axis(F_alpha, kap);
    const cplx fb = F_beta(cplx(0.0, kap));
    cplx g2, m2;
    if (kind == BoundaryKind::Robin) {
      g2 = 2.0 * kI * kap * fb / (h * dF);
      m2 = -2.0 * kI * kap * h / (fb * dF);
    } else {
      g2 = 2.0 * kap * fb / dF;
      m2 = -2.0 * kap / (fb * dF);
    }
    out.g.push_back(std::sqrt(detail::positive_real_square(g2, "norming_from_jost (g)")));
    out.m.push_back(std::sqrt(detail::positive_real_square(m2, "norming_from_jost (m)")));
  }
  return out;
}

struct Recovery {
  BoundaryParam alpha;
  BoundaryParam beta;
  double h = std::numeric_limits<double>::quiet_NaN();
  EigenSet eig_alpha;
  EigenSet eig_beta;
  std::optional<double> missing_kappa;
  HalfPlaneFunction Z;
  HalfPlaneFunction F_alpha;
  HalfPlaneFunction F_beta;
  KGrid grid;
};

struct RecoveryOptions {
  LambdaOptions lambda;
  AsymptoticFitOptions fit;
  JostPairOptions jost;
};

/// The whole chain for one data set, with stage labels on failure.
inline Recovery recover_from_dataset(const SpectralDataSet& d, RecoveryOptions opt = {}) {
  const LambdaFamily fam = with_stage("build_re_lambda", [&] { return build_re_lambda(d); });
  std::optional<double> kappa;
  if (fam.has_missing_slot())
    kappa = with_stage("resolve_missing_eigenvalue", [&] { return resolve_missing_eigenvalue(fam); });
  const HalfPlaneFunction lam =
      with_stage("reconstruct_lambda", [&] { return reconstruct_lambda(fam, kappa, opt.lambda); });
  const ParamsAndRatio pr =
      with_stage("recover_params_and_ratio", [&] { return recover_params_and_ratio(fam, lam, kappa, opt.fit); });
  const JostPair jp = with_stage("recover_jost_pair", [&] { return recover_jost_pair(d, pr, opt.jost); });
  Recovery r;
  r.alpha = pr.alpha;
  r.beta = pr.beta;
  r.h = pr.h;
  r.eig_alpha = pr.eig_alpha;
  r.eig_beta = pr.eig_beta;
  r.missing_kappa = kappa;
  r.Z = pr.Z;
  r.F_alpha = jp.F_alpha;
  r.F_beta = jp.F_beta;
  r.grid = fam.grid();
  return r;
}

/// Data set of the given tag built from a pair of Jost functions on a grid.
inline SpectralDataSet make_dataset(DataTag tag, const BoundaryFunction& F_alpha, const BoundaryFunction& F_beta,
                                    const BoundaryParam& alpha, const BoundaryParam& beta, const EigenSet& eig_alpha,
                                    const EigenSet& eig_beta, std::optional<std::size_t> drop_beta = std::nullopt) {
  SpectralDataSet d;
  d.tag = tag;
  if (tag_has_h(tag)) d.h = beta.cot - alpha.cot;
  if (tag_has_beta(tag)) d.cot_beta = beta.cot;
  const BoundaryFunction& src = tag_has_alpha_modulus(tag) ? F_alpha : F_beta;
  d.modulus = BoundaryFunction::real_even(src.grid(), src.abs_values());
  d.eig_alpha = eig_alpha;
  if (tag_partial_beta(tag)) {
    require(drop_beta.has_value() && *drop_beta < eig_beta.size(), ErrorKind::InvalidArgument,
            "make_dataset: D3/D4 need the index of the withheld beta eigenvalue");
    std::vector<double> kept;
    for (std::size_t i = 0; i < eig_beta.size(); ++i)
      if (i != *drop_beta) kept.push_back(eig_beta[i]);
    d.eig_beta = EigenSet(std::move(kept));
  } else {
    d.eig_beta = eig_beta;
  }
  d.validate();
  return d;
}

}  // namespace sbm
