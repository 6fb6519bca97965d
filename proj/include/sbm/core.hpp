#pragma once

// Shared domain types for half-line Schrodinger spectral problems: wavenumber
// and position grids, sampled potentials, boundary parameters, boundary
// functions with their k -> -k symmetry, eigenvalue sets, functions on the
// closed upper half plane, and the eight Borg-Marchenko data sets.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sbm/error.hpp"
#include "sbm/interp.hpp"
#include "sbm/parallel.hpp"

namespace sbm {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Grids

/// Strictly increasing positive wavenumbers ending at k_max.
class KGrid {
 public:
  KGrid() = default;
  explicit KGrid(std::vector<double> points) : points_(std::move(points)) {
    require(!points_.empty(), ErrorKind::InvalidArgument, "KGrid: empty");
    require(points_.front() > 0.0, ErrorKind::InvalidArgument, "KGrid: first point must be > 0");
    for (std::size_t i = 1; i < points_.size(); ++i)
      require(points_[i] > points_[i - 1], ErrorKind::InvalidArgument, "KGrid: not strictly increasing");
    for (double p : points_) require(std::isfinite(p), ErrorKind::InvalidArgument, "KGrid: non-finite point");
  }

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double k_min() const { return points_.front(); }
  double k_max() const { return points_.back(); }

  friend bool operator==(const KGrid&, const KGrid&) = default;

 private:
  std::vector<double> points_;
};

struct KGridOptions {
  double min_fraction = 1e-6;  ///< smallest point = k_max * min_fraction
  double ratio = 1.15;         ///< geometric growth factor near k = 0
};

/// Geometric clustering near k = 0 joined to uniform spacing up to k_max.
inline KGrid make_kgrid(double k_max, std::size_t n, KGridOptions opt = {}) {
  require(std::isfinite(k_max) && k_max > 0.0, ErrorKind::InvalidArgument, "make_kgrid: k_max must be > 0");
  require(n >= 16, ErrorKind::InvalidArgument, "make_kgrid: need at least 16 points");
  require(opt.min_fraction > 0.0 && opt.min_fraction < 1.0 && opt.ratio > 1.0, ErrorKind::InvalidArgument,
          "make_kgrid: bad refinement options");
  const double k_min = k_max * opt.min_fraction;
  const double rho = opt.ratio;

  // geometric run stops once its spacing reaches the uniform spacing
  std::size_t n_geo = 0;
  double h = k_max / static_cast<double>(n);
  for (int iter = 0; iter < 8; ++iter) {
    const double p_end = h / (rho - 1.0);
    n_geo = p_end > k_min ? static_cast<std::size_t>(std::ceil(std::log(p_end / k_min) / std::log(rho))) : 0;
    if (n_geo > n / 2) break;
    const double last_geo = n_geo > 0 ? k_min * std::pow(rho, static_cast<double>(n_geo - 1)) : 0.0;
    h = (k_max - last_geo) / static_cast<double>(n - n_geo);
  }

  std::vector<double> pts;
  pts.reserve(n);
  if (n_geo > n / 2) {
    n_geo = n / 2;
    const std::size_t n_uni = n - n_geo;
    h = k_max / static_cast<double>(n_uni);
    const double r = std::pow(h / k_min, 1.0 / static_cast<double>(n_geo));
    for (std::size_t i = 0; i < n_geo; ++i) pts.push_back(k_min * std::pow(r, static_cast<double>(i)));
    for (std::size_t j = 1; j <= n_uni; ++j) pts.push_back(h * static_cast<double>(j));
  } else {
    for (std::size_t i = 0; i < n_geo; ++i) pts.push_back(k_min * std::pow(rho, static_cast<double>(i)));
    const double start = pts.empty() ? 0.0 : pts.back();
    const std::size_t n_uni = n - n_geo;
    const double step = (k_max - start) / static_cast<double>(n_uni);
    for (std::size_t j = 1; j <= n_uni; ++j) pts.push_back(start + step * static_cast<double>(j));
  }
  pts.back() = k_max;
  return KGrid(std::move(pts));
}

/// Uniform grid on [0, x_max] starting at 0.
class XGrid {
 public:
  XGrid() = default;
  explicit XGrid(std::vector<double> points) : points_(std::move(points)) {
    require(points_.size() >= 2, ErrorKind::InvalidArgument, "XGrid: need >= 2 points");
    require(points_.front() == 0.0, ErrorKind::InvalidArgument, "XGrid: must start at 0");
    const double dx = (points_.back() - points_.front()) / static_cast<double>(points_.size() - 1);
    require(dx > 0.0, ErrorKind::InvalidArgument, "XGrid: non-positive spacing");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      const double step = points_[i] - points_[i - 1];
      require(std::abs(step - dx) <= 1e-12 * std::max(1.0, points_.back()) + 1e-9 * dx, ErrorKind::InvalidArgument,
              "XGrid: spacing not uniform");
    }
    dx_ = dx;
  }

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double dx() const { return dx_; }
  double x_max() const { return points_.back(); }

 private:
  std::vector<double> points_;
  double dx_ = 0.0;
};

inline XGrid make_xgrid(double x_max, std::size_t n) {
  require(x_max > 0.0 && n >= 2, ErrorKind::InvalidArgument, "make_xgrid: need x_max > 0 and n >= 2");
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = x_max * static_cast<double>(i) / static_cast<double>(n - 1);
  p.back() = x_max;
  return XGrid(std::move(p));
}

// ---------------------------------------------------------------------------
// Potential

enum class Interpolation { Linear, Cubic };

/// Sampled real potential on an XGrid, identically zero beyond x_max.
class Potential {
 public:
  Potential() = default;
  Potential(XGrid grid, std::vector<double> values, Interpolation interp = Interpolation::Cubic)
      : grid_(std::move(grid)), values_(std::move(values)), interp_(interp) {
    require(values_.size() == grid_.size(), ErrorKind::InvalidArgument, "Potential: length mismatch");
    cubic_ = PiecewiseCubic<double>(std::vector<double>(grid_.points().begin(), grid_.points().end()), values_);
  }

  /// Samples f on the grid.
  template <class F>
  static Potential from_function(const XGrid& grid, F&& f, Interpolation interp = Interpolation::Cubic) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    return Potential(grid, std::move(v), interp);
  }

  static Potential zero(const XGrid& grid) { return Potential(grid, std::vector<double>(grid.size(), 0.0)); }

  const XGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  Interpolation interpolation() const { return interp_; }

  double operator()(double x) const {
    if (x < 0.0 || x > grid_.x_max()) return 0.0;
    if (interp_ == Interpolation::Cubic) return cubic_(x);
    const double dx = grid_.dx();
    std::size_t i = std::min(static_cast<std::size_t>(x / dx), grid_.size() - 2);
    const double t = (x - grid_[i]) / dx;
    return (1.0 - t) * values_[i] + t * values_[i + 1];
  }

  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

 private:
  XGrid grid_;
  std::vector<double> values_;
  Interpolation interp_ = Interpolation::Cubic;
  PiecewiseCubic<double> cubic_;
};

/// Composite Simpson rule on uniform samples (trapezoid correction for an even count).
inline double simpson(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * dx * (f[0] + f[1]);
  double acc = 0.0;
  std::size_t last = (n % 2 == 1) ? n - 1 : n - 2;
  for (std::size_t i = 0; i + 2 <= last; i += 2) acc += dx / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (last != n - 1) {
    // closing interval: three-point end correction, exact for quadratics
    acc += dx * (5.0 * f[n - 1] + 8.0 * f[n - 2] - f[n - 3]) / 12.0;
  }
  return acc;
}

/// First moment integral of (1 + x)|V| over the sampled support.
inline double faddeev_moment(const Potential& v) {
  require(v.all_finite(), ErrorKind::InvalidData, "faddeev_moment: non-finite potential samples");
  const auto& g = v.grid();
  std::vector<double> integrand(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) integrand[i] = (1.0 + g[i]) * std::abs(v.values()[i]);
  return simpson(integrand, g.dx());
}

// ---------------------------------------------------------------------------
// Boundary conditions

enum class BoundaryKind { Robin, Dirichlet };

/// psi'(0) + cot(alpha) psi(0) = 0 (Robin) or psi(0) = 0 (Dirichlet, alpha = pi).
struct BoundaryParam {
  BoundaryKind kind = BoundaryKind::Dirichlet;
  double cot = 0.0;  ///< meaningful only for Robin

  static BoundaryParam robin(double cot_value) {
    require(std::isfinite(cot_value), ErrorKind::InvalidArgument, "BoundaryParam: cot must be finite");
    return {BoundaryKind::Robin, cot_value};
  }
  static BoundaryParam dirichlet() { return {BoundaryKind::Dirichlet, 0.0}; }

  bool is_dirichlet() const { return kind == BoundaryKind::Dirichlet; }
  /// alpha in (0, pi]; cot is monotone decreasing on (0, pi).
  double angle() const { return is_dirichlet() ? kPi : kPi / 2.0 - std::atan(cot); }
};

// ---------------------------------------------------------------------------
// Functions on the real line stored on k > 0

enum class Parity {
  AntiConjugate,  ///< F(-k) = -F(k)^*  (Robin Jost functions)
  Conjugate,      ///< F(-k) =  F(k)^*  (Dirichlet Jost functions, real even data)
};

inline Parity parity_for(BoundaryKind kind) {
  return kind == BoundaryKind::Robin ? Parity::AntiConjugate : Parity::Conjugate;
}

class BoundaryFunction {
 public:
  BoundaryFunction() = default;
  BoundaryFunction(KGrid grid, std::vector<cplx> values, Parity parity)
      : grid_(std::move(grid)), values_(std::move(values)), parity_(parity) {
    require(values_.size() == grid_.size(), ErrorKind::InvalidArgument, "BoundaryFunction: length mismatch");
    interp_ = PiecewiseCubic<cplx>(std::vector<double>(grid_.points().begin(), grid_.points().end()), values_);
  }

  template <class F>
  static BoundaryFunction from_function(const KGrid& grid, F&& f, Parity parity) {
    std::vector<cplx> v(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { v[i] = cplx(f(grid[i])); });
    return BoundaryFunction(grid, std::move(v), parity);
  }

  /// Real nonnegative even data, e.g. a modulus |F(k)|.
  static BoundaryFunction real_even(const KGrid& grid, std::vector<double> values) {
    std::vector<cplx> v(values.begin(), values.end());
    return BoundaryFunction(grid, std::move(v), Parity::Conjugate);
  }

  const KGrid& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  Parity parity() const { return parity_; }
  std::size_t size() const { return values_.size(); }

  std::vector<double> real_part() const {
    std::vector<double> r(values_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = values_[i].real();
    return r;
  }
  std::vector<double> abs_values() const {
    std::vector<double> r(values_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::abs(values_[i]);
    return r;
  }

  /// Value at any real |k| <= k_max, synthesizing k < 0 through the parity rule.
  cplx operator()(double k) const { return extend_by_symmetry(k); }

  cplx extend_by_symmetry(double k) const {
    require(std::abs(k) <= grid_.k_max() * (1.0 + 1e-14), ErrorKind::OutOfRange, "BoundaryFunction: |k| beyond grid");
    if (k < 0.0) {
      const cplx v = positive(-k);
      return parity_ == Parity::AntiConjugate ? -std::conj(v) : std::conj(v);
    }
    return positive(k);
  }

 private:
  cplx positive(double k) const {
    const auto pts = grid_.points();
    auto it = std::lower_bound(pts.begin(), pts.end(), k);
    if (it != pts.end() && *it == k) return values_[static_cast<std::size_t>(it - pts.begin())];
    return interp_(k);
  }

  KGrid grid_;
  std::vector<cplx> values_;
  Parity parity_ = Parity::Conjugate;
  PiecewiseCubic<cplx> interp_;
};

// ---------------------------------------------------------------------------
// Discrete spectrum

/// Bound-state ordinates kappa_j (eigenvalues -kappa_j^2), strictly increasing and positive.
class EigenSet {
 public:
  EigenSet() = default;
  EigenSet(std::initializer_list<double> k) : EigenSet(std::vector<double>(k)) {}
  explicit EigenSet(std::vector<double> kappas) : kappas_(std::move(kappas)) {
    for (std::size_t i = 0; i < kappas_.size(); ++i) {
      require(std::isfinite(kappas_[i]) && kappas_[i] > 0.0, ErrorKind::InvalidArgument, "EigenSet: kappa must be > 0");
      if (i > 0)
        require(kappas_[i] > kappas_[i - 1], ErrorKind::InvalidArgument, "EigenSet: not strictly increasing");
    }
  }

  std::span<const double> kappas() const { return kappas_; }
  std::size_t size() const { return kappas_.size(); }
  bool empty() const { return kappas_.empty(); }
  double operator[](std::size_t i) const { return kappas_[i]; }

  EigenSet with(double kappa) const {
    std::vector<double> k = kappas_;
    k.push_back(kappa);
    std::sort(k.begin(), k.end());
    return EigenSet(std::move(k));
  }

 private:
  std::vector<double> kappas_;
};

enum class BlaschkeOrientation { ZerosAtIKappa, PolesAtIKappa };

/// prod_j (k - i kappa_j)/(k + i kappa_j), or its reciprocal.
inline cplx blaschke(cplx k, const EigenSet& set, BlaschkeOrientation orientation = BlaschkeOrientation::ZerosAtIKappa) {
  cplx acc = 1.0;
  for (double kap : set.kappas()) {
    const cplx num = k - kI * kap;
    const cplx den = k + kI * kap;
    if (orientation == BlaschkeOrientation::ZerosAtIKappa) {
      require(den != cplx(0.0), ErrorKind::SingularPoint, "blaschke: evaluation at a pole");
      acc *= num / den;
    } else {
      require(num != cplx(0.0), ErrorKind::SingularPoint, "blaschke: evaluation at a pole");
      acc *= den / num;
    }
  }
  return acc;
}

/// prod_j (k^2 + kappa_j^2).
inline cplx kappa_poly(cplx k, std::span<const double> kappas) {
  cplx acc = 1.0;
  for (double kap : kappas) acc *= k * k + kap * kap;
  return acc;
}

// ---------------------------------------------------------------------------
// Functions on the closed upper half plane

/// Evaluator for a function analytic in C+ and continuous up to the real axis.
/// Real arguments are limits from above. A numeric representation may carry
/// boundary samples that are returned verbatim on their grid points.
class HalfPlaneFunction {
 public:
  enum class Representation { Rational, Numeric };
  using Evaluator = std::function<cplx(cplx)>;

  HalfPlaneFunction() = default;
  HalfPlaneFunction(Evaluator f, Representation rep, std::optional<Parity> parity = std::nullopt)
      : f_(std::make_shared<Evaluator>(std::move(f))), rep_(rep), parity_(parity) {}

  static HalfPlaneFunction rational(Evaluator f, std::optional<Parity> parity = std::nullopt) {
    return HalfPlaneFunction(std::move(f), Representation::Rational, parity);
  }
  static HalfPlaneFunction constant(cplx c) {
    return rational([c](cplx) { return c; });
  }

  bool valid() const { return static_cast<bool>(f_); }
  Representation representation() const { return rep_; }
  std::optional<Parity> parity() const { return parity_; }
  const BoundaryFunction* boundary_cache() const { return cache_.get(); }

  cplx operator()(cplx k) const {
    require(valid(), ErrorKind::InvalidArgument, "HalfPlaneFunction: empty evaluator");
    require(k.imag() >= -1e-12 * (1.0 + std::abs(k)), ErrorKind::OutOfDomain,
            "HalfPlaneFunction: evaluation point in the open lower half plane");
    if (cache_ && k.imag() == 0.0) {
      const auto pts = cache_->grid().points();
      const double a = std::abs(k.real());
      auto it = std::lower_bound(pts.begin(), pts.end(), a);
      if (it != pts.end() && *it == a) return cache_->extend_by_symmetry(k.real());
    }
    return (*f_)(cplx(k.real(), std::max(0.0, k.imag())));
  }

  /// Boundary samples on k > 0 of the grid (computed in parallel).
  BoundaryFunction sample(const KGrid& grid, Parity parity) const {
    if (cache_ && cache_->grid() == grid) return *cache_;
    return BoundaryFunction::from_function(grid, [this](double k) { return (*f_)(cplx(k, 0.0)); }, parity);
  }
  BoundaryFunction sample(const KGrid& grid) const { return sample(grid, parity_.value_or(Parity::Conjugate)); }

  /// Copy that answers grid-point evaluations from precomputed samples.
  HalfPlaneFunction cached(const KGrid& grid) const {
    HalfPlaneFunction copy = *this;
    copy.cache_ = std::make_shared<BoundaryFunction>(sample(grid));
    return copy;
  }

  HalfPlaneFunction with_cache(BoundaryFunction samples) const {
    HalfPlaneFunction copy = *this;
    copy.cache_ = std::make_shared<BoundaryFunction>(std::move(samples));
    return copy;
  }

 private:
  std::shared_ptr<const Evaluator> f_;
  Representation rep_ = Representation::Rational;
  std::optional<Parity> parity_;
  std::shared_ptr<const BoundaryFunction> cache_;
};

// ---------------------------------------------------------------------------
// Data sets D1..D8

enum class DataTag { D1 = 1, D2, D3, D4, D5, D6, D7, D8 };

inline int tag_index(DataTag t) { return static_cast<int>(t); }
inline bool tag_dirichlet(DataTag t) { return tag_index(t) % 2 == 0; }
/// D1-D4 carry |F_alpha|; D5-D8 carry |F_beta|.
inline bool tag_has_alpha_modulus(DataTag t) { return tag_index(t) <= 4; }
/// D3, D4, D7, D8 have N_beta = N_alpha + 1.
inline bool tag_plus_one(DataTag t) {
  const int j = tag_index(t);
  return j == 3 || j == 4 || j == 7 || j == 8;
}
inline bool tag_partial_beta(DataTag t) { return t == DataTag::D3 || t == DataTag::D4; }
inline bool tag_has_h(DataTag t) {
  const int j = tag_index(t);
  return j == 1 || j == 3 || j == 5 || j == 7;
}
inline bool tag_has_beta(DataTag t) {
  const int j = tag_index(t);
  return j == 2 || j == 4 || j == 7 || j == 8;
}

struct SpectralDataSet {
  DataTag tag = DataTag::D1;
  std::optional<double> h;         ///< h = cot(beta) - cot(alpha)
  std::optional<double> cot_beta;  ///< beta is always Robin since beta < alpha <= pi
  BoundaryFunction modulus;        ///< |F_alpha| or |F_beta| on k > 0
  EigenSet eig_alpha;
  EigenSet eig_beta;  ///< for D3/D4 the known N_alpha-element subset

  /// Throws invalid-dataset unless the field pattern matches the tag.
  void validate() const {
    const std::string name = "D" + std::to_string(tag_index(tag));
    require(h.has_value() == tag_has_h(tag), ErrorKind::InvalidDataset, name + ": h presence mismatch");
    require(cot_beta.has_value() == tag_has_beta(tag), ErrorKind::InvalidDataset, name + ": beta presence mismatch");
    if (h) {
      require(std::isfinite(*h) && *h > 0.0, ErrorKind::InvalidDataset, name + ": h must be > 0");
    }
    if (cot_beta) require(std::isfinite(*cot_beta), ErrorKind::InvalidDataset, name + ": cot beta must be finite");
    require(modulus.size() > 0, ErrorKind::InvalidDataset, name + ": modulus missing");
    for (cplx v : modulus.values())
      require(std::isfinite(v.real()) && v.real() >= 0.0 && v.imag() == 0.0, ErrorKind::InvalidDataset,
              name + ": modulus must be real and nonnegative");
    const std::size_t na = eig_alpha.size();
    const std::size_t nb = eig_beta.size();
    if (tag_partial_beta(tag)) {
      require(nb == na, ErrorKind::InvalidDataset, name + ": partial beta set must have N_alpha elements");
    } else if (tag_plus_one(tag)) {
      require(nb == na + 1, ErrorKind::InvalidDataset, name + ": need N_beta = N_alpha + 1");
    } else {
      require(nb == na, ErrorKind::InvalidDataset, name + ": need N_beta = N_alpha");
    }
  }
};

}  // namespace sbm
