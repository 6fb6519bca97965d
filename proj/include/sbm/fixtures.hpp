#pragma once

// Closed forms of the two worked examples used for validation: a Robin pair
// (cot alpha = -8/5, cot beta = 17/5) and a Dirichlet/Robin pair (cot beta = 3),
// both with reflectionless-type rational Jost functions.

#include <cmath>
#include <vector>

#include "sbm/core.hpp"
#include "sbm/krein.hpp"

namespace sbm::fixtures {

struct Example {
  BoundaryParam alpha;
  BoundaryParam beta;
  EigenSet eig_alpha;
  EigenSet eig_beta;
  HalfPlaneFunction F_alpha;
  HalfPlaneFunction F_beta;
  double (*potential)(double);
  double g;    ///< g_alpha1
  double m;    ///< m_alpha1
  double tau;  ///< pole ordinate of the left reflection coefficient
  double c;    ///< its norming constant
};

/// V(x) = -288 e^{4x}/(9 + e^{4x})^2.
inline double example1_potential(double x) {
  const double e = std::exp(-4.0 * x);
  const double d = 9.0 * e + 1.0;
  return -288.0 * e / (d * d);
}

/// V(x) = (24a - 480a^2 + 720a^3 - 480a^4 + 600a^5)/(1 - 3a + 15a^2 - 5a^3)^2 with a = e^{-2x}.
inline double example2_potential(double x) {
  const double a = std::exp(-2.0 * x);
  const double d = 1.0 - 3.0 * a + 15.0 * a * a - 5.0 * a * a * a;
  const double n = a * (24.0 + a * (-480.0 + a * (720.0 + a * (-480.0 + 600.0 * a))));
  return n / (d * d);
}

inline Example example1() {
  Example e;
  e.alpha = BoundaryParam::robin(-8.0 / 5.0);
  e.beta = BoundaryParam::robin(17.0 / 5.0);
  e.eig_alpha = EigenSet{2.0};
  e.eig_beta = EigenSet{1.0, 4.0};
  e.F_alpha = HalfPlaneFunction::rational([](cplx k) { return k - 2.0 * kI; }, Parity::AntiConjugate);
  e.F_beta = HalfPlaneFunction::rational([](cplx k) { return (k - kI) * (k - 4.0 * kI) / (k + 2.0 * kI); },
                                         Parity::AntiConjugate);
  e.potential = example1_potential;
  e.g = std::sqrt(2.0 / 5.0);
  e.m = std::sqrt(40.0);
  e.tau = (4.0 + std::sqrt(34.0)) / 5.0;
  e.c = 3.0 / std::sqrt(5.0 * std::sqrt(34.0));
  return e;
}

/// Printed value of the reflection pole data for the second example.
inline constexpr double kExample2PrintedTau = 2.144441;
inline constexpr double kExample2PrintedC = 0.631182;

/// L(k) = -9i/(2k^3 + 5k + 9i) as printed for the second example.
inline HalfPlaneFunction example2_printed_reflection() {
  return HalfPlaneFunction::rational([](cplx k) { return -9.0 * kI / (2.0 * k * k * k + 5.0 * k + 9.0 * kI); },
                                     Parity::Conjugate);
}

/// L(k) = 3(k - 3i)/(2k^3 + 5k + 9i), the reflection coefficient of the closed-form Jost solution.
inline HalfPlaneFunction example2_reflection() {
  return HalfPlaneFunction::rational(
      [](cplx k) { return 3.0 * (k - 3.0 * kI) / (2.0 * k * k * k + 5.0 * k + 9.0 * kI); }, Parity::Conjugate);
}

inline Example example2() {
  Example e;
  e.alpha = BoundaryParam::dirichlet();
  e.beta = BoundaryParam::robin(3.0);
  e.eig_alpha = EigenSet{2.0};
  e.eig_beta = EigenSet{1.0, 3.0};
  e.F_alpha = HalfPlaneFunction::rational([](cplx k) { return (k - 2.0 * kI) / (k + kI); }, Parity::Conjugate);
  e.F_beta = HalfPlaneFunction::rational([](cplx k) { return (k - kI) * (k - 3.0 * kI) / (k + 2.0 * kI); },
                                         Parity::AntiConjugate);
  e.potential = example2_potential;
  e.g = std::sqrt(3.0);
  e.m = 4.0 * std::sqrt(3.0);
  // real root of 2 t^3 - 5 t - 9 = 0
  double t = 2.0;
  for (int i = 0; i < 50; ++i) t -= (2.0 * t * t * t - 5.0 * t - 9.0) / (6.0 * t * t - 5.0);
  e.tau = t;
  e.c = std::sqrt(3.0 * (3.0 - t) / (6.0 * t * t - 5.0));
  return e;
}

/// D3 data of the first example: h, |F_alpha|, kappa_alpha = {2} and the partial beta set {4}.
inline SpectralDataSet example1_d3(const KGrid& grid) {
  SpectralDataSet d;
  d.tag = DataTag::D3;
  d.h = 5.0;
  std::vector<double> mod(grid.size());
  for (std::size_t i = 0; i < mod.size(); ++i) mod[i] = std::sqrt(grid[i] * grid[i] + 4.0);
  d.modulus = BoundaryFunction::real_even(grid, std::move(mod));
  d.eig_alpha = EigenSet{2.0};
  d.eig_beta = EigenSet{4.0};
  return d;
}

/// xi of the second example: 1/2 + (1/pi) arg[(k-i)(k+i)(k-3i)/(k(k-2i)(k+2i))] on R+,
/// jumps at 1, 2, 3 on I+.
inline KreinShift example2_xi(const KGrid& grid) {
  KreinShift xi;
  xi.grid = grid;
  xi.real_axis.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx k(grid[i], 0.0);
    const cplx r = (k - kI) * (k + kI) * (k - 3.0 * kI) / (k * (k - 2.0 * kI) * (k + 2.0 * kI));
    xi.real_axis[i] = 0.5 + std::arg(r) / kPi;
  }
  xi.jumps = {{1.0, 1}, {2.0, 0}, {3.0, 1}};
  xi.value_near_zero = 0;
  xi.normalization = 0.5;
  return xi;
}

/// xi of the first example: (1/pi) arg[(k+2i)(k-2i)/((k-i)(k-4i))] on R+.
inline KreinShift example1_xi(const KGrid& grid) {
  const Example e = example1();
  return xi_from_jost(e.F_alpha, e.F_beta, e.alpha, e.beta, grid, e.eig_alpha, e.eig_beta);
}

}  // namespace sbm::fixtures
