#include <random>

#include <gtest/gtest.h>

#include "sbm/cauchy.hpp"
#include "sbm/fourier.hpp"

using namespace sbm;

namespace {

std::vector<cplx> lorentzian(const KGrid& g) {
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = 1.0 / (1.0 + g[i] * g[i]);
  return v;
}

// int_0^inf dt / ((1 + t^2)(t - z)) = -(log(-z) + pi z / 2) / (1 + z^2)
cplx half_line_exact(cplx z) { return -(std::log(-z) + kPi * z / 2.0) / (1.0 + z * z); }

}  // namespace

TEST(HalfLineCauchy, LorentzianInUpperHalfPlane) {
  const KGrid g = make_kgrid(200.0, 8192);
  const HalfLineCauchy c(g, lorentzian(g));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> re(-10.0, 10.0), im(0.01, 5.0);
  for (int i = 0; i < 20; ++i) {
    const cplx z(re(rng), im(rng));
    EXPECT_LT(std::abs(c(z) - half_line_exact(z)), 1e-7) << z;
  }
}

TEST(HalfLineCauchy, BoundaryLimitsFromBothSides) {
  const KGrid g = make_kgrid(200.0, 8192);
  const HalfLineCauchy c(g, lorentzian(g));
  for (double x : {0.3, 1.7, g[500]}) {
    const cplx above = c(cplx(x, 0.0), +1), below = c(cplx(x, 0.0), -1);
    // the jump across the support is 2 pi i g(x), up to interpolation error off the nodes
    EXPECT_NEAR(std::abs(above - below - 2.0 * kPi * kI / (1.0 + x * x)), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(above - half_line_exact(cplx(x, 1e-13))), 0.0, 1e-6);
  }
}

TEST(HalfLineCauchy, TailModelMattersForShortGrids) {
  const KGrid g = make_kgrid(20.0, 2048);
  const cplx z(0.5, 0.5);
  const double with_tail = std::abs(HalfLineCauchy(g, lorentzian(g), TailModel::EvenPowers)(z) - half_line_exact(z));
  const double without = std::abs(HalfLineCauchy(g, lorentzian(g), TailModel::None)(z) - half_line_exact(z));
  EXPECT_LT(with_tail, 1e-7);
  EXPECT_GT(without, 1e-4);
}

TEST(LineCauchy, EvenDataFullLine) {
  const KGrid g = make_kgrid(200.0, 8192);
  const LineCauchy c(g, lorentzian(g), +1, TailModel::EvenPowers);
  for (cplx z : {cplx(0.2, 0.3), cplx(-3.0, 1.0), cplx(0.0, 2.0)}) {
    // residues at i and z
    const cplx exact = kPi / (kI - z) + 2.0 * kPi * kI / (1.0 + z * z);
    EXPECT_LT(std::abs(c(z) - exact), 1e-7) << z;
  }
  EXPECT_THROW(c(cplx(0.0, -1.0)), Error);
}

TEST(Fourier, LorentzianTransform) {
  const KGrid g = make_kgrid(200.0, 8192);
  const ConjSymmetricFourier f(g, lorentzian(g));
  // (1/2pi) int_R e^{iks}/(1 + k^2) dk = e^{-|s|}/2
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) EXPECT_NEAR(f(s), std::exp(-s) / 2.0, 1e-6) << s;
}

TEST(Fourier, ExponentialIntegral) {
  EXPECT_NEAR(std::abs(detail::expint_n(1, cplx(1.0, 0.0)) - 0.21938393439552027), 0.0, 1e-12);
  // E_2(1) = e^{-1} - E_1(1)
  EXPECT_NEAR(std::abs(detail::expint_n(2, cplx(1.0, 0.0)) - (std::exp(-1.0) - 0.21938393439552027)), 0.0, 1e-12);
}
