#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "sbm/core.hpp"

using namespace sbm;

TEST(KGrid, ClusteredNearZeroAndEndsAtKmax) {
  const KGrid g = make_kgrid(40.0, 4096);
  EXPECT_EQ(g.size(), 4096u);
  EXPECT_DOUBLE_EQ(g.k_max(), 40.0);
  EXPECT_NEAR(g.k_min(), 40.0 * 1e-6, 1e-12);
  for (std::size_t i = 1; i < g.size(); ++i) ASSERT_GT(g[i], g[i - 1]);
  // uniform tail
  EXPECT_NEAR(g[4095] - g[4094], g[4000] - g[3999], 1e-9);
}

TEST(KGrid, RejectsBadArguments) {
  EXPECT_THROW(make_kgrid(-1.0, 100), Error);
  EXPECT_THROW(make_kgrid(10.0, 4), Error);
}

TEST(XGrid, UniformFromZero) {
  const XGrid x = make_xgrid(10.0, 2001);
  EXPECT_DOUBLE_EQ(x.dx(), 0.005);
  EXPECT_DOUBLE_EQ(x.x_max(), 10.0);
  EXPECT_THROW(XGrid({0.0, 1.0, 3.0}), Error);
  EXPECT_THROW(XGrid({0.5, 1.0}), Error);
}

TEST(Potential, InterpolatesAndVanishesOutside) {
  const Potential v = Potential::from_function(make_xgrid(5.0, 501), [](double x) { return std::exp(-x); });
  EXPECT_NEAR(v(0.123), std::exp(-0.123), 1e-8);
  EXPECT_EQ(v(6.0), 0.0);
  EXPECT_EQ(v(-1.0), 0.0);
  EXPECT_NEAR(v.min_value(), std::exp(-5.0), 1e-15);
}

TEST(Simpson, CubicsBothParities) {
  // exact for odd counts; the closing interval of an even count is exact for quadratics only
  for (std::size_t n : {101u, 100u}) {
    const double dx = 1.0 / static_cast<double>(n - 1);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = dx * static_cast<double>(i);
      f[i] = x * x * x - 2.0 * x;
    }
    EXPECT_NEAR(simpson(f, dx), 0.25 - 1.0, n % 2 ? 1e-13 : 1e-7) << n;
  }
}

TEST(Potential, FaddeevMoment) {
  const Potential v = Potential::from_function(make_xgrid(40.0, 8001), [](double x) { return -std::exp(-x); });
  // int (1+x) e^{-x} = 2
  EXPECT_NEAR(faddeev_moment(v), 2.0, 1e-8);
}

TEST(BoundaryFunction, ParityExtension) {
  const KGrid g = make_kgrid(10.0, 256);
  const auto anti = BoundaryFunction::from_function(g, [](double k) { return cplx(k, -2.0); }, Parity::AntiConjugate);
  const auto conj = BoundaryFunction::from_function(g, [](double k) { return cplx(1.0, 1.0 / (1.0 + k)); },
                                                    Parity::Conjugate);
  const double k = g[100];
  EXPECT_EQ(anti(-k), -std::conj(anti(k)));
  EXPECT_EQ(conj(-k), std::conj(conj(k)));
  // k - 2i is anti-conjugate, so the extension reproduces it
  EXPECT_NEAR(std::abs(anti(-k) - cplx(-k, -2.0)), 0.0, 1e-14);
  EXPECT_THROW(anti(11.0), Error);
}

TEST(EigenSet, StrictlyIncreasingPositive) {
  EXPECT_NO_THROW(EigenSet({1.0, 2.0}));
  EXPECT_THROW(EigenSet({2.0, 1.0}), Error);
  EXPECT_THROW(EigenSet({0.0}), Error);
  const EigenSet e = EigenSet{1.0, 4.0}.with(2.0);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[1], 2.0);
}

TEST(Blaschke, UnimodularOnRealAxisAndZeros) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> kap(0.1, 5.0), re(-50.0, 50.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> k{kap(rng), kap(rng), kap(rng)};
    std::sort(k.begin(), k.end());
    const EigenSet set(k);
    for (int i = 0; i < 20; ++i) {
      const cplx z(re(rng), 0.0);
      EXPECT_NEAR(std::abs(blaschke(z, set)), 1.0, 1e-12);
      EXPECT_NEAR(std::abs(blaschke(z, set, BlaschkeOrientation::PolesAtIKappa)), 1.0, 1e-12);
    }
    EXPECT_NEAR(std::abs(blaschke(cplx(0.0, k[1]), set)), 0.0, 1e-14);
  }
}

TEST(HalfPlaneFunction, RejectsLowerHalfPlaneAndUsesCache) {
  const auto f = HalfPlaneFunction::rational([](cplx k) { return k - 2.0 * kI; }, Parity::AntiConjugate);
  EXPECT_THROW(f(cplx(1.0, -0.5)), Error);
  const KGrid g = make_kgrid(5.0, 64);
  const auto c = f.cached(g);
  ASSERT_NE(c.boundary_cache(), nullptr);
  EXPECT_EQ(c(cplx(g[10], 0.0)), f(cplx(g[10], 0.0)));
  EXPECT_EQ(c(cplx(-g[10], 0.0)), f(cplx(-g[10], 0.0)));
}

TEST(DataTags, Predicates) {
  EXPECT_TRUE(tag_dirichlet(DataTag::D2));
  EXPECT_FALSE(tag_dirichlet(DataTag::D3));
  EXPECT_TRUE(tag_partial_beta(DataTag::D4));
  EXPECT_TRUE(tag_has_h(DataTag::D7));
  EXPECT_FALSE(tag_has_h(DataTag::D2));
  EXPECT_TRUE(tag_has_beta(DataTag::D8));
  EXPECT_TRUE(tag_plus_one(DataTag::D3));
  EXPECT_FALSE(tag_plus_one(DataTag::D5));
}

TEST(SpectralDataSet, ValidateRejectsWrongFieldPattern) {
  const KGrid g = make_kgrid(10.0, 64);
  SpectralDataSet d;
  d.tag = DataTag::D1;
  d.modulus = BoundaryFunction::real_even(g, std::vector<double>(g.size(), 1.0));
  d.h = 1.0;
  EXPECT_NO_THROW(d.validate());
  d.cot_beta = 2.0;
  EXPECT_THROW(d.validate(), Error);
  d.cot_beta.reset();
  d.h = -1.0;
  EXPECT_THROW(d.validate(), Error);
}

TEST(Errors, StageLabelIsKeptFromInnermost) {
  try {
    with_stage("outer", [] { return with_stage("inner", []() -> int { fail(ErrorKind::RootFailure, "x"); }); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "inner");
    EXPECT_EQ(e.kind(), ErrorKind::RootFailure);
  }
}

TEST(Parallel, PropagatesFirstErrorAndHonoursCap) {
  setenv("SPECTRAL_BM_THREADS", "1", 1);
  EXPECT_EQ(worker_count(), 1u);
  unsetenv("SPECTRAL_BM_THREADS");
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] = 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 100);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 3) fail(ErrorKind::InvalidData, "boom");
               }),
               Error);
}
