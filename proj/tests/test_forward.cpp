#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sbm/fixtures.hpp"
#include "sbm/forward.hpp"

using namespace sbm;

namespace {

const KGrid& grid() {
  static const KGrid g = make_kgrid(40.0, 4096);
  return g;
}

Potential sampled(double (*f)(double)) { return Potential::from_function(make_xgrid(10.0, 2001), f); }

}  // namespace

TEST(Forward, FreeDirichletIsOne) {
  const Potential v = Potential::zero(make_xgrid(10.0, 2001));
  const ForwardSummary s = forward_summary(v, BoundaryParam::dirichlet(), grid());
  for (cplx f : s.F.values()) ASSERT_NEAR(std::abs(f - 1.0), 0.0, 1e-12);
  EXPECT_TRUE(s.eigs.empty());
  EXPECT_EQ(s.d_flag, 0);
}

TEST(Forward, FreeRobin) {
  const Potential v = Potential::zero(make_xgrid(10.0, 2001));
  // F = k - i cot(alpha), which binds at kappa = cot(alpha) when cot(alpha) > 0
  const BoundaryParam bc = BoundaryParam::robin(-0.7);
  for (double k : {0.1, 1.0, 7.5}) EXPECT_NEAR(std::abs(jost_function(v, bc, cplx(k, 0.0)) - cplx(k, 0.7)), 0.0, 1e-10);
  const EigenSet e = bound_states(v, BoundaryParam::robin(0.7));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(e[0], 0.7, 1e-10);
  EXPECT_TRUE(bound_states(v, bc).empty());
}

TEST(Forward, Example1JostBoundStateAndNorming) {
  const fixtures::Example ex = fixtures::example1();
  const JostIntegrator integ(sampled(ex.potential));
  for (double k : {0.01, 0.5, 2.0, 10.0, 35.0}) {
    const cplx z(k, 0.0);
    EXPECT_LT(std::abs(jost_function(integ, ex.alpha, z) - ex.F_alpha(z)) / std::abs(ex.F_alpha(z)), 1e-6) << k;
    EXPECT_LT(std::abs(jost_function(integ, ex.beta, z) - ex.F_beta(z)) / std::abs(ex.F_beta(z)), 1e-6) << k;
  }
  const EigenSet ea = bound_states(integ, ex.alpha);
  ASSERT_EQ(ea.size(), 1u);
  EXPECT_NEAR(ea[0], 2.0, 1e-8);
  const EigenSet eb = bound_states(integ, ex.beta);
  ASSERT_EQ(eb.size(), 2u);
  EXPECT_NEAR(eb[0], 1.0, 1e-8);
  EXPECT_NEAR(eb[1], 4.0, 1e-8);
  const NormingConstants nc = norming_constants(integ, ex.alpha, ea);
  EXPECT_NEAR(nc.g[0], ex.g, 1e-5);
  EXPECT_NEAR(nc.m[0], ex.m, 1e-4);
  EXPECT_EQ(interlacing_check(ea, eb), Interlacing::PlusOne);
}

TEST(Forward, Example2DirichletAndLevinson) {
  const fixtures::Example ex = fixtures::example2();
  const ForwardSummary s = forward_summary(sampled(ex.potential), ex.alpha, grid());
  ASSERT_EQ(s.eigs.size(), 1u);
  EXPECT_NEAR(s.eigs[0], 2.0, 1e-8);
  EXPECT_NEAR(s.g[0], ex.g, 1e-4);
  EXPECT_NEAR(s.m[0], ex.m, 1e-3);
  const LevinsonReport lr = levinson_report(s.phase, s.eigs.size(), s.d_flag, BoundaryKind::Dirichlet);
  EXPECT_NEAR(lr.phi0, kPi, 1e-2);
  EXPECT_NEAR(lr.residual, 0.0, 1e-2);
}

TEST(Forward, ScatteringMatrixUnimodularAndConjugateSymmetric) {
  const fixtures::Example ex = fixtures::example1();
  const ForwardSummary s = forward_summary(sampled(ex.potential), ex.alpha, grid());
  const BoundaryFunction S = scattering_matrix(s.F, BoundaryKind::Robin);
  for (std::size_t i = 0; i < S.size(); i += 17) {
    const double k = S.grid()[i];
    EXPECT_NEAR(std::abs(S(k)), 1.0, 1e-10);
    EXPECT_NEAR(std::abs(S(-k) - std::conj(S(k))), 0.0, 1e-12);
  }
}

TEST(Forward, JostParityOnRandomWells) {
  for (const oracle::Well& w : oracle::random_wells(4, 21)) {
    const JostIntegrator integ(Potential::from_function(make_xgrid(6.0, 1201), w));
    for (const BoundaryParam& bc : {BoundaryParam::dirichlet(), BoundaryParam::robin(0.4)}) {
      for (double k : {0.3, 2.0, 9.0}) {
        const cplx plus = jost_function(integ, bc, cplx(k, 0.0));
        const cplx minus = jost_function(integ, bc, cplx(-k, 0.0));
        const cplx expected = bc.is_dirichlet() ? std::conj(plus) : -std::conj(plus);
        EXPECT_NEAR(std::abs(minus - expected), 0.0, 1e-9 * (1.0 + std::abs(plus)));
      }
    }
  }
}

TEST(Forward, BoundStateCountMatchesFiniteDifferenceOracle) {
  for (const oracle::Well& w : oracle::random_wells(10, 5)) {
    const Potential v = Potential::from_function(make_xgrid(6.0, 1201), w);
    for (const BoundaryParam& bc : {BoundaryParam::dirichlet(), BoundaryParam::robin(-1.0), BoundaryParam::robin(1.0)}) {
      const EigenSet e = bound_states(v, bc);
      EXPECT_EQ(static_cast<int>(e.size()), oracle::fd_bound_state_count(v, bc))
          << "depth " << w.depth << " width " << w.width;
    }
  }
}

TEST(Forward, InterlacingOnRandomWells) {
  for (const oracle::Well& w : oracle::random_wells(10, 9)) {
    const JostIntegrator integ(Potential::from_function(make_xgrid(6.0, 1201), w));
    const EigenSet pi = bound_states(integ, BoundaryParam::dirichlet());
    const EigenSet a = bound_states(integ, BoundaryParam::robin(-0.5));
    const EigenSet b = bound_states(integ, BoundaryParam::robin(1.5));
    EXPECT_NO_THROW(interlacing_check(pi, b));
    EXPECT_NO_THROW(interlacing_check(a, b));
    EXPECT_NO_THROW(interlacing_check(pi, a));
  }
}

TEST(Forward, SpectralMeasureMasses) {
  const fixtures::Example ex = fixtures::example1();
  const ForwardSummary s = forward_summary(sampled(ex.potential), ex.alpha, grid());
  const SpectralMeasure m = spectral_measure(s.F, s.eigs, s.g);
  ASSERT_EQ(m.masses.size(), 1u);
  EXPECT_NEAR(m.masses[0].first, -4.0, 1e-7);
  EXPECT_NEAR(m.masses[0].second, 0.4, 1e-5);
  // density k/(pi (k^2 + 4))
  EXPECT_NEAR(m.density[3000], std::sqrt(m.lambda[3000]) / (kPi * (m.lambda[3000] + 4.0)), 1e-8);
}

TEST(Forward, NonFinitePotentialRejected) {
  std::vector<double> v(11, 0.0);
  v[3] = std::nan("");
  EXPECT_THROW(JostIntegrator(Potential(make_xgrid(1.0, 11), v)), Error);
}
