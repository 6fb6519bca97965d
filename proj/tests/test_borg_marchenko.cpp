#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sbm/borg_marchenko.hpp"
#include "sbm/fixtures.hpp"
#include "sbm/forward.hpp"

using namespace sbm;

namespace {

const KGrid& grid() {
  static const KGrid g = make_kgrid(40.0, 4096);
  return g;
}

double max_rel_error(const HalfPlaneFunction& got, const HalfPlaneFunction& want, const KGrid& g = grid()) {
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); i += 13) {
    const cplx k(g[i], 0.0);
    e = std::max(e, std::abs(got(k) - want(k)) / std::abs(want(k)));
  }
  for (cplx k : {cplx(0.5, 0.5), cplx(-3.0, 1.5)}) e = std::max(e, std::abs(got(k) - want(k)) / std::abs(want(k)));
  return e;
}

SpectralDataSet from_example(const fixtures::Example& ex, DataTag tag, std::optional<std::size_t> drop = {},
                             const KGrid& g = grid()) {
  const Parity pa = parity_for(ex.alpha.kind);
  return make_dataset(tag, ex.F_alpha.sample(g, pa), ex.F_beta.sample(g, Parity::AntiConjugate), ex.alpha,
                      ex.beta, ex.eig_alpha, ex.eig_beta, drop);
}

void expect_recovers(const fixtures::Example& ex, const Recovery& r) {
  EXPECT_EQ(r.alpha.kind, ex.alpha.kind);
  if (!ex.alpha.is_dirichlet()) {
    EXPECT_NEAR(r.alpha.cot, ex.alpha.cot, 1e-3);
  }
  EXPECT_NEAR(r.beta.cot, ex.beta.cot, 1e-3);
  EXPECT_LE(max_rel_error(r.F_alpha, ex.F_alpha), 1e-3);
  EXPECT_LE(max_rel_error(r.F_beta, ex.F_beta), 1e-3);
}

}  // namespace

TEST(BorgMarchenko, Example1FromD3FindsMissingEigenvalue) {
  const fixtures::Example ex = fixtures::example1();
  const Recovery r = recover_from_dataset(fixtures::example1_d3(grid()));
  ASSERT_TRUE(r.missing_kappa.has_value());
  EXPECT_NEAR(*r.missing_kappa, 1.0, 1e-6);
  EXPECT_NEAR(r.h, 5.0, 1e-3);
  expect_recovers(ex, r);
}

TEST(BorgMarchenko, Example1FromD7) {
  const fixtures::Example ex = fixtures::example1();
  expect_recovers(ex, recover_from_dataset(from_example(ex, DataTag::D7)));
}

TEST(BorgMarchenko, Example2FromD4) {
  const fixtures::Example ex = fixtures::example2();
  const Recovery r = recover_from_dataset(from_example(ex, DataTag::D4, 1));
  ASSERT_TRUE(r.missing_kappa.has_value());
  EXPECT_NEAR(*r.missing_kappa, 3.0, 1e-5);
  expect_recovers(ex, r);
}

TEST(BorgMarchenko, Example2FromD8) {
  const fixtures::Example ex = fixtures::example2();
  expect_recovers(ex, recover_from_dataset(from_example(ex, DataTag::D8)));
}

TEST(BorgMarchenko, FreeDirichletPairFromD2AndD6) {
  // V = 0, alpha = pi, cot beta = -1: F_pi = 1, F_beta = k + i
  fixtures::Example ex;
  ex.alpha = BoundaryParam::dirichlet();
  ex.beta = BoundaryParam::robin(-1.0);
  ex.F_alpha = HalfPlaneFunction::constant(1.0);
  ex.F_beta = HalfPlaneFunction::rational([](cplx k) { return k + kI; }, Parity::AntiConjugate);
  for (DataTag tag : {DataTag::D2, DataTag::D6}) expect_recovers(ex, recover_from_dataset(from_example(ex, tag)));
}

TEST(BorgMarchenko, RobinPairOfAWellFromForwardData) {
  const oracle::Well w{2.5, 1.5, 2.0};
  const JostIntegrator integ(Potential::from_function(make_xgrid(10.0, 2001), w));
  const BoundaryParam a = BoundaryParam::robin(-0.5), b = BoundaryParam::robin(1.0);
  const EigenSet ea = bound_states(integ, a), eb = bound_states(integ, b);
  ASSERT_EQ(interlacing_check(ea, eb), Interlacing::PlusOne);
  fixtures::Example ex;
  ex.alpha = a;
  ex.beta = b;
  ex.F_alpha = jost_function(integ, a);
  ex.F_beta = jost_function(integ, b);
  ex.eig_alpha = ea;
  ex.eig_beta = eb;
  // Z(is) at large s and the outer function both need k_max well past the oscillatory
  // part of the Jost data of a compact well; at k_max = 40 cot and F are off by ~1e-2
  const KGrid fine = make_kgrid(80.0, 8192);
  for (DataTag tag : {DataTag::D3, DataTag::D7}) {
    std::optional<std::size_t> drop;
    if (tag_partial_beta(tag)) drop = 0;
    const Recovery r = recover_from_dataset(from_example(ex, tag, drop, fine));
    if (tag_partial_beta(tag)) {
      ASSERT_TRUE(r.missing_kappa.has_value());
      EXPECT_NEAR(*r.missing_kappa, eb[0], 1e-6);
    }
    EXPECT_NEAR(r.alpha.cot, a.cot, 1e-3) << "D" << tag_index(tag);
    EXPECT_NEAR(r.beta.cot, b.cot, 1e-3) << "D" << tag_index(tag);
    EXPECT_LE(max_rel_error(r.F_alpha, ex.F_alpha, fine), 1e-3) << "D" << tag_index(tag);
  }
}

TEST(BorgMarchenko, BoundaryDataOfExample1) {
  const fixtures::Example ex = fixtures::example1();
  // f(k, 0) and f'(k, 0) recombine into both Jost functions
  const cplx k(1.3, 0.2);
  const JostAtOrigin j = boundary_data_f(ex.F_alpha, ex.F_beta, ex.alpha, ex.beta, k);
  EXPECT_LT(std::abs(-kI * (j.fprime0 + ex.alpha.cot * j.f0) - ex.F_alpha(k)), 1e-12);
  EXPECT_LT(std::abs(-kI * (j.fprime0 + ex.beta.cot * j.f0) - ex.F_beta(k)), 1e-12);
}

TEST(BorgMarchenko, NormingConstantsFromJostFunctions) {
  const fixtures::Example e1 = fixtures::example1();
  const NormingConstants n1 = norming_from_jost(e1.F_alpha, e1.F_beta, 5.0, e1.eig_alpha, BoundaryKind::Robin);
  EXPECT_NEAR(n1.g[0], e1.g, 1e-8);
  EXPECT_NEAR(n1.m[0], e1.m, 1e-7);
  const fixtures::Example e2 = fixtures::example2();
  const NormingConstants n2 = norming_from_jost(e2.F_alpha, e2.F_beta, 1.0, e2.eig_alpha, BoundaryKind::Dirichlet);
  EXPECT_NEAR(n2.g[0], e2.g, 1e-8);
  EXPECT_NEAR(n2.m[0], e2.m, 1e-7);
}

TEST(BorgMarchenko, RejectsInconsistentData) {
  SpectralDataSet d = fixtures::example1_d3(grid());
  d.h.reset();
  EXPECT_THROW(d.validate(), Error);
  // the partial beta set of D3 holds exactly N_alpha values
  SpectralDataSet bad = fixtures::example1_d3(grid());
  bad.eig_beta = EigenSet{1.0, 4.0};
  try {
    recover_from_dataset(bad);
    FAIL() << "expected a failure";
  } catch (const Error& e) {
    EXPECT_FALSE(e.stage().empty());
  }
}
