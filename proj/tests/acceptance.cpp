// Acceptance run: one PASS/FAIL line per criterion, exit code = number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sbm/fixtures.hpp"
#include "sbm/pipeline.hpp"

using namespace sbm;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream notes;

  void expect(bool ok, const std::string& what, double value) {
    if (!ok) pass = false;
    notes << (ok ? "" : "!") << what << "=" << value << " ";
  }
  void expect_le(const std::string& what, double value, double tol) { expect(value <= tol, what, value); }
  void report(const std::string& what, double value) { notes << what << "=" << value << " "; }
};

const KGrid& grid() {
  static const KGrid g = make_kgrid(40.0, 4096);
  return g;
}

double max_rel_error(const HalfPlaneFunction& got, const HalfPlaneFunction& want) {
  double e = 0.0;
  for (std::size_t i = 0; i < grid().size(); i += 13) {
    const cplx k(grid()[i], 0.0);
    e = std::max(e, std::abs(got(k) - want(k)) / std::abs(want(k)));
  }
  return e;
}

constexpr InversionMethod kMethods[] = {InversionMethod::GelfandLevitan, InversionMethod::Marchenko,
                                        InversionMethod::FaddeevMarchenko};
const char* method_name(InversionMethod m) {
  switch (m) {
    case InversionMethod::GelfandLevitan: return "gl";
    case InversionMethod::Marchenko: return "marchenko";
    case InversionMethod::FaddeevMarchenko: return "fm";
  }
  return "?";
}

Check example1_from_d3() {
  Check c;
  const fixtures::Example ex = fixtures::example1();
  const Recovery r = recover_from_dataset(fixtures::example1_d3(grid()));
  c.expect_le("kappa_beta1_err", std::abs(r.missing_kappa.value_or(0.0) - 1.0), 1e-6);
  c.expect_le("cot_alpha_err", std::abs(r.alpha.cot - ex.alpha.cot), 1e-3);
  c.expect_le("cot_beta_err", std::abs(r.beta.cot - ex.beta.cot), 1e-3);
  c.expect_le("F_alpha_rel", max_rel_error(r.F_alpha, ex.F_alpha), 1e-3);
  c.expect_le("F_beta_rel", max_rel_error(r.F_beta, ex.F_beta), 1e-3);
  const Potential v = reconstruct_potential(model_from(r), InversionMethod::GelfandLevitan);
  c.expect_le("V_sup", sup_error(v, ex.potential), 5e-2);
  return c;
}

Check example2_from_xi() {
  Check c;
  const fixtures::Example ex = fixtures::example2();
  const KreinRecovery r = recover_from_xi(fixtures::example2_xi(grid()));
  c.expect(r.alpha.is_dirichlet(), "dirichlet", r.alpha.is_dirichlet());
  const bool sets = r.eigs.eig_alpha.size() == 1 && r.eigs.eig_alpha[0] == 2.0 && r.eigs.eig_beta.size() == 2 &&
                    r.eigs.eig_beta[0] == 1.0 && r.eigs.eig_beta[1] == 3.0;
  c.expect(sets, "kappa_sets_exact", sets);
  c.expect_le("cot_beta_err", std::abs(r.beta.cot - 3.0), 1e-3);
  c.expect_le("F_pi_rel", max_rel_error(r.F_alpha, ex.F_alpha), 1e-3);
  const JostModel m = model_from(r, grid());
  const NormingConstants n = norming(m);
  c.expect_le("g_pi1_err", std::abs(n.g.at(0) - std::sqrt(3.0)), 1e-3);
  c.expect_le("m_pi1_err", std::abs(n.m.at(0) - 4.0 * std::sqrt(3.0)), 1e-3);
  const FMData fm = fm_data(m);
  c.report("c_r1", fm.c.at(0));
  c.expect_le("c_r1_err", std::abs(fm.c.at(0) - fixtures::kExample2PrintedC), 1e-3);
  const Potential v = reconstruct_potential(m, InversionMethod::GelfandLevitan);
  c.expect_le("V_sup", sup_error(v, ex.potential), 5e-2);
  return c;
}

Check cross_method_agreement() {
  Check c;
  const fixtures::Example ex = fixtures::example1();
  const JostModel m{ex.alpha, ex.beta, ex.F_alpha, ex.F_beta, ex.eig_alpha, ex.eig_beta, grid()};
  std::vector<Potential> vs;
  for (InversionMethod method : kMethods) vs.push_back(reconstruct_potential(m, method));
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b)
      c.expect_le(std::string(method_name(kMethods[a])) + "_vs_" + method_name(kMethods[b]),
                  sup_error(vs[a], vs[b]), 5e-2);
  return c;
}

Check random_well_round_trips() {
  Check c;
  const BoundaryParam pi = BoundaryParam::dirichlet();
  const std::vector<BoundaryParam> alphas{BoundaryParam::robin(-0.5), BoundaryParam::robin(0.5)};
  const std::vector<BoundaryParam> betas{BoundaryParam::robin(1.0), BoundaryParam::robin(2.5)};
  // wells of width ~1 carry spectral weight past k = 40; a 40-cut leaves up to 7e-2 of ringing
  const KGrid fine = make_kgrid(80.0, 8192);
  double worst_v = 0.0;
  int count_mismatch = 0, interlacing_failures = 0;
  for (const oracle::Well& w : oracle::random_wells(10, 2024)) {
    const Potential v = Potential::from_function(make_xgrid(10.0, 2001), w);
    const JostIntegrator integ(v);
    for (const BoundaryParam& bc : {pi, alphas[0], alphas[1], betas[0], betas[1]})
      count_mismatch += bound_states(integ, bc).size() != static_cast<std::size_t>(oracle::fd_bound_state_count(v, bc));
    for (const BoundaryParam& b : betas) {
      for (const BoundaryParam& a : {pi, alphas[0], alphas[1]}) {
        try {
          interlacing_check(bound_states(integ, a), bound_states(integ, b));
        } catch (const Error&) {
          ++interlacing_failures;
        }
      }
    }
    // Robin pair through all three equations, Dirichlet pair through GL
    const JostModel robin = model_from(integ, alphas[0], betas[0], fine);
    for (InversionMethod method : kMethods)
      worst_v = std::max(worst_v, sup_error(reconstruct_potential(robin, method), w));
    const JostModel dir = model_from(integ, pi, betas[0], fine);
    worst_v = std::max(worst_v, sup_error(reconstruct_potential(dir, InversionMethod::GelfandLevitan), w));
  }
  c.expect_le("V_sup_worst", worst_v, 5e-2);
  c.expect(count_mismatch == 0, "fd_count_mismatches", count_mismatch);
  c.expect(interlacing_failures == 0, "interlacing_failures", interlacing_failures);
  return c;
}

Check analytic_engine() {
  Check c;
  const KGrid g = make_kgrid(200.0, 8192);
  std::vector<double> re(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) re[i] = 1.0 / (1.0 + g[i] * g[i]);
  const HalfPlaneFunction f = schwarz_reconstruct(g, re);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> x(-20.0, 20.0), y(0.0, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const cplx z(x(rng), y(rng));
    worst = std::max(worst, std::abs(f(z) - kI / (z + kI)));
  }
  c.expect_le("schwarz_max_err", worst, 1e-6);

  auto moduli = [](const HalfPlaneFunction& F) {
    std::vector<double> m(grid().size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(F(cplx(grid()[i], 0.0)));
    return m;
  };
  const fixtures::Example e1 = fixtures::example1(), e2 = fixtures::example2();
  c.expect_le("outer_F_alpha",
              max_rel_error(outer_from_modulus(grid(), moduli(e1.F_alpha), e1.eig_alpha, BoundaryKind::Robin),
                            e1.F_alpha),
              1e-4);
  c.expect_le("outer_F_beta",
              max_rel_error(outer_from_modulus(grid(), moduli(e1.F_beta), e1.eig_beta, BoundaryKind::Robin),
                            e1.F_beta),
              1e-4);
  c.expect_le("outer_F_pi",
              max_rel_error(outer_from_modulus(grid(), moduli(e2.F_alpha), e2.eig_alpha, BoundaryKind::Dirichlet),
                            e2.F_alpha),
              1e-4);
  return c;
}

Check property_suite() {
  Check c;
  const KGrid g = make_kgrid(40.0, 1024);
  const BoundaryParam pi = BoundaryParam::dirichlet(), a = BoundaryParam::robin(-0.5), b = BoundaryParam::robin(1.0);
  double parity = 0.0, unimodular = 0.0, symmetry = 0.0;
  int xi_outside = 0, reduced_nonzero = 0;
  for (const oracle::Well& w : oracle::random_wells(6, 77)) {
    const JostIntegrator integ(Potential::from_function(make_xgrid(8.0, 1601), w));
    for (const BoundaryParam& bc : {pi, a, b}) {
      for (double k : {0.3, 2.0, 9.0}) {
        const cplx plus = jost_function(integ, bc, cplx(k, 0.0)), minus = jost_function(integ, bc, cplx(-k, 0.0));
        const cplx expected = bc.is_dirichlet() ? std::conj(plus) : -std::conj(plus);
        parity = std::max(parity, std::abs(minus - expected) / (1.0 + std::abs(plus)));
      }
      const ForwardSummary s = forward_summary(integ, bc, g);
      const BoundaryFunction S = scattering_matrix(s.F, bc.kind);
      for (cplx v : S.values()) unimodular = std::max(unimodular, std::abs(std::abs(v) - 1.0));
    }
    for (const BoundaryParam& alpha : {pi, a}) {
      const EigenSet ea = bound_states(integ, alpha), eb = bound_states(integ, b);
      const KreinShift xi = xi_from_jost(jost_function(integ, alpha), jost_function(integ, b), alpha, b, g, ea, eb);
      for (double v : xi.real_axis) xi_outside += !(v > 0.0 && v < 1.0);
      for (double om = 0.01; om < 8.0; om += 0.013) {
        bool on_jump = false;
        for (const auto& j : xi.jumps) on_jump |= std::abs(j.first - om) < 1e-9;
        if (on_jump) continue;
        reduced_nonzero += detail::xi_closed_form_on_imaginary_axis(om, ea, eb, alpha.kind) != xi.on_imaginary_axis(om);
      }
      const JostModel m = model_from(integ, alpha, b, g);
      const Kernel2D ker = gl_kernel(gl_data(m), alpha.kind);
      for (std::size_t i = 0; i < ker.x.size(); i += 5)
        for (std::size_t j = 0; j < ker.x.size(); j += 7) symmetry = std::max(symmetry, std::abs(ker.gl(i, j) - ker.gl(j, i)));
    }
  }
  c.expect_le("parity", parity, 1e-9);
  c.expect_le("S_unimodular", unimodular, 1e-10);
  c.expect(xi_outside == 0, "xi_outside_0_1", xi_outside);
  c.expect(reduced_nonzero == 0, "xi0_nonzero_on_I+", reduced_nonzero);
  c.expect_le("gl_symmetry", symmetry, 1e-9);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> kap(0.1, 5.0), re(-50.0, 50.0);
  double blaschke_dev = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> k{kap(rng), kap(rng), kap(rng)};
    std::sort(k.begin(), k.end());
    const EigenSet set(k);
    for (int i = 0; i < 20; ++i) blaschke_dev = std::max(blaschke_dev, std::abs(std::abs(blaschke(cplx(re(rng), 0.0), set)) - 1.0));
  }
  c.expect_le("blaschke", blaschke_dev, 1e-12);

  const fixtures::Example e2 = fixtures::example2(), e1 = fixtures::example1();
  const ForwardSummary s2 = forward_summary(Potential::from_function(make_xgrid(10.0, 2001), e2.potential), e2.alpha, grid());
  const LevinsonReport l2 = levinson_report(s2.phase, s2.eigs.size(), s2.d_flag, BoundaryKind::Dirichlet);
  c.expect_le("levinson_dirichlet_residual", std::abs(l2.residual), 1e-2);
  const ForwardSummary s1 = forward_summary(Potential::from_function(make_xgrid(10.0, 2001), e1.potential), e1.alpha, grid());
  const LevinsonReport l1 = levinson_report(s1.phase, s1.eigs.size(), s1.d_flag, BoundaryKind::Robin);
  c.report("levinson_robin_residual(reported)", l1.residual);
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"example 1 end-to-end from D3", example1_from_d3},
      {"example 2 end-to-end from xi", example2_from_xi},
      {"cross-method agreement", cross_method_agreement},
      {"random-well round trips", random_well_round_trips},
      {"analytic engine oracle", analytic_engine},
      {"property suite", property_suite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.pass = false;
      c.notes << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // the two worked examples also carry a 60 s budget
    if (i < 2 && secs > 60.0) {
      c.pass = false;
      c.notes << "!over_60s ";
    }
    if (!c.pass) ++failures;
    std::printf("criterion %zu: %s  %s (%.1fs) %s\n", i + 1, c.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                secs, c.notes.str().c_str());
    std::fflush(stdout);
  }
  return failures;
}
