#pragma once

// Glue from a recovered pair of Jost functions to the input data of the three
// inversion methods and to the reconstructed potential.

#include <optional>
#include <string>

#include "sbm/borg_marchenko.hpp"
#include "sbm/forward.hpp"
#include "sbm/inversion.hpp"
#include "sbm/krein.hpp"

namespace sbm {

enum class InversionMethod { GelfandLevitan, Marchenko, FaddeevMarchenko };

inline InversionMethod parse_method(const std::string& s) {
  if (s == "gl") return InversionMethod::GelfandLevitan;
  if (s == "marchenko") return InversionMethod::Marchenko;
  if (s == "fm") return InversionMethod::FaddeevMarchenko;
  fail(ErrorKind::InvalidArgument, "unknown inversion method '" + s + "' (gl, marchenko, fm)");
}

/// A pair beta < alpha with both Jost functions on the closed upper half plane.
struct JostModel {
  BoundaryParam alpha;
  BoundaryParam beta;
  HalfPlaneFunction F_alpha;
  HalfPlaneFunction F_beta;
  EigenSet eig_alpha;
  EigenSet eig_beta;
  KGrid grid;

  double h() const { return beta.cot - alpha.cot; }
};

// Numeric Jost functions are sampled once on the grid; later grid-point evaluations hit the cache.
inline JostModel model_from(const Recovery& r) {
  return {r.alpha,     r.beta,     r.F_alpha.cached(r.grid), r.F_beta.cached(r.grid),
          r.eig_alpha, r.eig_beta, r.grid};
}

inline JostModel model_from(const KreinRecovery& r, const KGrid& grid) {
  return {r.alpha,           r.beta,           r.F_alpha.cached(grid), r.F_beta.cached(grid),
          r.eigs.eig_alpha, r.eigs.eig_beta, grid};
}

/// Jost functions of a sampled potential for the pair (alpha, beta).
inline JostModel model_from(const JostIntegrator& integ, const BoundaryParam& alpha, const BoundaryParam& beta,
                            const KGrid& grid) {
  JostModel m;
  m.alpha = alpha;
  m.beta = beta;
  m.F_alpha = jost_function(integ, alpha);
  m.F_beta = jost_function(integ, beta);
  m.eig_alpha = bound_states(integ, alpha);
  m.eig_beta = bound_states(integ, beta);
  m.grid = grid;
  return m;
}

inline NormingConstants norming(const JostModel& m) {
  return norming_from_jost(m.F_alpha, m.F_beta, m.alpha.is_dirichlet() ? 1.0 : m.h(), m.eig_alpha, m.alpha.kind);
}

inline GLData gl_data(const JostModel& m) {
  const BoundaryFunction F = m.F_alpha.sample(m.grid, parity_for(m.alpha.kind));
  return {BoundaryFunction::real_even(m.grid, F.abs_values()), m.eig_alpha, norming(m).g};
}

inline MarchenkoData marchenko_data(const JostModel& m) {
  const BoundaryFunction F = m.F_alpha.sample(m.grid, parity_for(m.alpha.kind));
  return {scattering_matrix(F, m.alpha.kind), m.eig_alpha, norming(m).m};
}

inline FMData fm_data(const JostModel& m) {
  const ReflectionData r = reflection_coefficient(m.F_alpha, m.F_beta, m.alpha, m.beta, m.grid);
  const FMDiscrete d = fm_discrete_data(r, m.grid.k_max());
  return {r.on_grid, d.taus, d.c};
}

inline Potential reconstruct_potential(const JostModel& m, InversionMethod method, InversionOptions opt = {}) {
  switch (method) {
    case InversionMethod::GelfandLevitan:
      return gl_invert(gl_kernel(with_stage("gl_data", [&] { return gl_data(m); }), m.alpha.kind, opt));
    case InversionMethod::Marchenko:
      return marchenko_invert(
          marchenko_kernel(with_stage("marchenko_data", [&] { return marchenko_data(m); }), m.alpha.kind, opt));
    case InversionMethod::FaddeevMarchenko:
      return fm_invert(fm_kernel(with_stage("fm_data", [&] { return fm_data(m); }), opt));
  }
  fail(ErrorKind::InvalidArgument, "reconstruct_potential: unknown method");
}

/// max |V(x_i) - W(x_i)| over the nodes of v's grid with x_i <= x_max.
template <class W>
double sup_error(const Potential& v, W&& w, double x_max = 4.0) {
  double e = 0.0;
  for (std::size_t i = 0; i < v.grid().size(); ++i) {
    if (v.grid()[i] > x_max + 1e-12) break;
    e = std::max(e, std::abs(v.values()[i] - w(v.grid()[i])));
  }
  return e;
}

}  // namespace sbm
