#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbm {

enum class ErrorKind {
  InvalidArgument,
  OutOfRange,
  OutOfDomain,
  SingularPoint,
  InvalidData,
  IntegrationFailure,
  RootFailure,
  DegenerateState,
  ZeroCrossing,
  InterlacingViolation,
  InvalidModulus,
  InvalidDataset,
  NotInClass,
  RecoveryFailure,
  AsymptoticsFailure,
  ConsistencyFailure,
  InvalidXi,
  ReductionFailure,
  SolverFailure,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::InvalidData: return "invalid-data";
    case ErrorKind::IntegrationFailure: return "integration-failure";
    case ErrorKind::RootFailure: return "root-failure";
    case ErrorKind::DegenerateState: return "degenerate-state";
    case ErrorKind::ZeroCrossing: return "zero-crossing";
    case ErrorKind::InterlacingViolation: return "interlacing-violation";
    case ErrorKind::InvalidModulus: return "invalid-modulus";
    case ErrorKind::InvalidDataset: return "invalid-dataset";
    case ErrorKind::NotInClass: return "not-in-class";
    case ErrorKind::RecoveryFailure: return "recovery-failure";
    case ErrorKind::AsymptoticsFailure: return "asymptotics-failure";
    case ErrorKind::ConsistencyFailure: return "consistency-failure";
    case ErrorKind::InvalidXi: return "invalid-xi";
    case ErrorKind::ReductionFailure: return "reduction-failure";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::ParseError: return "parse-error";
  }
  return "unknown";
}

/// Every failure raised by the library. `stage` names the pipeline step
/// when an error is propagated through a multi-stage recovery.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::string stage = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

  Error with_stage(std::string stage) const {
    Error copy = *this;
    copy.stage_ = std::move(stage);
    return copy;
  }

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

/// Runs fn, labelling any unlabelled Error with `stage`.
template <class Fn>
auto with_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

}  // namespace sbm
