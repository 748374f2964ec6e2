#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace radsob {

/// Failure categories shared by every module. The CLI maps them onto exit codes.
enum class ErrorKind {
  domain,            // argument outside the operation's domain
  non_convergent,    // quadrature subdivision budget exhausted
  no_sign_change,    // root bracket without a sign change
  step_failure,      // ODE step size underflow
  max_steps,         // ODE step budget exhausted
  divergent,         // an integral on (0, inf) does not converge
  tail_divergent,    // transform tail integral does not converge
  zero_profile,      // quotient of an identically vanishing profile
  curvature_hypothesis_failed,
  range,             // query outside a tabulated range
  not_monotone,
  inversion_failure,
  parse,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "DomainError";
    case ErrorKind::non_convergent: return "NonConvergent";
    case ErrorKind::no_sign_change: return "NoSignChange";
    case ErrorKind::step_failure: return "StepFailure";
    case ErrorKind::max_steps: return "MaxSteps";
    case ErrorKind::divergent: return "Divergent";
    case ErrorKind::tail_divergent: return "TailDivergent";
    case ErrorKind::zero_profile: return "ZeroProfile";
    case ErrorKind::curvature_hypothesis_failed: return "CurvatureHypothesisFailed";
    case ErrorKind::range: return "RangeError";
    case ErrorKind::not_monotone: return "NotMonotone";
    case ErrorKind::inversion_failure: return "InversionFailure";
    case ErrorKind::parse: return "ParseError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace radsob
