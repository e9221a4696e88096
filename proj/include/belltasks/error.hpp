#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace belltasks {

enum class ErrorKind {
  invalid_parameter,
  not_found,
  invalid_graph,
  infeasible_prior,
  invalid_behavior,
  unsupported_prior,
  strategy_mismatch,
  too_large,
  undefined_advantage,
  parse_error,
  solver_failure,
  unverified_entry,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::invalid_graph: return "invalid-graph";
    case ErrorKind::infeasible_prior: return "infeasible-prior";
    case ErrorKind::invalid_behavior: return "invalid-behavior";
    case ErrorKind::unsupported_prior: return "unsupported-prior";
    case ErrorKind::strategy_mismatch: return "strategy-mismatch";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::undefined_advantage: return "undefined-advantage";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::unverified_entry: return "unverified-entry";
  }
  return "unknown";
}

// Every failure raised by the library carries a kind so callers (and the CLI
// exit-code mapping) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace belltasks
