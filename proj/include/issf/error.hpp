#pragma once

#include <stdexcept>
#include <string>

namespace issf {

/// Failure categories. Each maps onto one CLI exit code.
enum class ErrorKind {
  Domain,       ///< argument outside a function's domain
  Range,        ///< value outside a function's range
  Shape,        ///< vector/matrix dimension mismatch
  Margin,       ///< disturbance margin exceeds the admissible bound
  Usage,        ///< API used against its preconditions
  Certificate,  ///< barrier/Lyapunov certificate violated at a state
  Infeasible,   ///< quadratic program has no feasible point
  Numerics,     ///< non-finite values or runaway integration
  Config,       ///< malformed configuration or CLI input
  Io,           ///< file system failure
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for a failure category (0 is reserved for success).
int exit_code(ErrorKind kind);

}  // namespace issf
