#pragma once

#include <stdexcept>
#include <string>

namespace rydion {

// Error taxonomy shared across the library. The CLI maps these onto exit
// codes: everything except the convergence-type failures is reported as a
// validation problem (exit 1); non_convergence and tracking_loss exit 2.
enum class ErrorKind {
  validation,       // bad or mutually inconsistent inputs
  missing_data,     // lookup into an incomplete table
  size_limit,       // problem size beyond the supported bounds
  instability,      // physically unstable configuration
  degeneracy,       // resonant denominator in a perturbative solve
  non_convergence,  // iterative solver failed to reach tolerance
  tracking_loss,    // adiabatic state continuation lost between grid points
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation:      return "validation";
    case ErrorKind::missing_data:    return "missing_data";
    case ErrorKind::size_limit:      return "size_limit";
    case ErrorKind::instability:     return "instability";
    case ErrorKind::degeneracy:      return "degeneracy";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::tracking_loss:   return "tracking_loss";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace rydion
