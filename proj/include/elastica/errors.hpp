#pragma once

#include <stdexcept>
#include <string>

namespace elastica {

// Category for I/O failures so callers can map them to exit codes without
// parsing messages.
enum class IoErrorCode {
  unreadable,
  unsupported_format,
  alpha_channel,
  write_failure,
};

class IoError : public std::runtime_error {
 public:
  IoError(IoErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  IoErrorCode code() const { return code_; }

 private:
  IoErrorCode code_;
};

// Numerical failures inside the solver pipeline (non-convergence, singular
// systems, non-finite values).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace elastica
