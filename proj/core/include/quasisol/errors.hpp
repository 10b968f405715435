#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quasisol {

enum class ErrorCode {
  invalid_parameter,
  no_solitary_wave,
  denominator_blowup,
  no_convergence,
  no_sign_change,
  insufficient_window,
  saturation_violation,
  accuracy_abort,
  too_few_samples,
  length_mismatch,
  usage_error,
  schema_mismatch,
  io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Shortest readable form of a number for messages (%.6g).
std::string num(double value);

/// Exception carrying a machine-readable error category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace quasisol
