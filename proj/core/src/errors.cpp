#include "quasisol/errors.hpp"

#include <cstdio>

namespace quasisol {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::no_solitary_wave: return "no-solitary-wave";
    case ErrorCode::denominator_blowup: return "denominator-blowup";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::no_sign_change: return "no-sign-change";
    case ErrorCode::insufficient_window: return "insufficient-window";
    case ErrorCode::saturation_violation: return "saturation-violation";
    case ErrorCode::accuracy_abort: return "accuracy-abort";
    case ErrorCode::too_few_samples: return "too-few-samples";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::usage_error: return "usage-error";
    case ErrorCode::schema_mismatch: return "schema-mismatch";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

std::string num(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

}  // namespace quasisol
