#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quasisol/errors.hpp"

namespace quasisol {

/// Time series recorded by the evolution drivers.
struct Diagnostics {
  std::vector<double> times;
  std::vector<double> linf;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> delta;  ///< |E(t)/E(0) - 1|

  void record(double t, double linf_value, double mass_value, double energy_value);
  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  [[nodiscard]] double max_delta() const;
  /// max |M(t)/M(0) - 1|
  [[nodiscard]] double max_mass_drift() const;
};

enum class RunStatus { completed, accuracy_abort, solver_failure };
std::string_view to_string(RunStatus status);

struct FinalFit {
  double omega = 0.0;
  double mean_linf = 0.0;
  double window_lo = 0.0;  ///< time window averaged over
  double window_hi = 0.0;
  std::size_t samples = 0;
};

/// Averages L-infinity over the trailing 10% of the recorded time span and
/// inverts the soliton peak formula. Needs at least 10 samples.
FinalFit fit_final_omega(const std::vector<double>& times, const std::vector<double>& linf, int alpha);
inline FinalFit fit_final_omega(const Diagnostics& d, int alpha) { return fit_final_omega(d.times, d.linf, alpha); }

}  // namespace quasisol
