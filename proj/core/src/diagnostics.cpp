#include "quasisol/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "quasisol/model.hpp"

namespace quasisol {

void Diagnostics::record(double t, double linf_value, double mass_value, double energy_value) {
  times.push_back(t);
  linf.push_back(linf_value);
  mass.push_back(mass_value);
  energy.push_back(energy_value);
  delta.push_back(std::abs(energy_value / energy.front() - 1.0));
}

double Diagnostics::max_delta() const {
  return delta.empty() ? 0.0 : *std::max_element(delta.begin(), delta.end());
}

double Diagnostics::max_mass_drift() const {
  double worst = 0.0;
  for (double m : mass) worst = std::max(worst, std::abs(m / mass.front() - 1.0));
  return worst;
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::accuracy_abort: return "accuracy-abort";
    case RunStatus::solver_failure: return "solver-failure";
  }
  return "unknown";
}

FinalFit fit_final_omega(const std::vector<double>& times, const std::vector<double>& linf, int alpha) {
  require(times.size() == linf.size(), ErrorCode::length_mismatch, "times and linf differ in length");
  require(times.size() >= 10, ErrorCode::too_few_samples,
          "need at least 10 diagnostic samples, got " + std::to_string(times.size()));
  const double t0 = times.front();
  const double t1 = times.back();
  const double cut = t1 - 0.1 * (t1 - t0);
  FinalFit fit;
  fit.window_lo = cut;
  fit.window_hi = t1;
  double sum = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= cut) {
      sum += linf[i];
      ++fit.samples;
    }
  }
  fit.mean_linf = sum / static_cast<double>(fit.samples);
  fit.omega = fit_omega_from_max(fit.mean_linf, alpha);
  return fit;
}

}  // namespace quasisol
