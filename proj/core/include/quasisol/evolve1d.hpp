#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "quasisol/diagnostics.hpp"
#include "quasisol/model.hpp"

namespace quasisol {

struct Run1DConfig {
  int alpha = 3;
  double omega = 0.22;   ///< soliton frequency of the initial data
  double lambda = 1.0;   ///< initial data lambda * phi_omega
  double lx = 30.0;      ///< domain lx * [-pi, pi)
  int nx = 4096;
  double tmax = 10.0;
  long nt = 1'000'000;
  long diag_stride = 100;     ///< steps between diagnostic samples
  long snapshot_stride = 0;   ///< 0 disables snapshots
  double delta_bound = 1e-3;  ///< abort once |E(t)/E(0) - 1| exceeds this

  void validate() const;
  [[nodiscard]] double h() const { return tmax / static_cast<double>(nt); }
};

struct Snapshot1D {
  double time = 0.0;
  ComplexVector values;
};

struct Run1DResult {
  Diagnostics diagnostics;
  std::vector<Snapshot1D> snapshots;
  Field1D final_state;
  double final_time = 0.0;
  RunStatus status = RunStatus::completed;
  std::optional<ErrorCode> failure_code;
  std::string message;
  /// Largest Fourier tail ratio seen at the diagnostic samples.
  double max_tail_ratio = 0.0;
};

/// d/dt phi = -i L(phi), every derivative spectral, flux divergence taken
/// literally. Throws denominator_blowup if max |phi| >= 1.
Field1D rhs_1d(const Field1D& field, int alpha);

/// One classical RK4 step of size h.
Field1D rk4_step(const Field1D& field, double h, int alpha);

/// lambda * phi_omega on the grid; saturation_violation if lambda * peak >= 1.
Field1D perturbed_soliton_1d(int alpha, double omega, double lambda, std::shared_ptr<const Fourier1DGrid> grid);

/// Fixed-step RK4 to config.tmax. Never throws on solver trouble: the
/// partial run is returned with status accuracy_abort or solver_failure.
Run1DResult evolve_1d(const Run1DConfig& config, const Field1D& initial);

/// Builds the grid and perturbed soliton from config and runs evolve_1d.
Run1DResult evolve_1d(const Run1DConfig& config);

}  // namespace quasisol
