#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasisol/errors.hpp"
#include "quasisol/model.hpp"

namespace quasisol {

/// Knobs for the relaxed Newton iteration.
///
/// Each accepted update is phi <- phi + mu * delta where delta is the full
/// Newton correction. With mu_growth == 1 the relaxation is fixed; with
/// mu_growth > 1 the factor grows after every accepted step (capped at 1) and
/// a step is only accepted when it lowers the 2-norm of the residual.
struct SolverControls {
  double mu = 0.1;
  double tol = 1e-10;
  int max_iter = 5000;
  /// When true, updates that would push max phi to >= 1 are retried with
  /// mu halved (up to max_halvings times); when false they fail immediately.
  bool clamp = true;
  double mu_growth = 1.0;
  int max_halvings = 20;

  void validate() const;
};

struct SolveInfo {
  double residual = 0.0;     ///< sup-norm of the collocation residual
  int iterations = 0;
  double trailing = 0.0;     ///< max |a_m| over the last 10% of Chebyshev coefficients
  double leading = 0.0;      ///< max |a_m| overall
};

struct GroundState {
  RadialProfile profile;
  SolveInfo info;
};

/// Residual of the s = r^2 ground-state equation at nodes 1..n (the
/// Dirichlet node s = s0 is eliminated). Length n.
Vector residual_qeqs(const RadialProfile& profile, const ModelParams& params);

/// Analytic Jacobian of residual_qeqs with respect to phi at nodes 1..n.
Matrix jacobian_qeqs(const RadialProfile& profile, const ModelParams& params);

/// 0.9 exp(-s/50) on the grid nodes.
RadialProfile default_seed(std::shared_ptr<const ChebGrid> grid);

/// Relaxed Newton iteration for the radial ground state at params.omega.
/// Throws no_convergence after controls.max_iter iterations and
/// denominator_blowup if no admissible step exists.
GroundState newton_relaxed(const RadialProfile& seed, const ModelParams& params, const SolverControls& controls);

/// Chebyshev interpolation of a profile onto another grid; zero beyond the
/// original s0.
RadialProfile resample(const RadialProfile& profile, std::shared_ptr<const ChebGrid> grid);

struct GridSpec {
  int n;
  double s0;
};

struct ContinuationPlan {
  std::vector<double> omega_values;
  /// (omega threshold, controls): the last entry with threshold <= omega
  /// replaces the base controls for that step.
  std::vector<std::pair<double, SolverControls>> overrides;
  /// Optional regridding ladder: when trailing/leading of a converged profile
  /// exceeds regrid_threshold, the profile is moved to the next grid and
  /// re-solved at the same omega.
  std::vector<GridSpec> regrid_ladder;
  double regrid_threshold = 1e-8;
  /// Steps towards omega* are split so that no single increase exceeds
  /// max_gap_fraction * (omega* - omega); the extra solves are not reported.
  /// Zero disables the splitting.
  double max_gap_fraction = 1.0 / 16.0;

  void validate(int alpha) const;
};

/// Uniform steps of 0.01 up to 0.4, then 0.005, from start to stop inclusive.
std::vector<double> default_omega_path(double start, double stop);

/// Frequencies leading from `from` towards `to`, excluding `to`: the default
/// path when going up, factors of 0.8 when going down.
std::vector<double> warmup_path(double from, double to);

struct ContinuationResult {
  std::vector<GroundState> states;
  std::optional<double> failed_omega;
  std::optional<ErrorCode> failure_code;
  std::string failure_message;

  [[nodiscard]] bool ok() const { return !failed_omega.has_value(); }
};

/// Solves along plan.omega_values, seeding each solve with the previous
/// solution. The first solve starts from seed (default_seed(grid) if absent).
/// On failure the partial result is returned with the failing omega recorded.
ContinuationResult continuation(const ContinuationPlan& plan, const ModelParams& params,
                                const SolverControls& controls, std::shared_ptr<const ChebGrid> grid,
                                std::optional<RadialProfile> seed = std::nullopt);

/// Ground state at params.omega reached by continuation from default_seed at
/// omega = 0.1. Throws the failing solve's error.
GroundState groundstate_by_continuation(const ModelParams& params, std::shared_ptr<const ChebGrid> grid,
                                        const SolverControls& controls = {.mu = 0.1, .mu_growth = 2.0});

/// Positive radial ground state of -Delta psi + psi - psi^{2a+1} = 0 on grid.
/// Requires d == 2 or alpha < 2/(d-2) for d >= 3.
GroundState semilinear_groundstate(const ModelParams& params, const SolverControls& controls,
                                   std::shared_ptr<const ChebGrid> grid,
                                   std::optional<RadialProfile> seed = std::nullopt);

/// L2 norm squared of a semilinear profile in dimension dim.
double semilinear_mass(const RadialProfile& profile, int dim);

/// Semilinear residual (nodes 1..n) for tests.
Vector residual_semilinear(const RadialProfile& profile, const ModelParams& params);

}  // namespace quasisol
