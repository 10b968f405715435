#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quasisol/diagnostics.hpp"
#include "quasisol/groundstate.hpp"

namespace quasisol {

/// lambda times the ground state at omega.
struct SolitonInitial {
  double omega = 0.1;
  double lambda = 1.0;
};

/// c * exp(-s / s1).
struct GaussianInitial {
  double c = 0.9;
  double s1 = 50.0;
};

using RadialInitial = std::variant<SolitonInitial, GaussianInitial>;

struct RunRadialConfig {
  int alpha = 1;
  int dim = 3;
  GridSpec grid{200, 1e3};
  double h = 2.5e-4;
  long nt = 4000;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  long diag_stride = 1;
  long snapshot_stride = 0;   ///< 0 disables snapshots
  double delta_bound = 1e-3;
  RadialInitial initial = GaussianInitial{};

  void validate() const;
};

struct RadialSnapshot {
  double time = 0.0;
  Vector re;
  Vector im;
};

struct RunRadialResult {
  Diagnostics diagnostics;
  std::vector<RadialSnapshot> snapshots;
  RadialField final_state;
  double final_time = 0.0;
  RunStatus status = RunStatus::completed;
  std::optional<ErrorCode> failure_code;
  std::string message;
  double max_cn_residual = 0.0;   ///< over accepted steps
  long newton_iterations = 0;
  long factorizations = 0;
  double max_trailing_ratio = 0.0;  ///< trailing / leading Chebyshev coefficient
};

/// d/dt (re, im) = (Li, -Lr) with L the radial operator in s; zero at s0.
RadialField rhs_radial(const RadialField& field, const ModelParams& params);

/// phi_new - phi_old - (h/2)(F(phi_old) + F(phi_new)) stacked as (re, im),
/// length 2(n+1), with the s0 rows replaced by the Dirichlet values.
Vector cn_residual(const RadialField& phi_new, const RadialField& phi_old, double h, const ModelParams& params);

/// Jacobian of cn_residual with respect to (re_new, im_new).
Matrix cn_jacobian(const RadialField& phi_new, double h, const ModelParams& params);

struct CnStepInfo {
  double residual = 0.0;
  int iterations = 0;
  int factorizations = 0;
};

/// Newton on the doubled real system starting from phi_old. The LU of the
/// first Jacobian is reused while it keeps cutting the residual by more than
/// 10x per iteration; otherwise the Jacobian is refactored.
RadialField cn_newton_step(const RadialField& phi_old, double h, const ModelParams& params, double tol = 1e-10,
                           int max_iter = 25, CnStepInfo* info = nullptr);

/// c exp(-s/s1) on the grid with the s0 value forced to zero.
RadialField gaussian_initial(double c, double s1, std::shared_ptr<const ChebGrid> grid);

/// Builds the initial field described by config.initial.
RadialField radial_initial(const RunRadialConfig& config, std::shared_ptr<const ChebGrid> grid);

RunRadialResult evolve_radial(const RunRadialConfig& config, const RadialField& initial);
RunRadialResult evolve_radial(const RunRadialConfig& config);

}  // namespace quasisol
