#include "quasisol/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quasisol/detail/kernels.hpp"

namespace quasisol {

namespace {

enum class Equation { quasilinear, semilinear };

struct Derivatives {
  Vector d1;
  Vector d2;
};

Derivatives s_derivatives(const Vector& phi, const ChebGrid& grid) {
  const double f = grid.ds_factor();
  return {f * (grid.diff1() * phi), (f * f) * (grid.diff2() * phi)};
}

Vector residual(const Vector& phi, const ChebGrid& grid, const ModelParams& params, Equation eq) {
  const auto [d1, d2] = s_derivatives(phi, grid);
  const auto& s = grid.s_nodes();
  const int n = grid.n();
  Vector out(n);
  for (int k = 1; k <= n; ++k) {
    out[k - 1] = (eq == Equation::quasilinear)
                     ? detail::groundstate_point<double>(phi[k], d1[k], d2[k], s[k], params.dim, params.alpha,
                                                         params.omega)
                     : detail::semilinear_point<double>(phi[k], d1[k], d2[k], s[k], params.dim, params.alpha);
  }
  return out;
}

Matrix jacobian(const Vector& phi, const ChebGrid& grid, const ModelParams& params, Equation eq) {
  using D3 = detail::Dual<3>;
  const auto [d1, d2] = s_derivatives(phi, grid);
  const auto& s = grid.s_nodes();
  const int n = grid.n();
  const double f = grid.ds_factor();
  Matrix jac(n, n);
  for (int k = 1; k <= n; ++k) {
    const D3 u = D3::variable(phi[k], 0);
    const D3 du = D3::variable(d1[k], 1);
    const D3 d2u = D3::variable(d2[k], 2);
    const D3 r = (eq == Equation::quasilinear)
                     ? detail::groundstate_point(u, du, d2u, s[k], params.dim, params.alpha, params.omega)
                     : detail::semilinear_point(u, du, d2u, s[k], params.dim, params.alpha);
    const double c1 = r.d[1] * f;
    const double c2 = r.d[2] * f * f;
    for (int j = 1; j <= n; ++j) {
      jac(k - 1, j - 1) = c1 * grid.diff1()(k, j) + c2 * grid.diff2()(k, j);
    }
    jac(k - 1, k - 1) += r.d[0];
  }
  return jac;
}

void check_feasible(const Vector& phi, const char* where) {
  const double m = phi.tail(phi.size() - 1).maxCoeff();
  require(m < 1.0 && std::isfinite(m), ErrorCode::denominator_blowup,
          std::string(where) + ": max phi = " + num(m) + " >= 1");
}

void fill_info(GroundState& gs) {
  const Vector a = cheb_coeffs(gs.profile.values);
  gs.info.trailing = trailing_coefficient(a);
  gs.info.leading = a.cwiseAbs().maxCoeff();
}

GroundState newton_core(const RadialProfile& seed, const ModelParams& params, const SolverControls& controls,
                        Equation eq) {
  controls.validate();
  const auto& grid = *seed.grid;
  const bool saturating = eq == Equation::quasilinear;
  Vector phi = seed.values;
  phi[0] = 0.0;
  if (saturating) check_feasible(phi, "newton_relaxed seed");

  const bool adaptive = controls.mu_growth > 1.0;
  double mu = controls.mu;
  Vector res = residual(phi, grid, params, eq);
  for (int it = 0; it <= controls.max_iter; ++it) {
    const double sup = res.cwiseAbs().maxCoeff();
    require(std::isfinite(sup), ErrorCode::no_convergence, "residual is not finite");
    if (sup < controls.tol) {
      GroundState gs{{seed.grid, phi, params.omega}, {sup, it, 0.0, 0.0}};
      fill_info(gs);
      return gs;
    }
    if (it == controls.max_iter) break;

    const Matrix jac = jacobian(phi, grid, params, eq);
    Vector delta = Vector::Zero(phi.size());
    delta.tail(grid.n()) = jac.partialPivLu().solve(-res);

    double step = mu;
    Vector trial;
    Vector trial_res;
    bool accepted = false;
    for (int halving = 0; halving <= controls.max_halvings; ++halving, step *= 0.5) {
      trial = phi + step * delta;
      if (saturating && trial.tail(grid.n()).maxCoeff() >= 1.0) {
        if (!controls.clamp) break;
        continue;
      }
      trial_res = residual(trial, grid, params, eq);
      if (adaptive && !(trial_res.norm() < res.norm())) continue;
      accepted = true;
      break;
    }
    if (!accepted) {
      fail(saturating ? ErrorCode::denominator_blowup : ErrorCode::no_convergence,
           "no admissible Newton step at iteration " + std::to_string(it) + " (omega = " +
               num(params.omega) + ")");
    }
    phi = std::move(trial);
    res = std::move(trial_res);
    mu = adaptive ? std::min(1.0, step * controls.mu_growth) : controls.mu;
  }
  fail(ErrorCode::no_convergence, "Newton did not reach tol " + num(controls.tol) + " within " +
                                      std::to_string(controls.max_iter) + " iterations (omega = " +
                                      num(params.omega) + ")");
}

}  // namespace

void SolverControls::validate() const {
  require(mu > 0.0 && mu <= 1.0, ErrorCode::invalid_parameter, "relaxation mu must lie in (0, 1]");
  require(tol > 0.0, ErrorCode::invalid_parameter, "tol must be positive");
  require(max_iter >= 1, ErrorCode::invalid_parameter, "max_iter must be >= 1");
  require(mu_growth >= 1.0, ErrorCode::invalid_parameter, "mu_growth must be >= 1");
  require(max_halvings >= 0, ErrorCode::invalid_parameter, "max_halvings must be >= 0");
}

Vector residual_qeqs(const RadialProfile& profile, const ModelParams& params) {
  check_feasible(profile.values, "residual_qeqs");
  return residual(profile.values, *profile.grid, params, Equation::quasilinear);
}

Matrix jacobian_qeqs(const RadialProfile& profile, const ModelParams& params) {
  check_feasible(profile.values, "jacobian_qeqs");
  return jacobian(profile.values, *profile.grid, params, Equation::quasilinear);
}

Vector residual_semilinear(const RadialProfile& profile, const ModelParams& params) {
  return residual(profile.values, *profile.grid, params, Equation::semilinear);
}

RadialProfile default_seed(std::shared_ptr<const ChebGrid> grid) {
  Vector v = (grid->s_nodes() / -50.0).array().exp() * 0.9;
  return {std::move(grid), std::move(v), 0.0};
}

GroundState newton_relaxed(const RadialProfile& seed, const ModelParams& params, const SolverControls& controls) {
  require(params.dim >= 2, ErrorCode::invalid_parameter, "radial ground states need dim >= 2");
  params.require_solitary_range();
  require(seed.values.size() == seed.grid->size(), ErrorCode::length_mismatch, "seed does not match its grid");
  return newton_core(seed, params, controls, Equation::quasilinear);
}

RadialProfile resample(const RadialProfile& profile, std::shared_ptr<const ChebGrid> grid) {
  const Vector a = cheb_coeffs(profile.values);
  const double old_s0 = profile.grid->s0();
  Vector v(grid->size());
  for (int k = 0; k < grid->size(); ++k) {
    const double s = grid->s_nodes()[k];
    v[k] = (s >= old_s0) ? 0.0 : cheb_eval(a, 2.0 * s / old_s0 - 1.0);
  }
  v[0] = 0.0;
  return {std::move(grid), std::move(v), profile.omega};
}

void ContinuationPlan::validate(int alpha) const {
  require(!omega_values.empty(), ErrorCode::invalid_parameter, "continuation plan has no omega values");
  const double star = omega_star(alpha);
  for (double w : omega_values) {
    require(w > 0.0 && w < star, ErrorCode::invalid_parameter,
            "continuation omega " + num(w) + " outside (0, omega*)");
  }
  require(max_gap_fraction >= 0.0 && max_gap_fraction < 1.0, ErrorCode::invalid_parameter,
          "max_gap_fraction must lie in [0, 1)");
  for (const auto& [threshold, c] : overrides) c.validate();
  for (const auto& g : regrid_ladder) {
    require(g.n >= 2 && g.s0 > 0.0, ErrorCode::invalid_parameter, "invalid regrid ladder entry");
  }
}

std::vector<double> default_omega_path(double start, double stop) {
  require(start > 0.0 && stop >= start, ErrorCode::invalid_parameter, "default_omega_path needs 0 < start <= stop");
  std::vector<double> out;
  // Work on an integer lattice of 0.005 to avoid accumulating roundoff.
  out.push_back(start);
  while (true) {
    const double current = out.back();
    const long step = (current < 0.4 - 1e-12) ? 2 : 1;
    const double w = static_cast<double>(std::lround(current / 0.005) + step) * 0.005;
    if (w > stop + 1e-12) break;
    out.push_back(w);
  }
  if (out.back() < stop - 1e-12) out.push_back(stop);
  return out;
}

std::vector<double> warmup_path(double from, double to) {
  require(from > 0.0 && to > 0.0, ErrorCode::invalid_parameter, "warmup_path needs positive frequencies");
  std::vector<double> out;
  if (to > from) {
    out = default_omega_path(from, to);
    out.pop_back();
  } else {
    for (double w = from; w > to * 1.0001; w *= 0.8) out.push_back(w);
  }
  return out;
}

ContinuationResult continuation(const ContinuationPlan& plan, const ModelParams& params,
                                const SolverControls& controls, std::shared_ptr<const ChebGrid> grid,
                                std::optional<RadialProfile> seed) {
  plan.validate(params.alpha);
  controls.validate();
  RadialProfile current = seed ? *seed : default_seed(grid);
  if (current.grid != grid) current = resample(current, grid);
  std::size_t ladder_pos = 0;

  const double star = params.omega_star();
  bool anchored = seed.has_value();
  auto controls_at = [&](double w) {
    SolverControls c = controls;
    for (const auto& [threshold, override_controls] : plan.overrides) {
      if (threshold <= w) c = override_controls;
    }
    return c;
  };

  ContinuationResult result;
  for (double w : plan.omega_values) {
    ModelParams p = params;
    try {
      // unreported intermediate solves while the gap to omega* is small
      while (anchored && plan.max_gap_fraction > 0.0 &&
             w - current.omega > plan.max_gap_fraction * (star - current.omega)) {
        p.omega = current.omega + plan.max_gap_fraction * (star - current.omega);
        current = newton_relaxed(current, p, controls_at(p.omega)).profile;
      }
      p.omega = w;
      const SolverControls c = controls_at(w);
      GroundState gs = newton_relaxed(current, p, c);
      while (ladder_pos < plan.regrid_ladder.size() &&
             gs.info.trailing > plan.regrid_threshold * gs.info.leading) {
        const auto& g = plan.regrid_ladder[ladder_pos++];
        auto finer = std::make_shared<const ChebGrid>(g.n, g.s0);
        gs = newton_relaxed(resample(gs.profile, finer), p, c);
      }
      current = gs.profile;
      anchored = true;
      result.states.push_back(std::move(gs));
    } catch (const Error& e) {
      result.failed_omega = w;
      result.failure_code = e.code();
      result.failure_message = e.what();
      break;
    }
  }
  return result;
}

GroundState groundstate_by_continuation(const ModelParams& params, std::shared_ptr<const ChebGrid> grid,
                                        const SolverControls& controls) {
  params.require_solitary_range();
  ContinuationPlan plan;
  plan.omega_values = warmup_path(0.1, params.omega);
  plan.omega_values.push_back(params.omega);
  auto result = continuation(plan, params, controls, std::move(grid));
  if (!result.ok()) fail(*result.failure_code, result.failure_message);
  return std::move(result.states.back());
}

double semilinear_mass(const RadialProfile& profile, int dim) {
  require(dim >= 2, ErrorCode::invalid_parameter, "semilinear_mass needs dim >= 2");
  return radial_integral(profile.values.cwiseAbs2(), *profile.grid, dim);
}

GroundState semilinear_groundstate(const ModelParams& params, const SolverControls& controls,
                                   std::shared_ptr<const ChebGrid> grid, std::optional<RadialProfile> seed) {
  require(params.dim >= 2, ErrorCode::invalid_parameter, "semilinear ground state needs dim >= 2");
  require(params.alpha >= 1, ErrorCode::invalid_parameter, "alpha must be >= 1");
  require(params.dim == 2 || params.alpha * (params.dim - 2) < 2, ErrorCode::invalid_parameter,
          "semilinear ground state needs an H1-subcritical exponent");
  RadialProfile start;
  if (seed) {
    start = (seed->grid == grid) ? *seed : resample(*seed, grid);
  } else {
    // Peak of the 1D ground state (alpha+1)^{1/(2 alpha)} scaled up with the
    // dimension; the Gaussian width matches a unit-length core.
    const double peak = std::pow(params.alpha + 1.0, 1.0 / (2.0 * params.alpha)) * (1.0 + 0.5 * (params.dim - 1));
    Vector v = (grid->s_nodes() / -2.0).array().exp() * peak;
    start = {grid, std::move(v), 0.0};
  }
  ModelParams p = params;
  p.omega = 1.0;
  return newton_core(start, p, controls, Equation::semilinear);
}

}  // namespace quasisol
