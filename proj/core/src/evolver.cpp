#include "quasisol/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quasisol/detail/kernels.hpp"

namespace quasisol {

namespace {

// Grid operators in s: first derivative and the radial Laplacian
// 4 s d_ss + 2 d d_s.
struct RadialOperators {
  Matrix ds;
  Matrix lap;
};

RadialOperators radial_operators(const ChebGrid& grid, int dim) {
  const double f = grid.ds_factor();
  RadialOperators ops{f * grid.diff1(), (f * f) * grid.diff2()};
  ops.lap = grid.s_nodes().cwiseProduct(Vector::Constant(grid.size(), 4.0)).asDiagonal() * ops.lap;
  ops.lap += (2.0 * dim) * ops.ds;
  return ops;
}

void check_same_grid(const RadialField& a, const RadialField& b) {
  require(a.grid == b.grid || (a.grid->n() == b.grid->n() && a.grid->s0() == b.grid->s0()),
          ErrorCode::length_mismatch, "fields live on different grids");
}

void check_field(const RadialField& field) {
  require(field.re.size() == field.grid->size() && field.im.size() == field.grid->size(),
          ErrorCode::length_mismatch, "field does not match its grid");
}

// F(phi) as a stacked (re, im) vector, zero at node 0.
Vector time_derivative(const Vector& re, const Vector& im, const ChebGrid& grid, const RadialOperators& ops,
                       int alpha) {
  require_below_saturation(re, im, "rhs_radial");
  const int size = grid.size();
  const Vector as = ops.ds * re;
  const Vector bs = ops.ds * im;
  const Vector la = ops.lap * re;
  const Vector lb = ops.lap * im;
  const auto& s = grid.s_nodes();
  Vector out = Vector::Zero(2 * size);
  for (int k = 1; k < size; ++k) {
    double lr = 0.0, li = 0.0;
    detail::radial_operator_point<double>(re[k], im[k], as[k], bs[k], la[k], lb[k], s[k], alpha, lr, li);
    out[k] = li;
    out[size + k] = -lr;
  }
  return out;
}

Vector stack(const RadialField& f) {
  Vector v(2 * f.re.size());
  v << f.re, f.im;
  return v;
}

Vector residual_stacked(const Vector& x_new, const Vector& x_old, const Vector& f_old, double h,
                        const ChebGrid& grid, const RadialOperators& ops, int alpha) {
  const int size = grid.size();
  const Vector f_new = time_derivative(x_new.head(size), x_new.tail(size), grid, ops, alpha);
  Vector r = x_new - x_old - (0.5 * h) * (f_old + f_new);
  r[0] = x_new[0];
  r[size] = x_new[size];
  return r;
}

Matrix jacobian_stacked(const Vector& x, double h, const ChebGrid& grid, const RadialOperators& ops, int alpha) {
  using D6 = detail::Dual<6>;
  const int size = grid.size();
  const Vector re = x.head(size);
  const Vector im = x.tail(size);
  require_below_saturation(re, im, "cn_jacobian");
  const Vector as = ops.ds * re;
  const Vector bs = ops.ds * im;
  const Vector la = ops.lap * re;
  const Vector lb = ops.lap * im;
  const auto& s = grid.s_nodes();

  Matrix jac = Matrix::Zero(2 * size, 2 * size);
  const double c = -0.5 * h;
  for (int k = 1; k < size; ++k) {
    const D6 a = D6::variable(re[k], 0);
    const D6 b = D6::variable(im[k], 1);
    const D6 da = D6::variable(as[k], 2);
    const D6 db = D6::variable(bs[k], 3);
    const D6 dla = D6::variable(la[k], 4);
    const D6 dlb = D6::variable(lb[k], 5);
    D6 lr, li;
    detail::radial_operator_point(a, b, da, db, dla, dlb, s[k], alpha, lr, li);
    // Row k: F_re = Li; row size + k: F_im = -Lr.
    const std::array<double, 6> gre = li.d;
    std::array<double, 6> gim = lr.d;
    for (auto& g : gim) g = -g;
    for (int part = 0; part < 2; ++part) {
      const auto& g = part == 0 ? gre : gim;
      const int row = part * size + k;
      jac.row(row).head(size) = c * (g[2] * ops.ds.row(k) + g[4] * ops.lap.row(k));
      jac.row(row).tail(size) = c * (g[3] * ops.ds.row(k) + g[5] * ops.lap.row(k));
      jac(row, k) += c * g[0];
      jac(row, size + k) += c * g[1];
      jac(row, row) += 1.0;
    }
  }
  jac(0, 0) = 1.0;
  jac(size, size) = 1.0;
  return jac;
}

double sup_norm(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

class CnStepper {
 public:
  CnStepper(std::shared_ptr<const ChebGrid> grid, const ModelParams& params)
      : grid_(std::move(grid)), ops_(radial_operators(*grid_, params.dim)), alpha_(params.alpha) {}

  Vector step(const Vector& x_old, double h, double tol, int max_iter, CnStepInfo& info) const {
    const int size = grid_->size();
    const Vector f_old = time_derivative(x_old.head(size), x_old.tail(size), *grid_, ops_, alpha_);
    Vector x = x_old;
    x[0] = 0.0;
    x[size] = 0.0;
    Vector r = residual_stacked(x, x_old, f_old, h, *grid_, ops_, alpha_);
    double sup = sup_norm(r);
    info = {sup, 0, 0};
    if (sup < tol) return x;

    Eigen::PartialPivLU<Matrix> lu(jacobian_stacked(x, h, *grid_, ops_, alpha_));
    info.factorizations = 1;
    bool reuse = false;
    for (int it = 1; it <= max_iter; ++it) {
      x -= lu.solve(r);
      r = residual_stacked(x, x_old, f_old, h, *grid_, ops_, alpha_);
      const double next = sup_norm(r);
      require(std::isfinite(next), ErrorCode::no_convergence, "CN residual is not finite");
      info.residual = next;
      info.iterations = it;
      if (next < tol) return x;
      if (it == 1) reuse = sup > 10.0 * next;
      if (!reuse || next > 0.1 * sup) {
        lu.compute(jacobian_stacked(x, h, *grid_, ops_, alpha_));
        ++info.factorizations;
      }
      sup = next;
    }
    fail(ErrorCode::no_convergence, "CN Newton did not reach tol " + num(tol) + " in " +
                                        std::to_string(max_iter) + " iterations (residual " +
                                        num(info.residual) + ")");
  }

 private:
  std::shared_ptr<const ChebGrid> grid_;
  RadialOperators ops_;
  int alpha_;
};

RadialField unstack(const Vector& x, std::shared_ptr<const ChebGrid> grid) {
  const int size = grid->size();
  return {std::move(grid), x.head(size), x.tail(size)};
}

double linf_norm(const Vector& re, const Vector& im) {
  return std::sqrt((re.array().square() + im.array().square()).maxCoeff());
}

double trailing_ratio(const Vector& re, const Vector& im) {
  const Vector a = cheb_coeffs(re);
  const Vector b = cheb_coeffs(im);
  const double lead = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (lead == 0.0) return 0.0;
  return std::max(trailing_coefficient(a), trailing_coefficient(b)) / lead;
}

}  // namespace

void RunRadialConfig::validate() const {
  require(alpha >= 1, ErrorCode::invalid_parameter, "alpha must be >= 1");
  require(dim >= 2, ErrorCode::invalid_parameter, "radial evolution needs dim >= 2");
  require(grid.n >= 2 && grid.s0 > 0.0, ErrorCode::invalid_parameter, "invalid grid");
  require(h > 0.0, ErrorCode::invalid_parameter, "time step h must be positive");
  require(nt >= 1, ErrorCode::invalid_parameter, "nt must be >= 1");
  require(newton_tol > 0.0 && newton_max_iter >= 1, ErrorCode::invalid_parameter, "invalid Newton controls");
  require(diag_stride >= 1 && nt % diag_stride == 0, ErrorCode::invalid_parameter, "diag_stride must divide nt");
  require(snapshot_stride >= 0, ErrorCode::invalid_parameter, "snapshot_stride must be >= 0");
  require(delta_bound > 0.0, ErrorCode::invalid_parameter, "delta_bound must be positive");
}

RadialField rhs_radial(const RadialField& field, const ModelParams& params) {
  require(params.dim >= 2, ErrorCode::invalid_parameter, "radial evolution needs dim >= 2");
  check_field(field);
  const auto ops = radial_operators(*field.grid, params.dim);
  return unstack(time_derivative(field.re, field.im, *field.grid, ops, params.alpha), field.grid);
}

Vector cn_residual(const RadialField& phi_new, const RadialField& phi_old, double h, const ModelParams& params) {
  require(params.dim >= 2, ErrorCode::invalid_parameter, "radial evolution needs dim >= 2");
  check_field(phi_new);
  check_field(phi_old);
  check_same_grid(phi_new, phi_old);
  const auto& grid = *phi_new.grid;
  const auto ops = radial_operators(grid, params.dim);
  const Vector x_old = stack(phi_old);
  const Vector f_old = time_derivative(phi_old.re, phi_old.im, grid, ops, params.alpha);
  return residual_stacked(stack(phi_new), x_old, f_old, h, grid, ops, params.alpha);
}

Matrix cn_jacobian(const RadialField& phi_new, double h, const ModelParams& params) {
  require(params.dim >= 2, ErrorCode::invalid_parameter, "radial evolution needs dim >= 2");
  check_field(phi_new);
  const auto ops = radial_operators(*phi_new.grid, params.dim);
  return jacobian_stacked(stack(phi_new), h, *phi_new.grid, ops, params.alpha);
}

RadialField cn_newton_step(const RadialField& phi_old, double h, const ModelParams& params, double tol, int max_iter,
                           CnStepInfo* info) {
  require(params.dim >= 2, ErrorCode::invalid_parameter, "radial evolution needs dim >= 2");
  require(h > 0.0 && tol > 0.0 && max_iter >= 1, ErrorCode::invalid_parameter, "invalid CN step controls");
  check_field(phi_old);
  CnStepper stepper(phi_old.grid, params);
  CnStepInfo local;
  const Vector x = stepper.step(stack(phi_old), h, tol, max_iter, local);
  if (info) *info = local;
  return unstack(x, phi_old.grid);
}

RadialField gaussian_initial(double c, double s1, std::shared_ptr<const ChebGrid> grid) {
  require(c > 0.0 && c < 1.0, ErrorCode::invalid_parameter, "gaussian amplitude c must lie in (0, 1)");
  require(s1 > 0.0, ErrorCode::invalid_parameter, "gaussian width s1 must be positive");
  Vector re = (grid->s_nodes() / -s1).array().exp() * c;
  re[0] = 0.0;
  const int size = grid->size();
  return {std::move(grid), std::move(re), Vector::Zero(size)};
}

RadialField radial_initial(const RunRadialConfig& config, std::shared_ptr<const ChebGrid> grid) {
  if (const auto* g = std::get_if<GaussianInitial>(&config.initial)) return gaussian_initial(g->c, g->s1, grid);
  const auto& sol = std::get<SolitonInitial>(config.initial);
  require(sol.lambda > 0.0, ErrorCode::invalid_parameter, "lambda must be positive");
  const ModelParams params{config.alpha, config.dim, sol.omega};
  const GroundState gs = groundstate_by_continuation(params, grid);
  RadialField field = RadialField::from_real(gs.profile);
  field.re *= sol.lambda;
  const double peak = field.re.maxCoeff();
  require(peak < 1.0, ErrorCode::saturation_violation,
          "lambda * ground state peak = " + num(peak) + " >= 1");
  return field;
}

RunRadialResult evolve_radial(const RunRadialConfig& config, const RadialField& initial) {
  config.validate();
  check_field(initial);
  const ModelParams params{config.alpha, config.dim, 0.0};
  RunRadialResult result;
  result.final_state = initial;
  Vector x = stack(initial);
  const int size = initial.grid->size();

  auto sample = [&](double t) {
    const RadialField field = unstack(x, initial.grid);
    result.diagnostics.record(t, linf_norm(field.re, field.im), mass_radial(field, params),
                              energy_radial(field, params));
    result.max_trailing_ratio = std::max(result.max_trailing_ratio, trailing_ratio(field.re, field.im));
  };
  auto snapshot = [&](long step) {
    if (config.snapshot_stride > 0 && step % config.snapshot_stride == 0) {
      result.snapshots.push_back({static_cast<double>(step) * config.h, x.head(size), x.tail(size)});
    }
  };

  try {
    require_below_saturation(initial.re, initial.im, "evolve_radial initial data");
    sample(0.0);
    snapshot(0);
    CnStepper stepper(initial.grid, params);
    for (long step = 1; step <= config.nt; ++step) {
      CnStepInfo info;
      x = stepper.step(x, config.h, config.newton_tol, config.newton_max_iter, info);
      require(info.residual < config.newton_tol, ErrorCode::no_convergence, "accepted step above tolerance");
      result.max_cn_residual = std::max(result.max_cn_residual, info.residual);
      result.newton_iterations += info.iterations;
      result.factorizations += info.factorizations;
      const double t = static_cast<double>(step) * config.h;
      result.final_time = t;
      result.final_state = unstack(x, initial.grid);
      snapshot(step);
      if (step % config.diag_stride == 0) {
        sample(t);
        if (result.diagnostics.delta.back() > config.delta_bound) {
          result.status = RunStatus::accuracy_abort;
          result.failure_code = ErrorCode::accuracy_abort;
          result.message = "delta = " + num(result.diagnostics.delta.back()) + " exceeds " +
                           num(config.delta_bound) + " at t = " + num(t);
          return result;
        }
      }
    }
  } catch (const Error& e) {
    result.status = RunStatus::solver_failure;
    result.failure_code = e.code();
    result.message = e.what();
  }
  return result;
}

RunRadialResult evolve_radial(const RunRadialConfig& config) {
  config.validate();
  auto grid = std::make_shared<const ChebGrid>(config.grid.n, config.grid.s0);
  return evolve_radial(config, radial_initial(config, grid));
}

}  // namespace quasisol
