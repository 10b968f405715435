#include "quasisol/evolve1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quasisol/detail/dual.hpp"

namespace quasisol {

namespace {

// Right-hand side with preallocated buffers; one instance per run.
class Rhs1D {
 public:
  Rhs1D(const Fourier1DGrid& grid, int alpha)
      : grid_(grid), alpha_(alpha), nx_(grid.nx()), spec_(nx_), dphi_(nx_), flux_(nx_), p_(nx_) {}

  void operator()(const ComplexVector& phi, ComplexVector& out) {
    double worst = 0.0;
    for (int j = 0; j < nx_; ++j) worst = std::max(worst, std::norm(phi[j]));
    if (!(worst < 1.0)) {
      fail(ErrorCode::denominator_blowup, "rhs_1d: max |phi| = " + num(std::sqrt(worst)) + " >= 1");
    }
    derivative(phi.data(), dphi_.data());
    for (int j = 0; j < nx_; ++j) {
      p_[j] = detail::ipow(std::norm(phi[j]), alpha_);
      flux_[j] = dphi_[j] / (1.0 - p_[j]);
    }
    derivative(flux_.data(), out.data());
    for (int j = 0; j < nx_; ++j) {
      const double q = std::norm(phi[j]);
      const double denom = 1.0 - p_[j];
      const double q_am1 = detail::ipow(q, alpha_ - 1);
      const Complex l = -out[j] + alpha_ * q_am1 * std::norm(dphi_[j]) / (denom * denom) * phi[j] - p_[j] * phi[j];
      out[j] = Complex(l.imag(), -l.real());
    }
  }

 private:
  void derivative(const Complex* in, Complex* out) {
    grid_.forward(in, spec_.data());
    const auto& k = grid_.wavenumbers();
    const double inv_n = 1.0 / nx_;
    for (int j = 0; j < nx_; ++j) {
      const double kj = k[j] * inv_n;
      spec_[j] = Complex(-kj * spec_[j].imag(), kj * spec_[j].real());
    }
    spec_[nx_ / 2] = 0.0;
    grid_.backward(spec_.data(), out);
  }

  const Fourier1DGrid& grid_;
  int alpha_;
  int nx_;
  ComplexVector spec_;
  ComplexVector dphi_;
  ComplexVector flux_;
  std::vector<double> p_;
};

class Rk4 {
 public:
  Rk4(const Fourier1DGrid& grid, int alpha) : rhs_(grid, alpha), k_(grid.nx()), acc_(grid.nx()), stage_(grid.nx()) {}

  void step(ComplexVector& phi, double h) {
    const std::size_t n = phi.size();
    rhs_(phi, k_);
    for (std::size_t j = 0; j < n; ++j) {
      acc_[j] = k_[j];
      stage_[j] = phi[j] + 0.5 * h * k_[j];
    }
    rhs_(stage_, k_);
    for (std::size_t j = 0; j < n; ++j) {
      acc_[j] += 2.0 * k_[j];
      stage_[j] = phi[j] + 0.5 * h * k_[j];
    }
    rhs_(stage_, k_);
    for (std::size_t j = 0; j < n; ++j) {
      acc_[j] += 2.0 * k_[j];
      stage_[j] = phi[j] + h * k_[j];
    }
    rhs_(stage_, k_);
    for (std::size_t j = 0; j < n; ++j) phi[j] += (h / 6.0) * (acc_[j] + k_[j]);
  }

 private:
  Rhs1D rhs_;
  ComplexVector k_;
  ComplexVector acc_;
  ComplexVector stage_;
};

double linf_norm(const ComplexVector& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

void Run1DConfig::validate() const {
  require(alpha >= 1, ErrorCode::invalid_parameter, "alpha must be >= 1");
  require(nt >= 1, ErrorCode::invalid_parameter, "nt must be >= 1");
  require(tmax > 0.0, ErrorCode::invalid_parameter, "tmax must be positive");
  require(lx > 0.0, ErrorCode::invalid_parameter, "lx must be positive");
  require(diag_stride >= 1 && nt % diag_stride == 0, ErrorCode::invalid_parameter,
          "diag_stride must divide nt");
  require(snapshot_stride >= 0, ErrorCode::invalid_parameter, "snapshot_stride must be >= 0");
  require(delta_bound > 0.0, ErrorCode::invalid_parameter, "delta_bound must be positive");
}

Field1D rhs_1d(const Field1D& field, int alpha) {
  require(static_cast<int>(field.values.size()) == field.grid->nx(), ErrorCode::length_mismatch,
          "rhs_1d: field length does not match grid");
  Rhs1D rhs(*field.grid, alpha);
  Field1D out{field.grid, ComplexVector(field.values.size())};
  rhs(field.values, out.values);
  return out;
}

Field1D rk4_step(const Field1D& field, double h, int alpha) {
  require(static_cast<int>(field.values.size()) == field.grid->nx(), ErrorCode::length_mismatch,
          "rk4_step: field length does not match grid");
  Rk4 rk(*field.grid, alpha);
  Field1D out = field;
  rk.step(out.values, h);
  return out;
}

Field1D perturbed_soliton_1d(int alpha, double omega, double lambda, std::shared_ptr<const Fourier1DGrid> grid) {
  const ModelParams params{alpha, 1, omega};
  params.require_solitary_range();
  require(lambda > 0.0, ErrorCode::invalid_parameter, "lambda must be positive");
  const double peak = lambda * soliton_max(params);
  require(peak < 1.0, ErrorCode::saturation_violation,
          "lambda * soliton peak = " + num(peak) + " >= 1");
  Field1D field = sample_soliton_1d(params, std::move(grid));
  for (auto& v : field.values) v *= lambda;
  return field;
}

Run1DResult evolve_1d(const Run1DConfig& config, const Field1D& initial) {
  config.validate();
  require(static_cast<int>(initial.values.size()) == initial.grid->nx(), ErrorCode::length_mismatch,
          "evolve_1d: initial data does not match its grid");
  const auto& grid = *initial.grid;
  const double h = config.h();

  Run1DResult result;
  result.final_state = initial;
  auto& phi = result.final_state.values;
  auto sample = [&](double t) {
    result.diagnostics.record(t, linf_norm(phi), mass_1d(result.final_state),
                              energy_1d(result.final_state, config.alpha));
    result.max_tail_ratio = std::max(result.max_tail_ratio, fourier_tail_ratio(phi, grid));
  };
  auto snapshot = [&](long step) {
    if (config.snapshot_stride > 0 && step % config.snapshot_stride == 0) {
      result.snapshots.push_back({static_cast<double>(step) * h, phi});
    }
  };

  try {
    sample(0.0);
    snapshot(0);
    Rk4 rk(grid, config.alpha);
    for (long step = 1; step <= config.nt; ++step) {
      rk.step(phi, h);
      const double t = static_cast<double>(step) * h;
      result.final_time = t;
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

Run1DResult evolve_1d(const Run1DConfig& config) {
  config.validate();
  auto grid = std::make_shared<const Fourier1DGrid>(config.nx, config.lx);
  return evolve_1d(config, perturbed_soliton_1d(config.alpha, config.omega, config.lambda, grid));
}

}  // namespace quasisol
