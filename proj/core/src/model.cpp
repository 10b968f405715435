#include "quasisol/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "quasisol/detail/kernels.hpp"
#include "quasisol/errors.hpp"

namespace quasisol {

namespace {

double softplus(double v) { return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v))); }

double log_cosh(double y) {
  y = std::abs(y);
  return y + std::log1p(std::exp(-2.0 * y)) - std::numbers::ln2;
}

// log(1 + c cosh^2 y) and c cosh^2 y / (1 + c cosh^2 y).
struct SolitonLog {
  double log_base;
  double fraction;
};

SolitonLog soliton_log(const ModelParams& params, double x) {
  const double c = params.omega_star() / params.omega - 1.0;
  const double y = params.alpha * std::sqrt(params.omega) * x;
  const double lc = std::log(c) + 2.0 * log_cosh(y);
  return {softplus(lc), 1.0 / (1.0 + std::exp(-lc))};
}

double checked_profile_mass(const Vector& re, const Vector& im, const ChebGrid& grid, const ModelParams& params) {
  require(params.dim >= 2, ErrorCode::invalid_parameter, "radial functionals need dim >= 2");
  require_below_saturation(re, im, "mass_radial");
  const Vector integrand = re.cwiseAbs2() + im.cwiseAbs2();
  return radial_integral(integrand, grid, params.dim);
}

double checked_profile_energy(const Vector& re, const Vector& im, const ChebGrid& grid,
                              const ModelParams& params) {
  require(params.dim >= 2, ErrorCode::invalid_parameter, "radial functionals need dim >= 2");
  require_below_saturation(re, im, "energy_radial");
  const auto& s = grid.s_nodes();
  const Vector dre = grid.ds_factor() * (grid.diff1() * re);
  const Vector dim_ = grid.ds_factor() * (grid.diff1() * im);
  const int alpha = params.alpha;
  Vector integrand(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    const double q = re[k] * re[k] + im[k] * im[k];
    const double p = detail::ipow(q, alpha);
    const double grad2 = 4.0 * s[k] * (dre[k] * dre[k] + dim_[k] * dim_[k]);
    integrand[k] = 0.5 * grad2 / (1.0 - p) - p * q / (2.0 * (alpha + 1));
  }
  return radial_integral(integrand, grid, params.dim);
}

}  // namespace

double omega_star(int alpha) {
  require(alpha >= 1, ErrorCode::invalid_parameter, "alpha must be a positive integer");
  return 1.0 / (alpha + 1.0);
}

void ModelParams::require_solitary_range() const {
  require(alpha >= 1, ErrorCode::invalid_parameter, "alpha must be >= 1");
  require(dim >= 1, ErrorCode::invalid_parameter, "dim must be >= 1");
  require(omega > 0.0, ErrorCode::invalid_parameter, "omega must be positive");
  require(omega < omega_star(), ErrorCode::no_solitary_wave,
          "omega = " + num(omega) + " >= omega* = " + num(omega_star()));
}

double sphere_area(int dim) {
  require(dim >= 1, ErrorCode::invalid_parameter, "dim must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

// |S^{d-1}| int r^{d-1} f dr = |S^{d-1}|/2 int s^{(d-2)/2} f ds, with the
// s-power folded into the weights so odd d keeps spectral accuracy.
double radial_integral(const Vector& integrand, const ChebGrid& grid, int dim) {
  const double exponent = 0.5 * dim - 1.0;
  const double scale = std::pow(0.5 * grid.s0(), exponent + 1.0);
  return 0.5 * sphere_area(dim) * scale * integrand.dot(radial_weights(grid.n(), dim));
}

RadialField RadialField::from_real(const RadialProfile& profile) {
  return {profile.grid, profile.values, Vector::Zero(profile.values.size())};
}

double soliton_1d(const ModelParams& params, double x) {
  params.require_solitary_range();
  const auto lg = soliton_log(params, x);
  const double value = std::exp(-lg.log_base / (2.0 * params.alpha));
  return value < 1e-300 ? 0.0 : value;
}

double soliton_1d_dx(const ModelParams& params, double x) {
  const double phi = soliton_1d(params, x);
  if (phi == 0.0) return 0.0;
  const double y = params.alpha * std::sqrt(params.omega) * x;
  const auto lg = soliton_log(params, x);
  // d/dx log(1 + c cosh^2 y) = 2 alpha sqrt(omega) tanh(y) * fraction
  return -phi * std::sqrt(params.omega) * std::tanh(y) * lg.fraction;
}

double soliton_max(const ModelParams& params) {
  params.require_solitary_range();
  return std::pow(params.omega / params.omega_star(), 1.0 / (2.0 * params.alpha));
}

double fit_omega_from_max(double peak, int alpha) {
  require(peak > 0.0 && peak < 1.0, ErrorCode::invalid_parameter, "peak must lie in (0, 1)");
  return omega_star(alpha) * std::pow(peak, 2.0 * alpha);
}

RescaledProblem rescale_ab(double a, double b) {
  require(a > 0.0 && b > 0.0, ErrorCode::invalid_parameter, "rescale_ab needs a, b > 0");
  return {b / a, 1.0 / std::sqrt(a)};
}

Field1D sample_soliton_1d(const ModelParams& params, std::shared_ptr<const Fourier1DGrid> grid) {
  params.require_solitary_range();
  ComplexVector values(grid->nx());
  const auto& x = grid->x_nodes();
  for (int j = 0; j < grid->nx(); ++j) values[j] = soliton_1d(params, x[j]);
  return {std::move(grid), std::move(values)};
}

void require_below_saturation(const Vector& re, const Vector& im, const char* where) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < re.size(); ++k) m = std::max(m, re[k] * re[k] + im[k] * im[k]);
  require(m < 1.0 && std::isfinite(m), ErrorCode::denominator_blowup,
          std::string(where) + ": max |phi| = " + num(std::sqrt(m)) + " >= 1");
}

void require_below_saturation(const ComplexVector& values, const char* where) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::norm(v));
  require(m < 1.0 && std::isfinite(m), ErrorCode::denominator_blowup,
          std::string(where) + ": max |phi| = " + num(std::sqrt(m)) + " >= 1");
}

double mass_1d(const Field1D& field) {
  double sum = 0.0;
  for (const auto& v : field.values) sum += std::norm(v);
  return sum * field.grid->dx();
}

double energy_1d(const Field1D& field, int alpha) {
  require_below_saturation(field.values, "energy_1d");
  const auto dphi = fourier_diff(field.values, *field.grid, 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < field.values.size(); ++j) {
    const double q = std::norm(field.values[j]);
    const double p = detail::ipow(q, alpha);
    sum += 0.5 * std::norm(dphi[j]) / (1.0 - p) - p * q / (2.0 * (alpha + 1));
  }
  return sum * field.grid->dx();
}

double mass_radial(const RadialField& field, const ModelParams& params) {
  return checked_profile_mass(field.re, field.im, *field.grid, params);
}

double mass_radial(const RadialProfile& profile, const ModelParams& params) {
  return checked_profile_mass(profile.values, Vector::Zero(profile.values.size()), *profile.grid, params);
}

double energy_radial(const RadialField& field, const ModelParams& params) {
  return checked_profile_energy(field.re, field.im, *field.grid, params);
}

double energy_radial(const RadialProfile& profile, const ModelParams& params) {
  return checked_profile_energy(profile.values, Vector::Zero(profile.values.size()), *profile.grid, params);
}

ComplexVector spatial_operator_1d(const Field1D& field, int alpha) {
  require_below_saturation(field.values, "spatial_operator_1d");
  const auto& phi = field.values;
  const std::size_t nx = phi.size();
  const auto dphi = fourier_diff(phi, *field.grid, 1);
  ComplexVector flux(nx);
  std::vector<double> q(nx), p(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    q[j] = std::norm(phi[j]);
    p[j] = detail::ipow(q[j], alpha);
    flux[j] = dphi[j] / (1.0 - p[j]);
  }
  const auto dflux = fourier_diff(flux, *field.grid, 1);
  ComplexVector out(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    const double denom = 1.0 - p[j];
    const double q_am1 = detail::ipow(q[j], alpha - 1);
    out[j] = -dflux[j] + alpha * q_am1 * std::norm(dphi[j]) / (denom * denom) * phi[j] - p[j] * phi[j];
  }
  return out;
}

std::pair<Vector, Vector> spatial_operator_radial(const RadialField& field, const ModelParams& params) {
  require(params.dim >= 2, ErrorCode::invalid_parameter, "radial operator needs dim >= 2");
  require_below_saturation(field.re, field.im, "spatial_operator_radial");
  const auto& grid = *field.grid;
  const double f = grid.ds_factor();
  const Vector as = f * (grid.diff1() * field.re);
  const Vector bs = f * (grid.diff1() * field.im);
  const Vector ass = (f * f) * (grid.diff2() * field.re);
  const Vector bss = (f * f) * (grid.diff2() * field.im);
  const auto& s = grid.s_nodes();
  Vector lr = Vector::Zero(grid.size());
  Vector li = Vector::Zero(grid.size());
  for (int k = 1; k < grid.size(); ++k) {
    const double la = 4.0 * s[k] * ass[k] + 2.0 * params.dim * as[k];
    const double lb = 4.0 * s[k] * bss[k] + 2.0 * params.dim * bs[k];
    detail::radial_operator_point<double>(field.re[k], field.im[k], as[k], bs[k], la, lb, s[k], params.alpha,
                                          lr[k], li[k]);
  }
  return {lr, li};
}

double stationary_residual_identity(const RadialProfile& profile, const ModelParams& params) {
  const auto field = RadialField::from_real(profile);
  const auto [lr, li] = spatial_operator_radial(field, params);
  double worst = 0.0;
  for (int k = 1; k < profile.grid->size(); ++k) {
    worst = std::max(worst, std::hypot(lr[k] + params.omega * field.re[k], li[k]));
  }
  return worst;
}

double stationary_residual_identity(const Field1D& field, const ModelParams& params) {
  const auto l = spatial_operator_1d(field, params.alpha);
  double worst = 0.0;
  for (std::size_t j = 0; j < l.size(); ++j) worst = std::max(worst, std::abs(l[j] + params.omega * field.values[j]));
  return worst;
}

}  // namespace quasisol
