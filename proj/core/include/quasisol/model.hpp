#pragma once

#include <memory>
#include <utility>

#include "quasisol/spectral.hpp"

namespace quasisol {

/// Saturation threshold 1/(alpha+1): solitary waves exist only for
/// 0 < omega < omega_star(alpha).
double omega_star(int alpha);

/// The problem triple (alpha, d, omega).
struct ModelParams {
  int alpha = 1;
  int dim = 1;
  double omega = 0.0;

  [[nodiscard]] double omega_star() const { return quasisol::omega_star(alpha); }
  /// Throws invalid_parameter / no_solitary_wave unless 0 < omega < omega_star.
  void require_solitary_range() const;
};

/// Surface area of the unit sphere in R^d, 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int dim);

/// |S^{d-1}| int_0^inf r^{d-1} f dr for samples f on grid, integrating the
/// interpolant exactly against the radial measure. No saturation check.
double radial_integral(const Vector& integrand, const ChebGrid& grid, int dim);

/// Complex field on a periodic 1D grid.
struct Field1D {
  std::shared_ptr<const Fourier1DGrid> grid;
  ComplexVector values;
};

/// Real radial samples on a Chebyshev grid in s = r^2.
struct RadialProfile {
  std::shared_ptr<const ChebGrid> grid;
  Vector values;
  double omega = 0.0;
};

/// Complex radial state stored as real and imaginary parts.
struct RadialField {
  std::shared_ptr<const ChebGrid> grid;
  Vector re;
  Vector im;

  static RadialField from_real(const RadialProfile& profile);
};

// ---- explicit 1D solitary wave -------------------------------------------

/// (1 + (omega*/omega - 1) cosh^2(alpha sqrt(omega) x))^{-1/(2 alpha)},
/// evaluated in log form so that large |x| underflows cleanly to zero.
double soliton_1d(const ModelParams& params, double x);

/// d/dx of soliton_1d.
double soliton_1d_dx(const ModelParams& params, double x);

/// Peak value (omega/omega*)^{1/(2 alpha)}.
double soliton_max(const ModelParams& params);

/// Inverse of soliton_max: omega* peak^{2 alpha}.
double fit_omega_from_max(double peak, int alpha);

struct RescaledProblem {
  double omega;
  double scale;  ///< x -> phi(scale * x) maps (a,b)-form solutions to the unit form
};

/// Maps the coupling form -b phi = ... - a |phi|^{2 alpha} phi to the unit
/// form with omega = b/a.
RescaledProblem rescale_ab(double a, double b);

/// Samples of soliton_1d on the periodic grid.
Field1D sample_soliton_1d(const ModelParams& params, std::shared_ptr<const Fourier1DGrid> grid);

// ---- functionals -----------------------------------------------------------

double mass_1d(const Field1D& field);
double energy_1d(const Field1D& field, int alpha);

double mass_radial(const RadialField& field, const ModelParams& params);
double mass_radial(const RadialProfile& profile, const ModelParams& params);
double energy_radial(const RadialField& field, const ModelParams& params);
double energy_radial(const RadialProfile& profile, const ModelParams& params);

// ---- spatial operator -------------------------------------------------------

/// L(phi) = -div(grad phi / (1 - |phi|^{2a})) + a |phi|^{2a-2} |grad phi|^2 phi
/// / (1 - |phi|^{2a})^2 - |phi|^{2a} phi, so that i phi_t = L(phi).
/// The flux divergence is taken literally with Fourier differentiation.
ComplexVector spatial_operator_1d(const Field1D& field, int alpha);

/// Radial L(phi) in s = r^2 with the flux divergence expanded by the chain
/// rule. Returns (Re L, Im L); the entries at s = s0 are zero.
std::pair<Vector, Vector> spatial_operator_radial(const RadialField& field, const ModelParams& params);

/// sup-norm of L(phi) + omega phi over the non-boundary nodes; zero for an
/// exact stationary state.
double stationary_residual_identity(const RadialProfile& profile, const ModelParams& params);
double stationary_residual_identity(const Field1D& field, const ModelParams& params);

/// Throws denominator_blowup when max |phi| >= 1.
void require_below_saturation(const Vector& re, const Vector& im, const char* where);
void require_below_saturation(const ComplexVector& values, const char* where);

}  // namespace quasisol
