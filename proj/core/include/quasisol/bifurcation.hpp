#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quasisol/groundstate.hpp"

namespace quasisol {

enum class Stability { stable, unstable, undetermined_endpoint };
std::string_view to_string(Stability s);

struct BifurcationPoint {
  double omega = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double dmass_domega = 0.0;
  Stability stability = Stability::undetermined_endpoint;
};

enum class AsymptoteLaw { log_divergence_star, power_divergence_star, power_law_zero };
std::string_view to_string(AsymptoteLaw law);

struct AsymptoteFit {
  AsymptoteLaw law = AsymptoteLaw::power_law_zero;
  double coefficient = 0.0;  ///< log law: slope in -ln(omega*-omega); power laws: prefactor
  double exponent = 0.0;     ///< power laws only
  double window_lo = 0.0;    ///< omega range used
  double window_hi = 0.0;
  double residual = 0.0;     ///< RMS residual of the least-squares fit
  std::string note;
};

/// 1D mass from the reduced integral
/// (2/a) w^{1/a-1/2} / w*^{1/a} int_0^inf (1+z^2)^{-1/a} ((1-w/w*)+z^2)^{-1/2} dz.
double mass_1d_reduced(int alpha, double omega);

/// dM/domega in 1D by differentiating the reduced integral under the sign.
double mass_1d_reduced_slope(int alpha, double omega);

/// 1D energy by quadrature of the energy functional on the closed-form soliton.
double energy_1d_closed(int alpha, double omega);

/// lim_{omega->0} M(omega) / omega^{1/a - 1/2} in 1D:
/// (2 / (a w*^{1/a})) int_0^inf (1+z^2)^{-1/a-1/2} dz.
double mass_zero_constant_1d(int alpha);

/// Fills dmass_domega by central differences on the (possibly non-uniform)
/// omega grid and assigns stability labels; first/last points are endpoints.
void classify(std::vector<BifurcationPoint>& points);

/// Closed-form 1D sweep (reduced-integral mass, quadrature energy).
std::vector<BifurcationPoint> sweep_1d(int alpha, const std::vector<double>& omegas);

struct RadialSweepOptions {
  SolverControls controls{.mu = 0.1, .tol = 1e-10, .max_iter = 5000, .clamp = true, .mu_growth = 2.0};
  GridSpec grid{200, 1e3};
  /// Frequency at which default_seed is used to start the continuation.
  double seed_omega = 0.1;
};

struct RadialSweepResult {
  std::vector<BifurcationPoint> points;
  std::vector<GroundState> states;
  std::optional<double> failed_omega;
  std::string failure_message;
};

/// Ground states along the sorted omega grid by continuation (d >= 2). The
/// continuation starts from default_seed at seed_omega and walks to the
/// first requested frequency before recording.
RadialSweepResult sweep_radial(int alpha, int dim, const std::vector<double>& omegas,
                               const RadialSweepOptions& options = {});

/// Critical frequency where dM/domega changes sign (1D), by bisection on the
/// central-difference slope of mass_1d_reduced until the bracket is <= tol.
double find_omega_c_1d(int alpha, double lo, double hi, double tol = 1e-6);

/// Sign change of dmass_domega in sweep data, located by linear
/// interpolation between neighbouring grid points.
double find_omega_c(const std::vector<BifurcationPoint>& points);

/// Fits near omega*: log law for dim == 1, power law (omega*-omega)^exponent
/// for dim >= 2. Needs 5 points with omega*-omega spanning two decades (d = 1)
/// or a factor of 3 (d >= 2). The note records which theoretical constant the 1D slope
/// agrees with.
AsymptoteFit fit_asymptote_star(const std::vector<BifurcationPoint>& points, int alpha, int dim);

/// Log-log exponent fit of M against omega near zero. When reference is
/// given, the note compares it with the fitted prefactor.
AsymptoteFit fit_asymptote_zero(const std::vector<BifurcationPoint>& points, int alpha, int dim,
                                std::optional<double> reference = std::nullopt);

/// E(M) has two branches meeting at the mass minimum.
struct CuspReport {
  bool non_functional = false;
  double mass_min = 0.0;
  double omega_at_min = 0.0;
  double max_energy_gap = 0.0;  ///< largest E_upper - E_lower at common mass
};
CuspReport energy_mass_cusp(const std::vector<BifurcationPoint>& points);

// Integrand machinery for the 1D mass in the variable z.
double appendix_f(int alpha, double omega, double z);
double appendix_df(int alpha, double omega, double z);
double appendix_d2f(int alpha, double omega, double z);
double appendix_G(int alpha, double omega, double z);

}  // namespace quasisol
