#include "quasisol/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "quasisol/errors.hpp"

namespace quasisol {

namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::tanh_sinh;

constexpr double kQuadTol = 1e-14;

// Boost 1.74 declares integrate() const but defines it non-const, and the
// rules grow their abscissa tables lazily, hence per-thread mutable objects.
tanh_sinh<double>& tanh_sinh_rule() {
  thread_local tanh_sinh<double> rule(15);
  return rule;
}

exp_sinh<double>& exp_sinh_rule() {
  thread_local exp_sinh<double> rule(15);
  return rule;
}

void require_open_range(int alpha, double omega) {
  require(alpha >= 1, ErrorCode::invalid_parameter, "alpha must be >= 1");
  require(omega > 0.0 && omega < omega_star(alpha), ErrorCode::invalid_parameter,
          "omega must lie in (0, omega*)");
}

// int_0^inf (1+z^2)^{-1/a} (eps + z^2)^{-p} dz, p in {1/2, 3/2, 5/2}.
//
// On [0, 1] the substitution z = sqrt(eps) sinh(u) absorbs the near-singular
// factor at the origin; the tail [1, inf) is mapped to theta in [pi/4, pi/2)
// by z = tan(theta).
double z_integral(int alpha, double eps, double p) {
  const double inv_a = 1.0 / alpha;
  const double upper = std::asinh(1.0 / std::sqrt(eps));
  auto head = [&](double u) {
    const double sh = std::sinh(u);
    const double ch = std::cosh(u);
    return std::pow(1.0 + eps * sh * sh, -inv_a) * std::pow(ch, 1.0 - 2.0 * p);
  };
  const double head_value = std::pow(eps, 0.5 - p) * tanh_sinh_rule().integrate(head, 0.0, upper, kQuadTol);

  const double pi = std::numbers::pi;
  auto tail = [&](double theta, double complement) {
    // complement > 0 is the distance to pi/2, where cos(theta) = sin(complement).
    const double c = (complement > 0.0) ? std::sin(complement) : std::cos(theta);
    const double s = std::sin(theta);
    return std::pow(c, 2.0 * inv_a - 2.0 + 2.0 * p) * std::pow(eps * c * c + s * s, -p);
  };
  const double tail_value = tanh_sinh_rule().integrate(tail, pi / 4.0, pi / 2.0, kQuadTol);
  return head_value + tail_value;
}

double mass_prefactor(int alpha, double omega) {
  const double inv_a = 1.0 / alpha;
  return (2.0 * inv_a) * std::pow(omega, inv_a - 0.5) / std::pow(omega_star(alpha), inv_a);
}

struct LineFit {
  double slope;
  double intercept;
  double rms;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, ErrorCode::insufficient_window, "fit window has no spread");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (slope * x[i] + intercept);
    ss += r * r;
  }
  return {slope, intercept, std::sqrt(ss / n)};
}

double central_slope(int alpha, double omega) {
  const double star = omega_star(alpha);
  const double h = std::min(1e-5, 0.5 * std::min(omega, star - omega));
  return (mass_1d_reduced(alpha, omega + h) - mass_1d_reduced(alpha, omega - h)) / (2.0 * h);
}

}  // namespace

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::undetermined_endpoint: return "undetermined-endpoint";
  }
  return "unknown";
}

std::string_view to_string(AsymptoteLaw law) {
  switch (law) {
    case AsymptoteLaw::log_divergence_star: return "log-divergence-star";
    case AsymptoteLaw::power_divergence_star: return "power-divergence-star";
    case AsymptoteLaw::power_law_zero: return "power-law-zero";
  }
  return "unknown";
}

double mass_1d_reduced(int alpha, double omega) {
  require_open_range(alpha, omega);
  const double eps = 1.0 - omega / omega_star(alpha);
  return mass_prefactor(alpha, omega) * z_integral(alpha, eps, 0.5);
}

double mass_1d_reduced_slope(int alpha, double omega) {
  require_open_range(alpha, omega);
  const double star = omega_star(alpha);
  const double eps = 1.0 - omega / star;
  const double inv_a = 1.0 / alpha;
  const double mass = mass_prefactor(alpha, omega) * z_integral(alpha, eps, 0.5);
  const double df_integral = z_integral(alpha, eps, 1.5) / (2.0 * star);
  return (inv_a - 0.5) * mass / omega + mass_prefactor(alpha, omega) * df_integral;
}

double energy_1d_closed(int alpha, double omega) {
  require_open_range(alpha, omega);
  const double c = omega_star(alpha) / omega - 1.0;
  const double log_c = std::log(c);
  auto integrand = [&](double y) {
    const double log_cosh = y + std::log1p(std::exp(-2.0 * y)) - std::numbers::ln2;
    const double lc = log_c + 2.0 * log_cosh;
    const double log_base = std::max(lc, 0.0) + std::log1p(std::exp(-std::abs(lc)));
    const double phi2 = std::exp(-log_base / alpha);
    const double frac = 1.0 / (1.0 + std::exp(-lc));     // 1 - phi^{2a}
    const double pfrac = 1.0 / (1.0 + std::exp(lc));     // phi^{2a}
    const double t = std::tanh(y);
    return 0.5 * omega * phi2 * t * t * frac - phi2 * pfrac / (2.0 * (alpha + 1));
  };
  // Plateau edge of the profile in y.
  const double edge = std::max(0.0, -0.5 * log_c);
  double total = 0.0;
  if (edge > 0.0) total += tanh_sinh_rule().integrate(integrand, 0.0, edge, kQuadTol);
  total += exp_sinh_rule().integrate([&](double y) { return integrand(y + edge); }, 0.0,
                                     std::numeric_limits<double>::infinity(), kQuadTol);
  return 2.0 * total / (alpha * std::sqrt(omega));
}

double mass_zero_constant_1d(int alpha) {
  require(alpha >= 1, ErrorCode::invalid_parameter, "alpha must be >= 1");
  const double e = 1.0 / alpha + 0.5;
  // z = tan(theta): int_0^{pi/2} cos^{2e-2}(theta) d theta
  auto f = [&](double theta, double complement) {
    const double c = (complement > 0.0) ? std::sin(complement) : std::cos(theta);
    return std::pow(c, 2.0 * e - 2.0);
  };
  const double integral = tanh_sinh_rule().integrate(f, 0.0, std::numbers::pi / 2.0, kQuadTol);
  return 2.0 / (alpha * std::pow(omega_star(alpha), 1.0 / alpha)) * integral;
}

void classify(std::vector<BifurcationPoint>& points) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto& pt = points[i];
    if (n < 2) {
      pt.dmass_domega = 0.0;
      pt.stability = Stability::undetermined_endpoint;
      continue;
    }
    const std::size_t lo = (i == 0) ? 0 : i - 1;
    const std::size_t hi = (i + 1 == n) ? n - 1 : i + 1;
    pt.dmass_domega = (points[hi].mass - points[lo].mass) / (points[hi].omega - points[lo].omega);
    if (i == 0 || i + 1 == n) {
      pt.stability = Stability::undetermined_endpoint;
    } else {
      pt.stability = pt.dmass_domega > 0.0 ? Stability::stable : Stability::unstable;
    }
  }
}

std::vector<BifurcationPoint> sweep_1d(int alpha, const std::vector<double>& omegas) {
  require(!omegas.empty(), ErrorCode::invalid_parameter, "empty omega grid");
  std::vector<BifurcationPoint> points;
  points.reserve(omegas.size());
  for (double w : omegas) {
    points.push_back({w, mass_1d_reduced(alpha, w), energy_1d_closed(alpha, w), 0.0,
                      Stability::undetermined_endpoint});
  }
  classify(points);
  return points;
}

RadialSweepResult sweep_radial(int alpha, int dim, const std::vector<double>& omegas,
                               const RadialSweepOptions& options) {
  require(dim >= 2, ErrorCode::invalid_parameter, "sweep_radial needs dim >= 2");
  require(!omegas.empty(), ErrorCode::invalid_parameter, "empty omega grid");
  require(std::is_sorted(omegas.begin(), omegas.end()), ErrorCode::invalid_parameter,
          "omega grid must be increasing");
  auto grid = std::make_shared<const ChebGrid>(options.grid.n, options.grid.s0);
  const ModelParams params{alpha, dim, 0.0};

  const std::vector<double> warm = warmup_path(options.seed_omega, omegas.front());
  RadialSweepResult out;
  std::optional<RadialProfile> seed;
  if (!warm.empty()) {
    ContinuationPlan plan;
    plan.omega_values = warm;
    auto warm_result = continuation(plan, params, options.controls, grid);
    if (!warm_result.ok()) {
      out.failed_omega = warm_result.failed_omega;
      out.failure_message = warm_result.failure_message;
      return out;
    }
    seed = warm_result.states.back().profile;
  }

  ContinuationPlan plan;
  plan.omega_values = omegas;
  auto result = continuation(plan, params, options.controls, grid, seed);
  for (auto& gs : result.states) {
    ModelParams p = params;
    p.omega = gs.profile.omega;
    out.points.push_back(
        {p.omega, mass_radial(gs.profile, p), energy_radial(gs.profile, p), 0.0, Stability::undetermined_endpoint});
  }
  classify(out.points);
  out.states = std::move(result.states);
  out.failed_omega = result.failed_omega;
  out.failure_message = result.failure_message;
  return out;
}

double find_omega_c_1d(int alpha, double lo, double hi, double tol) {
  require_open_range(alpha, lo);
  require_open_range(alpha, hi);
  require(lo < hi, ErrorCode::invalid_parameter, "bracket must satisfy lo < hi");
  double slo = central_slope(alpha, lo);
  const double shi = central_slope(alpha, hi);
  if ((slo > 0.0) == (shi > 0.0)) {
    fail(ErrorCode::no_sign_change, "dM/domega has the same sign at both ends of the bracket");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double sm = central_slope(alpha, mid);
    if ((sm > 0.0) == (slo > 0.0)) {
      lo = mid;
      slo = sm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double find_omega_c(const std::vector<BifurcationPoint>& points) {
  for (std::size_t i = 1; i + 2 < points.size(); ++i) {
    const double a = points[i].dmass_domega;
    const double b = points[i + 1].dmass_domega;
    if ((a > 0.0) != (b > 0.0)) {
      const double t = a / (a - b);
      return points[i].omega + t * (points[i + 1].omega - points[i].omega);
    }
  }
  fail(ErrorCode::no_sign_change, "dM/domega does not change sign on the sweep");
}

AsymptoteFit fit_asymptote_star(const std::vector<BifurcationPoint>& points, int alpha, int dim) {
  require(points.size() >= 5, ErrorCode::insufficient_window, "need at least 5 points near omega*");
  const double star = omega_star(alpha);
  std::vector<double> gap;
  for (const auto& p : points) {
    require(p.omega > 0.0 && p.omega < star, ErrorCode::insufficient_window, "fit point outside (0, omega*)");
    gap.push_back(star - p.omega);
  }
  const auto [gmin, gmax] = std::minmax_element(gap.begin(), gap.end());
  const double decades = std::log10(*gmax / *gmin);
  // Two decades in 1D; a factor of 3 in omega* - omega for dim >= 2.
  const double needed = (dim == 1) ? 2.0 : std::log10(3.0);
  require(decades >= needed - 1e-9, ErrorCode::insufficient_window,
          "omega*-omega spans " + num(decades) + " decades, need " + num(needed));

  AsymptoteFit fit;
  fit.window_lo = star - *gmax;
  fit.window_hi = star - *gmin;
  std::vector<double> x, y;
  if (dim == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      x.push_back(-std::log(gap[i]));
      y.push_back(points[i].mass);
    }
    const auto lf = least_squares(x, y);
    fit.law = AsymptoteLaw::log_divergence_star;
    fit.coefficient = lf.slope;
    fit.residual = lf.rms;
    const double full = 1.0 / (alpha * std::sqrt(star));
    const double half = 0.5 * full;
    const double dev_full = std::abs(lf.slope / full - 1.0);
    const double dev_half = std::abs(lf.slope / half - 1.0);
    std::ostringstream note;
    note << "slope " << lf.slope << "; 1/(alpha*sqrt(omega*)) = " << full << " (rel dev " << dev_full
         << "); 1/(2*alpha*sqrt(omega*)) = " << half << " (rel dev " << dev_half << "); matches "
         << (dev_full < dev_half ? "1/(alpha*sqrt(omega*))" : "1/(2*alpha*sqrt(omega*))");
    fit.note = note.str();
  } else {
    for (std::size_t i = 0; i < points.size(); ++i) {
      x.push_back(std::log(gap[i]));
      y.push_back(std::log(points[i].mass));
    }
    const auto lf = least_squares(x, y);
    fit.law = AsymptoteLaw::power_divergence_star;
    fit.exponent = lf.slope;
    fit.coefficient = std::exp(lf.intercept);
    fit.residual = lf.rms;
    fit.note = "expected exponent " + std::to_string(-dim);
  }
  return fit;
}

AsymptoteFit fit_asymptote_zero(const std::vector<BifurcationPoint>& points, int alpha, int dim,
                                std::optional<double> reference) {
  require(points.size() >= 3, ErrorCode::insufficient_window, "need at least 3 points near zero");
  std::vector<double> x, y;
  double wmin = points.front().omega, wmax = points.front().omega;
  for (const auto& p : points) {
    require(p.omega > 0.0 && p.mass > 0.0, ErrorCode::insufficient_window, "fit needs positive omega and mass");
    x.push_back(std::log(p.omega));
    y.push_back(std::log(p.mass));
    wmin = std::min(wmin, p.omega);
    wmax = std::max(wmax, p.omega);
  }
  require(std::log10(wmax / wmin) >= 1.0 - 1e-9, ErrorCode::insufficient_window,
          "omega window must span at least one decade");
  const auto lf = least_squares(x, y);
  AsymptoteFit fit;
  fit.law = AsymptoteLaw::power_law_zero;
  fit.exponent = lf.slope;
  fit.coefficient = std::exp(lf.intercept);
  fit.residual = lf.rms;
  fit.window_lo = wmin;
  fit.window_hi = wmax;
  std::ostringstream note;
  note << "expected exponent " << (1.0 / alpha - 0.5 * dim);
  if (reference) note << "; reference prefactor " << *reference << " (rel dev " << (fit.coefficient / *reference - 1.0) << ")";
  fit.note = note.str();
  return fit;
}

CuspReport energy_mass_cusp(const std::vector<BifurcationPoint>& points) {
  CuspReport report;
  if (points.size() < 3) return report;
  const auto it = std::min_element(points.begin(), points.end(),
                                   [](const auto& a, const auto& b) { return a.mass < b.mass; });
  const std::size_t imin = static_cast<std::size_t>(it - points.begin());
  report.mass_min = it->mass;
  report.omega_at_min = it->omega;
  if (imin == 0 || imin + 1 == points.size()) return report;

  // Upper branch: omega below the minimum (mass decreasing in omega);
  // lower branch: omega above it. Compare E at common mass levels.
  auto interp = [](const std::vector<BifurcationPoint>& branch, double m) -> std::optional<double> {
    for (std::size_t i = 0; i + 1 < branch.size(); ++i) {
      const double m0 = branch[i].mass, m1 = branch[i + 1].mass;
      if ((m - m0) * (m - m1) <= 0.0 && m0 != m1) {
        const double t = (m - m0) / (m1 - m0);
        return branch[i].energy + t * (branch[i + 1].energy - branch[i].energy);
      }
    }
    return std::nullopt;
  };
  std::vector<BifurcationPoint> upper(points.begin(), points.begin() + static_cast<long>(imin) + 1);
  std::vector<BifurcationPoint> lower(points.begin() + static_cast<long>(imin), points.end());
  double top = std::min(upper.front().mass, lower.back().mass);
  if (!(top > report.mass_min)) return report;
  int probes = 0, separated = 0;
  for (int k = 1; k <= 20; ++k) {
    const double m = report.mass_min + (top - report.mass_min) * k / 20.0;
    const auto eu = interp(upper, m);
    const auto el = interp(lower, m);
    if (!eu || !el) continue;
    ++probes;
    const double gap = *eu - *el;
    report.max_energy_gap = std::max(report.max_energy_gap, gap);
    if (gap > 0.0) ++separated;
  }
  report.non_functional = probes > 0 && separated == probes;
  return report;
}

double appendix_f(int alpha, double omega, double z) {
  require_open_range(alpha, omega);
  require(z > 0.0, ErrorCode::invalid_parameter, "z must be positive");
  const double eps = 1.0 - omega / omega_star(alpha);
  return std::pow(1.0 + z * z, -1.0 / alpha) * std::pow(eps + z * z, -0.5);
}

double appendix_df(int alpha, double omega, double z) {
  require_open_range(alpha, omega);
  require(z > 0.0, ErrorCode::invalid_parameter, "z must be positive");
  const double star = omega_star(alpha);
  const double eps = 1.0 - omega / star;
  return std::pow(1.0 + z * z, -1.0 / alpha) * std::pow(eps + z * z, -1.5) / (2.0 * star);
}

double appendix_d2f(int alpha, double omega, double z) {
  require_open_range(alpha, omega);
  require(z > 0.0, ErrorCode::invalid_parameter, "z must be positive");
  const double star = omega_star(alpha);
  const double eps = 1.0 - omega / star;
  return 3.0 / (4.0 * star * star) * std::pow(1.0 + z * z, -1.0 / alpha) * std::pow(eps + z * z, -2.5);
}

double appendix_G(int alpha, double omega, double z) {
  require_open_range(alpha, omega);
  require(z > 0.0, ErrorCode::invalid_parameter, "z must be positive");
  const double a = alpha;
  const double ratio = omega / omega_star(alpha);
  const double w = (1.0 - ratio) + z * z;
  return (3.0 * a - 2.0) / (3.0 * a) * (a - 2.0) / a * w * w - 2.0 * (a - 2.0) / (3.0 * a) * w * ratio +
         ratio * ratio;
}

}  // namespace quasisol
