#include "oracles/quadrature.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

namespace {

struct Pieces {
  double phi;
  double dphi;
  double one_minus_p;  // 1 - phi^{2a}
};

// phi = (1 + c cosh^2 y)^{-1/(2a)}, y = a sqrt(w) x, c = w*/w - 1.
Pieces pieces(int alpha, double omega, double x) {
  const double star = 1.0 / (alpha + 1);
  const double c = star / omega - 1.0;
  const double y = alpha * std::sqrt(omega) * x;
  const double ay = std::abs(y);
  const double log_cosh2 = 2.0 * (ay + std::log1p(std::exp(-2.0 * ay)) - std::log(2.0));
  const double log_ccosh2 = std::log(c) + log_cosh2;
  // log(1 + c cosh^2) without overflow
  const double log_den = log_ccosh2 > 0 ? log_ccosh2 + std::log1p(std::exp(-log_ccosh2)) : std::log1p(std::exp(log_ccosh2));
  const double phi = std::exp(-log_den / (2.0 * alpha));
  const double g = 1.0 / (1.0 + std::exp(-log_ccosh2));
  return {phi, -std::sqrt(omega) * phi * std::tanh(y) * g, g};
}

template <class F>
double integrate(F f) {
  using boost::math::quadrature::gauss_kronrod;
  return 2.0 * gauss_kronrod<double, 61>::integrate(f, 0.0, 200.0, 20, 1e-15);
}

}  // namespace

double soliton_1d(int alpha, double omega, double x) { return pieces(alpha, omega, x).phi; }

double soliton_mass_1d(int alpha, double omega) {
  return integrate([&](double x) {
    const double p = pieces(alpha, omega, x).phi;
    return p * p;
  });
}

double soliton_energy_1d(int alpha, double omega) {
  return integrate([&](double x) {
    const auto q = pieces(alpha, omega, x);
    return 0.5 * q.dphi * q.dphi / q.one_minus_p - std::pow(q.phi, 2 * alpha + 2) / (2.0 * alpha + 2.0);
  });
}

}  // namespace oracle
