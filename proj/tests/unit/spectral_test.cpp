#include <cmath>
#include <numbers>

#include <doctest.h>
#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "quasisol/spectral.hpp"

using namespace quasisol;

namespace {

Vector sample(const ChebGrid& g, auto f) {
  Vector v(g.size());
  for (int k = 0; k < g.size(); ++k) v[k] = f(g.l_nodes()[k]);
  return v;
}

// Chebyshev coefficients by solving the collocation system directly.
Vector coeffs_by_solve(const Vector& l, const Vector& values) {
  const int m = static_cast<int>(l.size());
  Matrix t(m, m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) t(k, j) = std::cos(j * std::acos(std::clamp(l[k], -1.0, 1.0)));
  }
  return t.partialPivLu().solve(values);
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("two-point differentiation matrix") {
    const Matrix d = cheb_diff_matrix(1);
    CHECK(d(0, 0) == doctest::Approx(0.5));
    CHECK(d(0, 1) == doctest::Approx(-0.5));
    CHECK(d(1, 0) == doctest::Approx(0.5));
    CHECK(d(1, 1) == doctest::Approx(-0.5));
  }

  TEST_CASE("nodes run from +1 to -1") {
    const ChebGrid g(2, 2.0);
    CHECK(g.l_nodes()[0] == doctest::Approx(1.0));
    CHECK(std::abs(g.l_nodes()[1]) < 1e-15);
    CHECK(g.l_nodes()[2] == doctest::Approx(-1.0));
    CHECK(g.s_nodes()[0] == doctest::Approx(2.0));
    CHECK(g.s_nodes()[2] == 0.0);
  }

  TEST_CASE("derivative of a constant vanishes") {
    for (int n : {4, 17, 64}) {
      const ChebGrid g(n, 1.0);
      CHECK((g.diff1() * Vector::Ones(g.size())).cwiseAbs().maxCoeff() < 1e-10 * n);
    }
  }

  TEST_CASE("polynomials are differentiated exactly") {
    for (int n : {8, 16, 32}) {
      const ChebGrid g(n, 1.0);
      for (int p = 1; p <= n; p += 3) {
        const Vector v = sample(g, [p](double l) { return std::pow(l, p); });
        const Vector dv = sample(g, [p](double l) { return p * std::pow(l, p - 1); });
        const Vector d2v = sample(g, [p](double l) { return p > 1 ? p * (p - 1) * std::pow(l, p - 2) : 0.0; });
        CHECK((g.diff1() * v - dv).cwiseAbs().maxCoeff() < 1e-10 * n);
        CHECK((g.diff2() * v - d2v).cwiseAbs().maxCoeff() < 1e-10 * n * n * n);
      }
    }
  }

  TEST_CASE("coefficients of basis functions") {
    const ChebGrid g(8, 1.0);
    const Vector t3 = sample(g, [](double l) { return 4 * l * l * l - 3 * l; });
    const Vector a = cheb_coeffs(t3);
    for (int m = 0; m < a.size(); ++m) CHECK(std::abs(a[m] - (m == 3 ? 1.0 : 0.0)) < 1e-14);
    const Vector one = cheb_coeffs(Vector::Ones(g.size()));
    for (int m = 0; m < one.size(); ++m) CHECK(std::abs(one[m] - (m == 0 ? 1.0 : 0.0)) < 1e-14);
  }

  TEST_CASE("exp coefficients agree with a direct collocation solve") {
    const ChebGrid g(30, 1.0);
    const Vector v = sample(g, [](double l) { return std::exp(l); });
    const Vector a = cheb_coeffs(v);
    CHECK((a - coeffs_by_solve(g.l_nodes(), v)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(a[30]) < 1e-13);
    CHECK(trailing_coefficient(a) < 1e-13);
  }

  TEST_CASE("coefficient round trip") {
    const ChebGrid g(40, 1.0);
    const Vector v = sample(g, [](double l) { return std::sin(3 * l) / (2 + l); });
    const Vector a = cheb_coeffs(v);
    for (int k = 0; k < g.size(); ++k) CHECK(std::abs(cheb_eval(a, g.l_nodes()[k]) - v[k]) < 1e-12);
  }

  TEST_CASE("Clenshaw-Curtis") {
    const ChebGrid g2(2, 1.0);
    CHECK(g2.weights()[0] == doctest::Approx(1.0 / 3));
    CHECK(g2.weights()[1] == doctest::Approx(4.0 / 3));
    CHECK(g2.weights()[2] == doctest::Approx(1.0 / 3));
    CHECK(clenshaw_curtis(sample(g2, [](double l) { return l * l; }), g2) == doctest::Approx(2.0 / 3).epsilon(1e-15));

    const ChebGrid g(30, 1.0);
    using boost::math::quadrature::gauss_kronrod;
    const double reference = gauss_kronrod<double, 61>::integrate([](double l) { return std::exp(l); }, -1.0, 1.0);
    CHECK(std::abs(clenshaw_curtis(sample(g, [](double l) { return std::exp(l); }), g) - reference) < 1e-12);

    for (int n : {8, 16, 33}) {
      const ChebGrid gn(n, 1.0);
      for (int p = 0; p <= n; ++p) {
        const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
        CHECK(std::abs(clenshaw_curtis(sample(gn, [p](double l) { return std::pow(l, p); }), gn) - exact) < 1e-10 * n);
      }
    }
  }

  TEST_CASE("radial weights against the lower incomplete gamma function") {
    // int_{-1}^{1} (1+l)^b e^{-a(1+l)} dl = a^{-b-1} gamma(b+1, 2a)
    for (int dim : {2, 3, 4, 5}) {
      const double b = 0.5 * (dim - 2);
      for (double a : {0.5, 20.0}) {
        const ChebGrid g(120, 1.0);
        const Vector f = sample(g, [a](double l) { return std::exp(-a * (1.0 + l)); });
        const double exact = std::pow(a, -b - 1.0) * boost::math::tgamma_lower(b + 1.0, 2.0 * a);
        CAPTURE(dim);
        CAPTURE(a);
        CHECK(std::abs(f.dot(radial_weights(g.n(), dim)) - exact) < 1e-14 * std::max(1.0, exact));
      }
    }
    // plain Clenshaw-Curtis in two dimensions
    const ChebGrid g(17, 1.0);
    CHECK((radial_weights(17, 2) - g.weights()).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("Fourier eigenfunctions") {
    const double lx = 3.0;
    const Fourier1DGrid g(128, lx);
    ComplexVector wave(128), sine(128), constant(128, Complex(0.7, -0.2));
    for (int j = 0; j < 128; ++j) {
      const double x = g.x_nodes()[j];
      wave[j] = std::exp(Complex(0.0, x / lx));
      sine[j] = std::sin(3 * x / lx);
    }
    const auto d1 = fourier_diff(wave, g, 1);
    const auto d2 = fourier_diff(sine, g, 2);
    const auto d0 = fourier_diff(constant, g, 1);
    for (int j = 0; j < 128; ++j) {
      CHECK(std::abs(d1[j] - Complex(0.0, 1.0 / lx) * wave[j]) < 1e-12);
      CHECK(std::abs(d2[j] + 9.0 / (lx * lx) * sine[j]) < 1e-12);
      CHECK(std::abs(d0[j]) < 1e-12);
    }
  }

  TEST_CASE("Fourier grid spans lx [-pi, pi)") {
    const Fourier1DGrid g(64, 2.0);
    CHECK(g.x_nodes().front() == doctest::Approx(-2.0 * std::numbers::pi));
    CHECK(g.dx() == doctest::Approx(4.0 * std::numbers::pi / 64));
    CHECK_THROWS(Fourier1DGrid(48, 1.0));
  }

  TEST_CASE("tail ratio separates smooth and rough fields") {
    const Fourier1DGrid g(256, 10.0);
    ComplexVector smooth(256), rough(256);
    for (int j = 0; j < 256; ++j) {
      const double x = g.x_nodes()[j];
      smooth[j] = std::exp(-x * x);
      rough[j] = j % 2 == 0 ? 1.0 : 0.0;
    }
    CHECK(fourier_tail_ratio(smooth, g) < 1e-14);
    CHECK(fourier_tail_ratio(rough, g) > 0.5);
  }
}
