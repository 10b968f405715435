#include <cmath>

#include <doctest.h>

#include "quasisol/diagnostics.hpp"
#include "quasisol/model.hpp"

using namespace quasisol;

TEST_SUITE("diagnostics") {
  TEST_CASE("energy and mass drift") {
    Diagnostics d;
    d.record(0.0, 0.9, 2.0, -1.0);
    d.record(0.1, 0.9, 2.002, -1.001);
    d.record(0.2, 0.9, 1.999, -0.9995);
    CHECK(d.delta[0] == 0.0);
    CHECK(d.max_delta() == doctest::Approx(1e-3));
    CHECK(d.max_mass_drift() == doctest::Approx(1e-3));
  }

  TEST_CASE("final frequency from a constant maximum") {
    std::vector<double> t, l;
    for (int i = 0; i <= 100; ++i) t.push_back(0.1 * i), l.push_back(0.97928);
    const auto fit = fit_final_omega(t, l, 3);
    CHECK(fit.omega == doctest::Approx(0.22049).epsilon(1e-4));
    CHECK(fit.window_lo == doctest::Approx(9.0));
    CHECK(fit.window_hi == doctest::Approx(10.0));
    CHECK(fit.samples == 11);
  }

  TEST_CASE("oscillating maximum") {
    std::vector<double> t, l;
    for (int i = 0; i <= 1000; ++i) t.push_back(0.01 * i), l.push_back(0.9 + 0.01 * std::sin(37.0 * 0.01 * i));
    const auto fit = fit_final_omega(t, l, 3);
    CHECK(std::abs(fit.omega - fit_omega_from_max(0.9, 3)) <= 0.002);
  }

  TEST_CASE("fit errors") {
    std::vector<double> t(20), l(20, 1.0);
    for (int i = 0; i < 20; ++i) t[i] = i;
    try {
      fit_final_omega(t, l, 3);
      FAIL("expected invalid-parameter");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_parameter);
    }
    try {
      fit_final_omega({0, 1, 2}, {0.5, 0.5, 0.5}, 3);
      FAIL("expected too-few-samples");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::too_few_samples);
    }
    try {
      fit_final_omega(t, std::vector<double>(19, 0.5), 3);
      FAIL("expected length-mismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::length_mismatch);
    }
  }
}
