#include <cmath>

#include <doctest.h>

#include "oracles/linear_cn.hpp"
#include "quasisol/evolver.hpp"
#include "quasisol/groundstate.hpp"

using namespace quasisol;

namespace {

const ModelParams kParams{1, 3, 0.1};

std::shared_ptr<const ChebGrid> grid(int n = 200, double s0 = 1e3) { return std::make_shared<const ChebGrid>(n, s0); }

const RadialField& ground_field() {
  static const RadialField f = RadialField::from_real(
      newton_relaxed(default_seed(grid()), kParams, {.mu = 0.1, .tol = 1e-12, .mu_growth = 2.0}).profile);
  return f;
}

double sup_diff(const RadialField& a, const Vector& re, const Vector& im) {
  return std::max((a.re - re).cwiseAbs().maxCoeff(), (a.im - im).cwiseAbs().maxCoeff());
}

Vector stacked(const RadialField& f) {
  Vector v(2 * f.re.size());
  v << f.re, f.im;
  return v;
}

}  // namespace

TEST_SUITE("evolver") {
  TEST_CASE("right-hand side on the ground state") {
    const auto& g = ground_field();
    const auto r = rhs_radial(g, kParams);
    CHECK(sup_diff(r, -kParams.omega * g.im, kParams.omega * g.re) < 1e-8);

    const RadialField zero{g.grid, Vector::Zero(201), Vector::Zero(201)};
    CHECK(sup_diff(rhs_radial(zero, kParams), zero.re, zero.im) == 0.0);
    CHECK(cn_residual(zero, zero, 0.01, kParams).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("residual at a frozen state") {
    const auto& g = ground_field();
    for (double h : {1e-2, 1e-3}) {
      const Vector res = cn_residual(g, g, h, kParams);
      const Vector f = stacked(rhs_radial(g, kParams));
      CHECK(std::abs(res.lpNorm<Eigen::Infinity>() - h * f.lpNorm<Eigen::Infinity>()) <= h * h);
    }
  }

  TEST_CASE("small amplitudes follow the linear scheme") {
    const auto gr = grid(60, 200.0);
    const double eps = 1e-4;
    RadialField start = gaussian_initial(0.9, 10.0, gr);
    start.re *= eps / 0.9;
    const double h = 0.05;
    const auto [re, im] = oracle::linear_cn_step(*gr, 3, start.re, start.im, h);
    CnStepInfo info;
    const auto next = cn_newton_step(start, h, kParams, 1e-16, 25, &info);
    CHECK(sup_diff(next, re, im) < 1e-12);
    const RadialField exact{gr, re, im};
    // The oracle misses only the O(eps^3) nonlinear terms.
    CHECK(cn_residual(exact, start, h, kParams).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("Jacobian matches finite differences") {
    const auto gr = grid(40, 200.0);
    RadialField f = gaussian_initial(0.8, 30.0, gr);
    f.im = 0.3 * f.re.cwiseProduct((gr->s_nodes() / 50.0).array().cos().matrix());
    const double h = 0.02;
    const Matrix an = cn_jacobian(f, h, kParams);
    const int m = gr->size();
    Matrix fd(2 * m, 2 * m);
    const double d = 1e-6;
    for (int c = 0; c < 2 * m; ++c) {
      RadialField plus = f, minus = f;
      (c < m ? plus.re[c] : plus.im[c - m]) += d;
      (c < m ? minus.re[c] : minus.im[c - m]) -= d;
      fd.col(c) = (cn_residual(plus, f, h, kParams) - cn_residual(minus, f, h, kParams)) / (2 * d);
    }
    CHECK((an - fd).norm() / an.norm() < 1e-6);
  }

  TEST_CASE("vanishing step returns the old state") {
    const auto& g = ground_field();
    const auto next = cn_newton_step(g, 1e-14, kParams);
    CHECK(sup_diff(next, g.re, g.im) < 1e-12);
  }

  TEST_CASE("second-order convergence on the stationary orbit") {
    const auto& g = ground_field();
    auto error_at_one = [&](int steps) {
      RadialField f = g;
      const double h = 1.0 / steps;
      for (int i = 0; i < steps; ++i) f = cn_newton_step(f, h, kParams, 1e-13);
      return sup_diff(f, std::cos(kParams.omega) * g.re, std::sin(kParams.omega) * g.re);
    };
    const double e1 = error_at_one(10);
    const double e2 = error_at_one(20);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.5 / 4.0));
  }

  TEST_CASE("initial data") {
    const auto gr = grid();
    const auto gauss = gaussian_initial(0.7, 20.0, gr);
    CHECK(gauss.re[200] == doctest::Approx(0.7));
    CHECK(gauss.re[0] == 0.0);
    CHECK(gauss.im.cwiseAbs().maxCoeff() == 0.0);
    const auto seed = default_seed(gr);
    const auto same = gaussian_initial(0.9, 50.0, gr);
    CHECK((same.re.tail(200) - seed.values.tail(200)).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(gaussian_initial(1.2, 20.0, gr), Error);

    RunRadialConfig c;
    c.initial = SolitonInitial{0.1, 1.01};
    const auto scaled = radial_initial(c, gr);
    CHECK(scaled.re[200] == doctest::Approx(1.01 * ground_field().re[200]).epsilon(1e-9));
    c.initial = SolitonInitial{0.4, 1.01};
    try {
      radial_initial(c, gr);
      FAIL("expected saturation-violation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::saturation_violation);
    }
  }

  TEST_CASE("short run bookkeeping") {
    RunRadialConfig c;
    c.grid = {80, 400.0};
    c.h = 0.01;
    c.nt = 40;
    c.diag_stride = 4;
    c.snapshot_stride = 20;
    const auto r = evolve_radial(c);
    CHECK(r.status == RunStatus::completed);
    CHECK(r.final_time == doctest::Approx(0.4));
    CHECK(r.diagnostics.size() == 11);
    CHECK(r.snapshots.size() == 3);
    CHECK(r.max_cn_residual < c.newton_tol);
    CHECK(r.newton_iterations >= 40);
    CHECK(r.diagnostics.max_delta() < 1e-3);
  }
}
