#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles/shooting.hpp"
#include "quasisol/groundstate.hpp"
#include "quasisol/model.hpp"

using namespace quasisol;

namespace {

const ModelParams kParams{1, 3, 0.1};

std::shared_ptr<const ChebGrid> grid(int n = 200, double s0 = 1e3) { return std::make_shared<const ChebGrid>(n, s0); }

// Converged omega = 0.1 state, shared across cases.
const GroundState& reference_state() {
  static const GroundState gs = newton_relaxed(default_seed(grid()), kParams, {.mu = 0.1, .tol = 1e-12});
  return gs;
}

Matrix fd_jacobian(const RadialProfile& p, const ModelParams& params) {
  const int n = p.grid->n();
  Matrix j(n, n);
  const double h = 1e-6;
  for (int c = 1; c <= n; ++c) {
    RadialProfile plus = p, minus = p;
    plus.values[c] += h;
    minus.values[c] -= h;
    j.col(c - 1) = (residual_qeqs(plus, params) - residual_qeqs(minus, params)) / (2 * h);
  }
  return j;
}

}  // namespace

TEST_SUITE("groundstate") {
  TEST_CASE("default seed") {
    const auto seed = default_seed(grid());
    CHECK(seed.values[200] == doctest::Approx(0.9));
    for (int k = 0; k <= 200; ++k) CHECK(seed.values[k] == doctest::Approx(0.9 * std::exp(-seed.grid->s_nodes()[k] / 50)));
    const Vector a = cheb_coeffs(seed.values);
    CHECK(cheb_eval(a, 50.0 / 500.0 - 1.0) == doctest::Approx(0.9 / std::exp(1.0)).epsilon(1e-10));
  }

  TEST_CASE("zero profile") {
    const RadialProfile zero{grid(), Vector::Zero(201), 0.1};
    CHECK(residual_qeqs(zero, kParams).cwiseAbs().maxCoeff() == 0.0);
    CHECK(stationary_residual_identity(zero, kParams) == 0.0);

    const auto& g = *zero.grid;
    const double f = g.ds_factor();
    const Matrix full = (4.0 * g.s_nodes()).asDiagonal() * (f * f * g.diff2()) + 6.0 * f * g.diff1() -
                        0.1 * Matrix::Identity(201, 201);
    const Matrix j = jacobian_qeqs(zero, kParams);
    CHECK((j - full.bottomRightCorner(200, 200)).cwiseAbs().maxCoeff() < 1e-12 * full.cwiseAbs().maxCoeff());
    const Vector ones = Vector::Ones(200);
    const Vector lin = full.bottomRightCorner(200, 200) * ones;
    CHECK((j * ones - lin).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("Jacobian matches finite differences") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> amp(0.3, 0.95), width(5.0, 200.0);
    for (int trial = 0; trial < 4; ++trial) {
      auto g = grid(60, 500.0);
      const double a = amp(rng), w = width(rng);
      Vector v = (g->s_nodes() / -w).array().exp() * a;
      v[0] = 0.0;
      const RadialProfile p{g, v, 0.1};
      const Matrix fd = fd_jacobian(p, kParams);
      const Matrix an = jacobian_qeqs(p, kParams);
      CHECK((an - fd).norm() / an.norm() < 1e-5);
    }
    const auto& gs = reference_state();
    const Matrix an = jacobian_qeqs(gs.profile, kParams);
    CHECK((an - fd_jacobian(gs.profile, kParams)).norm() / an.norm() < 1e-5);
  }

  TEST_CASE("converged ground state") {
    const auto& gs = reference_state();
    const Vector& v = gs.profile.values;
    CHECK(gs.info.residual < 1e-10);
    CHECK(residual_qeqs(gs.profile, kParams).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(stationary_residual_identity(gs.profile, kParams) <= 1e-9);
    CHECK(v[0] == 0.0);
    for (int k = 1; k <= 200; ++k) {
      CHECK(v[k] > 0.0);
      CHECK(v[k] < 1.0);
      CHECK(v[k] >= v[k - 1] - 1e-12);  // nonincreasing in s; node order runs from s0 down to 0
    }
    CHECK(gs.info.trailing <= 1e-8 * gs.info.leading);
    CHECK(std::abs(v[200] - oracle::shooting_peak(1, 3, 0.1)) < 1e-6);
  }

  TEST_CASE("residual detects non-solutions") {
    const auto g = grid();
    Vector trial(201);
    for (int k = 0; k <= 200; ++k) trial[k] = soliton_1d(kParams.alpha == 1 ? ModelParams{1, 1, 0.1} : kParams, std::sqrt(g->s_nodes()[k]));
    trial[0] = 0.0;
    CHECK(residual_qeqs({g, trial, 0.1}, kParams).cwiseAbs().maxCoeff() > 1e-3);

    RadialProfile bumped = reference_state().profile;
    for (int k = 0; k <= 200; ++k) bumped.values[k] += 1e-3 * std::exp(-std::pow(g->s_nodes()[k] - 20.0, 2) / 50.0);
    bumped.values[0] = 0.0;
    CHECK(stationary_residual_identity(bumped, kParams) >= 1e-4);
  }

  TEST_CASE("exact seed is a fixed point") {
    const auto again = newton_relaxed(reference_state().profile, kParams, {.mu = 0.1, .tol = 1e-10});
    CHECK(again.info.iterations <= 2);
  }

  TEST_CASE("grid refinement leaves the peak unchanged") {
    const auto fine = newton_relaxed(resample(reference_state().profile, grid(400, 1e3)), kParams,
                                     {.mu = 0.5, .tol = 1e-12, .mu_growth = 2.0});
    CHECK(std::abs(fine.profile.values[400] - reference_state().profile.values[200]) <= 1e-8);
  }

  TEST_CASE("iteration cap and controls") {
    try {
      newton_relaxed(default_seed(grid()), kParams, {.mu = 0.1, .max_iter = 3});
      FAIL("expected no-convergence");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::no_convergence);
    }
    CHECK_THROWS_AS((SolverControls{.mu = 0.0}.validate()), Error);
    CHECK_THROWS_AS((SolverControls{.mu = 1.5}.validate()), Error);
    CHECK_THROWS_AS(newton_relaxed(default_seed(grid()), {1, 3, 0.6}, {}), Error);
  }

  TEST_CASE("continuation paths") {
    const auto path = default_omega_path(0.1, 0.42);
    CHECK(path.front() == doctest::Approx(0.1));
    CHECK(path.back() == doctest::Approx(0.42));
    for (std::size_t i = 1; i < path.size(); ++i) {
      const double step = path[i] - path[i - 1];
      CHECK(step == doctest::Approx(path[i] <= 0.4 + 1e-12 ? 0.01 : 0.005));
    }
    const auto down = warmup_path(0.1, 0.01);
    CHECK(down.front() == doctest::Approx(0.1));
    for (std::size_t i = 1; i < down.size(); ++i) CHECK(down[i] == doctest::Approx(0.8 * down[i - 1]));
    CHECK(down.back() > 0.01);
    CHECK(warmup_path(0.1, 0.1).empty());
  }

  TEST_CASE("peaks increase towards 1 along the frequency grid") {
    ContinuationPlan plan;
    plan.omega_values = {0.1, 0.2, 0.3};
    const auto result = continuation(plan, kParams, {.mu = 0.1, .mu_growth = 2.0}, grid());
    REQUIRE(result.ok());
    REQUIRE(result.states.size() == 3);
    double last = 0.0;
    for (const auto& s : result.states) {
      CHECK(s.profile.values.maxCoeff() > last);
      last = s.profile.values.maxCoeff();
      CHECK(s.info.residual < 1e-10);
    }
    CHECK(last > 0.99);
  }

  TEST_CASE("split steps report only the requested frequencies") {
    ContinuationPlan plan;
    plan.omega_values = {0.1, 0.3};
    plan.max_gap_fraction = 0.25;
    const auto split = continuation(plan, kParams, {.mu = 0.1, .mu_growth = 2.0}, grid());
    ContinuationPlan stepped;
    stepped.omega_values = {0.1, 0.2, 0.3};
    stepped.max_gap_fraction = 0.0;
    const auto direct = continuation(stepped, kParams, {.mu = 0.1, .mu_growth = 2.0}, grid());
    REQUIRE(split.ok());
    REQUIRE(direct.ok());
    REQUIRE(split.states.size() == 2);
    CHECK(split.states[1].profile.omega == 0.3);
    CHECK((split.states[1].profile.values - direct.states[2].profile.values).cwiseAbs().maxCoeff() < 1e-9);

    plan.max_gap_fraction = 1.0;
    CHECK_THROWS_AS(continuation(plan, kParams, {}, grid()), Error);
  }

  TEST_CASE("semilinear ground states") {
    const auto g2 = semilinear_groundstate({1, 2, 1.0}, {.mu = 0.2, .tol = 1e-10, .mu_growth = 2.0}, grid(200, 400.0));
    CHECK(g2.info.residual < 1e-10);
    CHECK(std::abs(g2.profile.values[200] - oracle::shooting_peak_semilinear(1, 2)) < 1e-6);
    const auto g3 = semilinear_groundstate({1, 3, 1.0}, {.mu = 0.2, .tol = 1e-10, .mu_growth = 2.0}, grid(120, 400.0));
    CHECK(g3.info.residual < 1e-10);
    CHECK(semilinear_mass(g3.profile, 3) > 0.0);
    // Townes soliton, |Q|^2 = 11.70089...
    CHECK(semilinear_mass(g2.profile, 2) == doctest::Approx(11.700896).epsilon(1e-6));
    CHECK_THROWS_AS(semilinear_groundstate({3, 3, 1.0}, {}, grid(40, 100.0)), Error);
  }
}
