#include <memory>

#include <benchmark/benchmark.h>
#include <Eigen/LU>

#include "quasisol/evolve1d.hpp"
#include "quasisol/evolver.hpp"
#include "quasisol/groundstate.hpp"
#include "quasisol/spectral.hpp"

using namespace quasisol;

namespace {

const ModelParams kRadial{1, 3, 0.1};

RadialProfile radial_state(int n) {
  auto grid = std::make_shared<const ChebGrid>(n, 1e3);
  return groundstate_by_continuation(kRadial, grid).profile;
}

}  // namespace

static void BM_ChebGrid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ChebGrid(n, 1e3));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ChebGrid)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_ChebCoeffs(benchmark::State& state) {
  const ChebGrid grid(static_cast<int>(state.range(0)), 1e3);
  const Vector f = (-grid.s_nodes() / 50.0).array().exp().matrix();
  for (auto _ : state) benchmark::DoNotOptimize(cheb_coeffs(f));
}
BENCHMARK(BM_ChebCoeffs)->RangeMultiplier(4)->Range(64, 4096);

static void BM_JacobianLU(benchmark::State& state) {
  const auto profile = radial_state(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const Matrix j = jacobian_qeqs(profile, kRadial);
    Eigen::PartialPivLU<Matrix> lu(j);
    benchmark::DoNotOptimize(lu.matrixLU().data());
  }
}
BENCHMARK(BM_JacobianLU)->Arg(200)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_CnNewtonStep(benchmark::State& state) {
  const auto field = RadialField::from_real(radial_state(static_cast<int>(state.range(0))));
  CnStepInfo info;
  for (auto _ : state) benchmark::DoNotOptimize(cn_newton_step(field, 0.01, kRadial, 1e-10, 25, &info));
  state.counters["newton"] = info.iterations;
  state.counters["lu"] = info.factorizations;
}
BENCHMARK(BM_CnNewtonStep)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_Rhs1D(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0));
  auto grid = std::make_shared<const Fourier1DGrid>(nx, 20.0);
  const auto field = sample_soliton_1d({3, 1, 0.22}, grid);
  for (auto _ : state) benchmark::DoNotOptimize(rhs_1d(field, 3));
  state.SetItemsProcessed(state.iterations() * nx);
}
BENCHMARK(BM_Rhs1D)->RangeMultiplier(2)->Range(256, 4096);

static void BM_Rk4Step(benchmark::State& state) {
  auto grid = std::make_shared<const Fourier1DGrid>(1024, 20.0);
  const auto field = sample_soliton_1d({3, 1, 0.22}, grid);
  for (auto _ : state) benchmark::DoNotOptimize(rk4_step(field, 5e-4, 3));
}
BENCHMARK(BM_Rk4Step);

BENCHMARK_MAIN();
