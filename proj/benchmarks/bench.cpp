#include <benchmark/benchmark.h>

#include <cmath>
#include <optional>
#include <random>

#include "psurf/expectation.hpp"
#include "psurf/fit.hpp"
#include "psurf/projection.hpp"
#include "psurf/simulate.hpp"
#include "psurf/tps.hpp"

namespace {

psurf::Param2 random_params(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  psurf::Param2 t(n, 2);
  for (int i = 0; i < n; ++i) t.row(i) << u(rng), u(rng);
  return t;
}

void BM_local_average(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const psurf::Param2 t = random_params(n, 1);
  const psurf::SimData data = psurf::generate_case({1, 6000, n, 1});
  const psurf::FitConfig cfg{};
  for (auto _ : state) {
    const psurf::LocalAverages avg =
        psurf::local_average_all(data.cloud, t, cfg);
    benchmark::DoNotOptimize(avg.points.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_fit_tps(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const psurf::Param2 t = random_params(n, 2);
  Eigen::MatrixX3d y(n, 3);
  for (int i = 0; i < n; ++i)
    y.row(i) << std::sin(3 * t(i, 0)), std::cos(2 * t(i, 1)),
        t(i, 0) * t(i, 1);
  const Eigen::MatrixX2d knots = psurf::select_knots(t, 300, 0);
  for (auto _ : state) {
    const psurf::SurfaceModel m = psurf::fit_tps(t, y, knots, 0.01);
    benchmark::DoNotOptimize(m.delta.data());
  }
}

void BM_fit_tps_gcv(benchmark::State& state) {
  const int n = 1000;
  const psurf::Param2 t = random_params(n, 3);
  Eigen::MatrixX3d y(n, 3);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss(0.0, 0.1);
  for (int i = 0; i < n; ++i)
    y.row(i) << std::sin(3 * t(i, 0)) + gauss(rng), t(i, 1) + gauss(rng),
        t(i, 0) * t(i, 1) + gauss(rng);
  const Eigen::MatrixX2d knots = psurf::select_knots(t, 300, 0);
  for (auto _ : state) {
    const psurf::SurfaceModel m = psurf::fit_tps(t, y, knots, std::nullopt);
    benchmark::DoNotOptimize(m.delta.data());
  }
}

void BM_project_all(benchmark::State& state) {
  const auto g = static_cast<int>(state.range(0));
  const int n = 1000;
  const psurf::SimData data = psurf::generate_case({3, 6000, n, 5});
  const psurf::Param2 t = random_params(n, 6);
  const psurf::SurfaceModel m = psurf::fit_tps(
      t, data.cloud.points, psurf::select_knots(t, 300, 0), 0.01);
  for (auto _ : state) {
    const psurf::ProjectionPass pass =
        psurf::project_all(data.cloud.points, m, g);
    benchmark::DoNotOptimize(pass.params.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_full_fit(benchmark::State& state) {
  const psurf::SimData data = psurf::generate_case({1, 6000, 400, 9});
  psurf::FitConfig cfg;
  cfg.n_grid = 25;
  for (auto _ : state) {
    const psurf::FitResult res = psurf::fit_principal_surface(data.cloud, cfg);
    benchmark::DoNotOptimize(res.report.iterations_used);
  }
}

BENCHMARK(BM_local_average)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit_tps)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit_tps_gcv)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_project_all)->Arg(15)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_full_fit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
