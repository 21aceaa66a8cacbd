#include <benchmark/benchmark.h>

#include <random>

#include "calabi/analysis.hpp"
#include "calabi/curvature.hpp"
#include "calabi/solver.hpp"

using namespace calabi;

namespace {

struct Fixture {
  std::shared_ptr<const Grid> grid;
  SurfaceParams params;
  RadialProfile u0;
  RadialProfile ut;
  double t;

  explicit Fixture(int N)
      : grid(Grid::make(N, 1)),
        params(SurfaceParams::make(3, 1, 2.0, 3.0)),
        u0(reference_profile(2.0, 3.0, grid)),
        ut(reference_profile(2.0, 3.0, grid)),
        t(0.1) {
    const auto cs = class_at(params, t);
    SolverConfig cfg;
    auto run = newton_solve(reference_profile(cs.a, cs.b, grid), u0, t, params.n, cfg);
    ut = std::move(run.profile);
  }
};

Fixture& fixture(int N) {
  static Fixture f2049(2049);
  static Fixture f8193(8193);
  return N == 2049 ? f2049 : f8193;
}

}  // namespace

static void BM_GridDiff(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const auto& psi = f.ut.psi();
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.grid->diff(psi, 2));
  }
}
BENCHMARK(BM_GridDiff)->Arg(2049)->Arg(8193);

static void BM_ProfileConstruct(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const auto psi = f.ut.psi();
  for (auto _ : state) {
    RadialProfile p(f.grid, f.ut.a(), f.ut.b(), psi);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_ProfileConstruct)->Arg(2049)->Arg(8193);

static void BM_Residual(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual(f.ut, f.u0, f.t, f.params.n));
  }
}
BENCHMARK(BM_Residual)->Arg(2049)->Arg(8193);

static void BM_NewtonStep(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  SolverConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(newton_step(f.ut, f.u0, f.t, f.params.n, cfg));
  }
}
BENCHMARK(BM_NewtonStep)->Arg(2049)->Arg(8193);

static void BM_CurvatureProfile(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvature_profile(f.ut, f.u0, f.params.n));
  }
}
BENCHMARK(BM_CurvatureProfile)->Arg(2049)->Arg(8193);

static void BM_CollapseDiagnostics(benchmark::State& state) {
  const auto& f = fixture(2049);
  for (auto _ : state) {
    benchmark::DoNotOptimize(collapse_diagnostics(f.ut));
  }
}
BENCHMARK(BM_CollapseDiagnostics);

static void BM_FitRate(benchmark::State& state) {
  RunSeries s;
  for (int j = 0; j <= 40; ++j) {
    SeriesEntry e;
    e.gap = std::exp2(-j / 2.0);
    e.t = 1.0 - e.gap;
    e.sup_rm = 3.0 / e.gap;
    s.entries.push_back(e);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_rate(s, "sup_rm", 1.0, std::exp2(-20.0)));
  }
}
BENCHMARK(BM_FitRate);

BENCHMARK_MAIN();
