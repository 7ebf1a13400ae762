#include <benchmark/benchmark.h>

#include "capflow/abel.hpp"
#include "capflow/functional.hpp"
#include "capflow/solver.hpp"
#include "capflow/specfun.hpp"
#include "capflow/verify.hpp"

namespace {

using namespace capflow;

void BM_IncBeta(benchmark::State& state) {
  double z = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inc_beta(z, 1.5, 2.5));
    z = z < 0.9 ? z + 1e-6 : 0.37;
  }
}
BENCHMARK(BM_IncBeta);

void BM_G_Numeric(benchmark::State& state) {
  const QuadratureConfig quad;
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(g_numeric(QuadraticField{}, d, 1.8, 2.4, quad));
}
BENCHMARK(BM_G_Numeric)->Arg(3)->Arg(7);

void BM_FunctionalGeneric(benchmark::State& state) {
  const QuadratureConfig quad;
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(f_functional_generic(d, 1.2, make_point_charge(1.0), quad));
}
BENCHMARK(BM_FunctionalGeneric)->Arg(3)->Arg(7);

void BM_Solve(benchmark::State& state) {
  ProblemSpec spec;
  spec.d = 4;
  spec.field = make_point_charge(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec).f_q);
}
BENCHMARK(BM_Solve)->Unit(benchmark::kMillisecond);

void BM_PotentialEval(benchmark::State& state) {
  ProblemSpec spec;
  spec.d = static_cast<int>(state.range(0));
  spec.field = make_point_charge(1.0);
  const EquilibriumSolution sol = solve(spec);
  const QuadratureConfig quad;
  for (auto _ : state) benchmark::DoNotOptimize(potential_eval(sol, 2.0, quad));
}
BENCHMARK(BM_PotentialEval)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
