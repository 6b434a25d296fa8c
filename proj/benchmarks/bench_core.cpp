#include <numbers>

#include <benchmark/benchmark.h>

#include "solenoid/geometry.hpp"
#include "solenoid/lamination.hpp"
#include "solenoid/thermo.hpp"

using namespace solenoid;

namespace {

const SolenoidSpec kConstant{2, 0.0, 0.4, 0.0, 0.0, 0.25, 0.0, 0.0, 0.5, 0.5};
const SolenoidSpec kNonlinear{2, 0.3, 0.35, 0.05, 0.0, 0.15, 0.0, 0.0, 0.5, 0.5};

void BM_CylinderTable(benchmark::State& state) {
  const Solenoid sol(kNonlinear);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(CylinderTable::build(sol, n, kDefaultEnumerationCap, {1}));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_CylinderTable)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SolveBowen(benchmark::State& state) {
  const auto table = CylinderTable::build(Solenoid(kNonlinear), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_bowen(table, 1e-6));
}
BENCHMARK(BM_SolveBowen)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SliceCloud(benchmark::State& state) {
  const Solenoid sol(kConstant);
  for (auto _ : state) benchmark::DoNotOptimize(slice_cloud(sol, 0.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SliceCloud)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_BoxDimension(benchmark::State& state) {
  const auto cloud = slice_cloud(Solenoid(kConstant), 0.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(box_dimension(cloud, 5));
}
BENCHMARK(BM_BoxDimension)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Transversality(benchmark::State& state) {
  const Solenoid sol(kConstant);
  for (auto _ : state) benchmark::DoNotOptimize(min_transversal_angle(sol, 8, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Transversality)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_HolonomyScan(benchmark::State& state) {
  const Solenoid sol(kConstant);
  const auto model = build_gibbs_model(sol, 8);
  HolonomyScanOptions opts;
  opts.pairs = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(holonomy_lipschitz_scan(sol, model, 0.0, std::numbers::pi, opts));
}
BENCHMARK(BM_HolonomyScan)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
