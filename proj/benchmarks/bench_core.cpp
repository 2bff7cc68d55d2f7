#include <benchmark/benchmark.h>

#include <cmath>

#include "nehari/nehari.hpp"

namespace {

using namespace nehari;

ProblemSpec default_problem() {
  return ProblemSpec{3, 1.0, PotentialSpec::constant(1.0), NonlinearitySpec::power(1.0, 5.0),
                     SqrtShiftRho{}};
}

RadialField bump(const RadialGrid& g) {
  RadialField u = g.sample([](double r) { return 1.5 * std::exp(-r * r / 2.0); });
  enforce_boundary(u);
  return u;
}

void BM_Energy(benchmark::State& state) {
  const auto g = RadialGrid::build(3, 20.0, static_cast<std::size_t>(state.range(0)));
  const EnergyFunctional e(g, default_problem());
  const auto u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(e.energy(u).total);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Energy)->RangeMultiplier(4)->Range(512, 8192)->Complexity(benchmark::oN);

void BM_Gradient(benchmark::State& state) {
  const auto g = RadialGrid::build(3, 20.0, static_cast<std::size_t>(state.range(0)));
  const EnergyFunctional e(g, default_problem());
  const auto u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(e.gradient(u).data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(4)->Range(512, 8192)->Complexity(benchmark::oN);

void BM_Projection(benchmark::State& state) {
  const auto g = RadialGrid::build(3, 20.0, static_cast<std::size_t>(state.range(0)));
  const EnergyFunctional e(g, default_problem());
  const auto u = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(project_to_nehari(e, u).report.t_star);
}
BENCHMARK(BM_Projection)->Arg(501)->Arg(2001);

void BM_HypothesisCheck(benchmark::State& state) {
  const auto g = RadialGrid::build(3, 20.0, 2001);
  const auto spec = default_problem();
  for (auto _ : state) benchmark::DoNotOptimize(check_problem(spec, g).passed());
}
BENCHMARK(BM_HypothesisCheck);

void BM_Solve(benchmark::State& state) {
  const auto g = RadialGrid::build(3, 20.0, static_cast<std::size_t>(state.range(0)));
  SolverOptions o;
  o.start_widths = {1.0};
  o.start_amplitudes = {1.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_ground_state(g, default_problem(), o).energy_m);
}
BENCHMARK(BM_Solve)->Arg(251)->Arg(501)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
