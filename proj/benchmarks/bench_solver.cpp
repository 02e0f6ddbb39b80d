#include <benchmark/benchmark.h>

#include <memory>

#include "swgame/corpus.hpp"
#include "swgame/obstacle_solver.hpp"

using namespace swgame;

// Backward induction on the 2x2 OU instance with an N x (N + 1) grid.
static void BM_SolveStochastic(benchmark::State& state) {
  const corpus::Case c = corpus::stochastic_acceptance();
  const int steps = static_cast<int>(state.range(0));
  const auto lat = std::make_shared<const Lattice>(build_lattice(c.spec, steps, steps + 1, std::nullopt));
  for (auto _ : state) {
    ValueField f = solve(c.spec, lat);
    benchmark::DoNotOptimize(f.y.raw().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps) * (steps + 1) * 4);
}
BENCHMARK(BM_SolveStochastic)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_SolveRandomMedium(benchmark::State& state) {
  Rng rng(7);
  const corpus::Case c = corpus::random_medium(rng, "bench");
  const auto lat = c.lattice();
  for (auto _ : state) {
    ValueField f = solve(c.spec, lat);
    benchmark::DoNotOptimize(f.y.raw().data());
  }
}
BENCHMARK(BM_SolveRandomMedium)->Unit(benchmark::kMillisecond);
