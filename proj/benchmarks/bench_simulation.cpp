#include <benchmark/benchmark.h>

#include <cstdint>
#include <memory>

#include "swgame/corpus.hpp"
#include "swgame/obstacle_solver.hpp"
#include "swgame/random.hpp"
#include "swgame/simulator.hpp"
#include "swgame/strategies.hpp"

using namespace swgame;

namespace {

struct Fixture {
  corpus::Case instance = corpus::stochastic_acceptance();
  std::shared_ptr<const Lattice> lattice = instance.lattice();
  ValueField field = solve(instance.spec, lattice);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

static void BM_SimulatePath(benchmark::State& state) {
  const Fixture& f = fixture();
  std::uint64_t k = 0;
  for (auto _ : state) {
    Path p = simulate_path(f.instance.spec, f.instance.steps, stream_seed(1, k++));
    benchmark::DoNotOptimize(p.x.data());
  }
}
BENCHMARK(BM_SimulatePath);

// One Monte Carlo sample: path, equilibrium play, coupling and payoff.
static void BM_EquilibriumPayoff(benchmark::State& state) {
  const Fixture& f = fixture();
  std::uint64_t k = 0;
  for (auto _ : state) {
    const Path p = simulate_path(f.instance.spec, f.instance.steps, stream_seed(2, k++));
    const PlayOutcome o = equilibrium_controls(f.field, p, 0, {0, 0});
    benchmark::DoNotOptimize(pathwise_payoff(f.instance.spec, p, couple(o.alpha, o.beta)));
  }
}
BENCHMARK(BM_EquilibriumPayoff);

static void BM_MonteCarlo(benchmark::State& state) {
  const Fixture& f = fixture();
  SimulationOptions opts;
  opts.paths = static_cast<int>(state.range(0));
  opts.seed = 3;
  for (auto _ : state) benchmark::DoNotOptimize(mc_value_estimate(f.instance.spec, f.field, {1, 1}, opts).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(1000)->Unit(benchmark::kMillisecond);
