#include <benchmark/benchmark.h>

#include "swgame/expression.hpp"

using swgame::ScalarField;

static void BM_Parse(benchmark::State& state) {
  for (auto _ : state) {
    ScalarField f = ScalarField::parse("0.5*sin(2*x) + exp(-t)*tanh(x - 0.3) - 0.2*x^2");
    benchmark::DoNotOptimize(&f);
  }
}
BENCHMARK(BM_Parse);

static void BM_Evaluate(benchmark::State& state) {
  const ScalarField f = ScalarField::parse("0.5*sin(2*x) + exp(-t)*tanh(x - 0.3) - 0.2*x^2");
  double x = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(0.25, x));
    x = x > 1.0 ? -1.0 : x + 1e-3;
  }
}
BENCHMARK(BM_Evaluate);

static void BM_EvaluateConstant(benchmark::State& state) {
  const ScalarField f = ScalarField::parse("0.3");
  for (auto _ : state) benchmark::DoNotOptimize(f(0.0, 0.0));
}
BENCHMARK(BM_EvaluateConstant);
