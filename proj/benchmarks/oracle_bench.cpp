#include <benchmark/benchmark.h>

#include "tampforge/instance.hpp"
#include "tampforge/oracle.hpp"

using namespace tampforge;

static void BM_OracleGridworld(benchmark::State& state) {
  const TaskInstance instance =
      generate_instance(EnvKind::Gridworld, default_difficulty(EnvKind::Gridworld, 2), 191);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_solve(instance));
  }
}
BENCHMARK(BM_OracleGridworld);

static void BM_OracleBlocksworld(benchmark::State& state) {
  DifficultyParams d = default_difficulty(EnvKind::Blocksworld, 0);
  const TaskInstance instance = generate_instance(EnvKind::Blocksworld, d, 57);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_solve(instance));
  }
}
BENCHMARK(BM_OracleBlocksworld);

static void BM_OracleBoxLift(benchmark::State& state) {
  DifficultyParams d = default_difficulty(EnvKind::BoxLift, 1);
  const TaskInstance instance = generate_instance(EnvKind::BoxLift, d, 23);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_solve(instance));
  }
}
BENCHMARK(BM_OracleBoxLift);
