#include <benchmark/benchmark.h>

#include "tampforge/complexity.hpp"
#include "tampforge/oracle.hpp"
#include "tampforge/plan_format.hpp"
#include "tampforge/verifier.hpp"

using namespace tampforge;

static void BM_ParsePlan(benchmark::State& state) {
  const TaskInstance instance =
      generate_instance(EnvKind::Gridworld, default_difficulty(EnvKind::Gridworld, 1), 3);
  const OracleResult solved = oracle_solve(instance);
  const std::string output =
      "thinking out loud\n" + serialize_plan(*solved.plan) + "trailing noise\n";
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_plan(output, instance));
  }
}
BENCHMARK(BM_ParsePlan);

static void BM_VerifyOraclePlan(benchmark::State& state) {
  const TaskInstance instance =
      generate_instance(EnvKind::Gridworld, default_difficulty(EnvKind::Gridworld, 1), 3);
  const OracleResult solved = oracle_solve(instance);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_plan(instance, *solved.plan));
  }
}
BENCHMARK(BM_VerifyOraclePlan);

BENCHMARK_MAIN();

static void BM_ComplexityAnalyze(benchmark::State& state) {
  const std::string source = R"(from collections import deque
frontier = deque([(0, 0)])
seen = {(0, 0)}
while frontier:
    x, y = frontier.popleft()
    for nx, ny in ((x+1, y), (x-1, y), (x, y+1), (x, y-1)):
        if 0 <= nx and 0 <= ny and (nx, ny) not in seen:
            seen.add((nx, ny))
            frontier.append((nx, ny))
)";
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(source, PatternTable::python_v1()));
  }
}
BENCHMARK(BM_ComplexityAnalyze);
