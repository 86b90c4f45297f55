#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "tampforge/oracle.hpp"
#include "tampforge/verifier.hpp"

using namespace tampforge;

namespace {

TaskInstance blocksworld_instance(std::vector<std::vector<std::string>> towers,
                                  std::vector<std::vector<std::string>> goal) {
  TaskInstance instance;
  instance.env_kind = EnvKind::Blocksworld;
  BlocksworldState s;
  s.towers = std::move(towers);
  instance.initial_state = s;
  instance.goal.towers = std::move(goal);
  instance.step_limit = 50;
  return instance;
}

}  // namespace

TEST_CASE("two-block swap solves in exactly four steps") {
  // A on B; goal B on A: unstack A, put down A, pick up B, stack B on A.
  const TaskInstance instance = blocksworld_instance({{"B", "A"}}, {{"A", "B"}});
  const OracleResult result = oracle_solve(instance);
  REQUIRE(result.status == OracleStatus::Solved);
  CHECK(*result.optimal_length == 4);
  CHECK(verify_plan(instance, *result.plan).success);

  CHECK(oracle_optimal_length(instance) == 4);
}

TEST_CASE("solved-at-start instances have optimal length zero") {
  const TaskInstance instance = blocksworld_instance({{"A"}, {"B"}}, {{"A"}, {"B"}});
  CHECK(oracle_optimal_length(instance) == 0);

  TaskInstance grid;
  grid.env_kind = EnvKind::Gridworld;
  GridworldState s;
  s.width = 2;
  s.height = 2;
  s.goals = {{0, 0}};
  s.visited = {false};
  s.robot = {0, 0};
  grid.initial_state = s;
  grid.step_limit = 5;
  const OracleResult result = oracle_solve(grid);
  REQUIRE(result.status == OracleStatus::Solved);
  // Goal at the start cell: one visit_goal step.
  CHECK(*result.optimal_length == 1);
  CHECK(result.plan->steps[0][0].action == "visit_goal");
}

TEST_CASE("boxlift oracle searches robot partitions exhaustively") {
  TaskInstance instance;
  instance.env_kind = EnvKind::BoxLift;
  BoxLiftState s;
  s.robots = {{"r1", 60}, {"r2", 50}, {"r3", 40}};
  instance.step_limit = 10;

  SUBCASE("parallel lifts when a partition covers both boxes") {
    // {60,40} exceeds 95 and {50} exceeds 45: a single step suffices.
    s.boxes = {{"b1", {95, false}}, {"b2", {45, false}}};
    instance.initial_state = s;
    const OracleResult result = oracle_solve(instance);
    REQUIRE(result.status == OracleStatus::Solved);
    CHECK(*result.optimal_length == 1);
    CHECK(verify_plan(instance, *result.plan).success);
  }

  SUBCASE("capacity must strictly exceed the weight, forcing a second step") {
    // Lifting the 100 box takes {60,50} (110) since {60,40} only ties at 100,
    // and the leftover {40} cannot lift 45; two steps are optimal.
    s.boxes = {{"b1", {100, false}}, {"b2", {45, false}}};
    instance.initial_state = s;
    const OracleResult result = oracle_solve(instance);
    REQUIRE(result.status == OracleStatus::Solved);
    CHECK(*result.optimal_length == 2);
    CHECK(verify_plan(instance, *result.plan).success);
  }
}

TEST_CASE("budget exhaustion reports Unknown instead of guessing") {
  const TaskInstance big = generate_instance(
      EnvKind::Blocksworld, default_difficulty(EnvKind::Blocksworld, 4), 11);
  const OracleResult result = oracle_solve(big, {500});
  CHECK(result.status == OracleStatus::BudgetExceeded);
  CHECK_FALSE(oracle_optimal_length(big, {500}).has_value());
}

TEST_CASE("oracle plans pass verification on generated instances") {
  for (const EnvKind kind :
       {EnvKind::Gridworld, EnvKind::Blocksworld, EnvKind::BoxLift, EnvKind::BoxNet}) {
    for (uint64_t seed = 100; seed < 110; ++seed) {
      const TaskInstance instance =
          generate_instance(kind, default_difficulty(kind, 0), seed);
      const OracleResult result = oracle_solve(instance, {400000});
      if (result.status != OracleStatus::Solved) continue;
      const Verdict verdict = verify_plan(instance, *result.plan);
      CHECK_MESSAGE(verdict.success, to_string(kind), " seed=", seed, ": ",
                    verdict.detail);
      CHECK(static_cast<int>(result.plan->steps.size()) <= instance.step_limit);
    }
  }
}

TEST_CASE("shape formation oracle places every box on a distinct slot") {
  const TaskInstance instance = generate_instance(
      EnvKind::ShapeFormation, default_difficulty(EnvKind::ShapeFormation, 1), 9);
  const OracleResult result = oracle_solve(instance);
  REQUIRE(result.status == OracleStatus::Solved);
  CHECK(verify_plan(instance, *result.plan).success);
}

TEST_CASE("oracle rejects continuous path envs") {
  const TaskInstance instance = generate_instance(
      EnvKind::PathRacecars, default_difficulty(EnvKind::PathRacecars, 0), 1);
  CHECK_THROWS_AS(oracle_solve(instance), std::invalid_argument);
}

TEST_CASE("no shorter plan than the BFS optimum passes verification") {
  // Exhaustive enumeration over legal action sequences below the optimal
  // length, on small instances.
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    const TaskInstance instance = generate_instance(
        EnvKind::Gridworld, default_difficulty(EnvKind::Gridworld, 0), seed);
    const OracleResult result = oracle_solve(instance);
    REQUIRE(result.status == OracleStatus::Solved);
    const int optimum = *result.optimal_length;
    if (optimum == 0 || optimum > 6) continue;

    bool found_shorter = false;
    std::function<void(const EnvState&, int)> dfs = [&](const EnvState& state, int depth) {
      if (found_shorter) return;
      if (is_goal_env(state, instance.goal)) {
        found_shorter = true;
        return;
      }
      if (depth >= optimum - 1) return;
      for (const Step& step : enumerate_candidate_steps_env(state)) {
        auto next = apply_step_env(state, step);
        if (std::holds_alternative<EnvState>(next)) {
          dfs(std::get<EnvState>(next), depth + 1);
        }
      }
    };
    dfs(instance.initial_state, 0);
    CHECK_FALSE(found_shorter);
  }
}

TEST_CASE("tighten_step_limit applies the 3x rule when the oracle solves") {
  TaskInstance instance = blocksworld_instance({{"B", "A"}}, {{"A", "B"}});
  tighten_step_limit(instance);
  CHECK(instance.step_limit == 12);  // 3 * optimal(4)
}
