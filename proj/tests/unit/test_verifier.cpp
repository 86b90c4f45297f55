#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tampforge/oracle.hpp"
#include "tampforge/plan_format.hpp"
#include "tampforge/verifier.hpp"

using namespace tampforge;

namespace {

SandboxResult ok_run(std::string stdout_bytes) {
  SandboxResult r;
  r.stdout_bytes = std::move(stdout_bytes);
  return r;
}

TaskInstance solved_gridworld() {
  TaskInstance instance;
  instance.env_kind = EnvKind::Gridworld;
  GridworldState s;
  s.width = 2;
  s.height = 2;
  s.goals = {{0, 0}};
  s.visited = {true};
  s.robot = {0, 0};
  instance.initial_state = s;
  instance.step_limit = 5;
  return instance;
}

}  // namespace

TEST_CASE("timed-out execution is an ExecTimeout failure regardless of output") {
  const TaskInstance instance = solved_gridworld();
  SandboxResult r = ok_run(serialize_plan(Plan::actions({})));
  r.timed_out = true;
  r.elapsed_seconds = 51.0;
  const Verdict verdict = verify(instance, r.stdout_bytes, r);
  CHECK_FALSE(verdict.success);
  CHECK(verdict.failure_reason == FailureReason::ExecTimeout);
}

TEST_CASE("empty plan on an already-satisfied goal succeeds") {
  const TaskInstance instance = solved_gridworld();
  const std::string output = serialize_plan(Plan::actions({}));
  const Verdict verdict = verify(instance, output, ok_run(output));
  CHECK(verdict.success);
}

TEST_CASE("a valid document printed before a crash still counts as parsed") {
  const TaskInstance instance = solved_gridworld();
  SandboxResult r = ok_run(serialize_plan(Plan::actions({})) + "Traceback: boom\n");
  r.exit_status = 1;
  const Verdict verdict = verify(instance, r.stdout_bytes, r);
  CHECK(verdict.success);
}

TEST_CASE("missing document is a ParseError verdict") {
  const TaskInstance instance = solved_gridworld();
  const Verdict verdict = verify(instance, "no plan here", ok_run("no plan here"));
  CHECK_FALSE(verdict.success);
  CHECK_FALSE(verdict.syntax_ok);
  CHECK(verdict.failure_reason == FailureReason::ParseError);
}

TEST_CASE("illegal actions are attributed before goal or limit failures") {
  const TaskInstance instance =
      generate_instance(EnvKind::Gridworld, default_difficulty(EnvKind::Gridworld, 0), 3);
  // A single out-of-grid walk repeated beyond any limit: IllegalAction wins.
  std::vector<Step> steps(instance.step_limit + 5,
                          {{Action{"robot", "move_down", {}}}});
  // Walk to the bottom first so a later move_down exits the grid.
  const Verdict verdict = verify_plan(instance, Plan::actions(steps));
  CHECK_FALSE(verdict.success);
  CHECK(verdict.failure_reason == FailureReason::IllegalAction);
}

TEST_CASE("plans exceeding the step limit get TimeLimitViolation") {
  TaskInstance instance = solved_gridworld();
  instance.step_limit = 2;
  GridworldState& s = std::get<GridworldState>(instance.initial_state);
  s.robot = {0, 0};
  // Legal shuffle, longer than the limit.
  const Step right{{Action{"robot", "move_right", {}}}};
  const Step left{{Action{"robot", "move_left", {}}}};
  const Verdict verdict =
      verify_plan(instance, Plan::actions({right, left, right, left}));
  CHECK_FALSE(verdict.success);
  CHECK(verdict.failure_reason == FailureReason::TimeLimitViolation);
  CHECK(verdict.goal_reached);  // the goal predicate itself held after replay
}

TEST_CASE("unreached goal after a legal replay is GoalNotReached") {
  TaskInstance instance = solved_gridworld();
  std::get<GridworldState>(instance.initial_state).visited = {false};
  std::get<GridworldState>(instance.initial_state).robot = {1, 1};
  const Verdict verdict = verify_plan(instance, Plan::actions({}));
  CHECK_FALSE(verdict.success);
  CHECK(verdict.failure_reason == FailureReason::GoalNotReached);
  CHECK(verdict.constraints_ok);
}

TEST_CASE("verify is deterministic") {
  const TaskInstance instance =
      generate_instance(EnvKind::Blocksworld, default_difficulty(EnvKind::Blocksworld, 0), 7);
  const OracleResult solved = oracle_solve(instance);
  REQUIRE(solved.status == OracleStatus::Solved);
  const std::string output = "chatter\n" + serialize_plan(*solved.plan);
  const Verdict a = verify(instance, output, ok_run(output));
  const Verdict b = verify(instance, output, ok_run(output));
  CHECK(a == b);
  CHECK(a.success);
}

TEST_CASE("oracle plans verify across discrete envs (sample)") {
  for (const EnvKind kind :
       {EnvKind::Gridworld, EnvKind::Blocksworld, EnvKind::BoxLift, EnvKind::BoxNet}) {
    int verified = 0;
    for (uint64_t seed = 1; seed <= 12; ++seed) {
      const TaskInstance instance =
          generate_instance(kind, default_difficulty(kind, 0), seed);
      const OracleResult solved = oracle_solve(instance, {400000});
      if (solved.status != OracleStatus::Solved) continue;
      const Verdict verdict = verify_plan(instance, *solved.plan);
      CHECK_MESSAGE(verdict.success, "env=", to_string(kind), " seed=", seed,
                    " detail=", verdict.detail);
      ++verified;
    }
    CHECK(verified >= 8);
  }
}

TEST_CASE("the verifier re-certifies rather than trusting plan provenance") {
  // Corrupt one action of an oracle plan; success may survive only when the
  // mutated plan independently replays to the goal.
  Rng rng(424242);
  int corrupted_accepts = 0;
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    const TaskInstance instance = generate_instance(
        EnvKind::Gridworld, default_difficulty(EnvKind::Gridworld, 0), seed);
    const OracleResult solved = oracle_solve(instance);
    REQUIRE(solved.status == OracleStatus::Solved);
    Plan mutated = *solved.plan;
    if (mutated.steps.empty()) continue;
    const size_t index =
        static_cast<size_t>(rng.uniform_int(0, mutated.steps.size() - 1));
    const char* actions[] = {"move_up", "move_down", "move_left", "move_right",
                             "visit_goal"};
    mutated.steps[index] = Step{Action{"robot", rng.pick(actions), {}}};
    const Verdict verdict = verify_plan(instance, mutated);
    if (verdict.success) {
      // Replay the mutated plan by hand; it must genuinely reach the goal.
      EnvState state = instance.initial_state;
      for (const Step& step : mutated.steps) {
        auto next = apply_step_env(state, step);
        REQUIRE(std::holds_alternative<EnvState>(next));
        state = std::get<EnvState>(next);
      }
      CHECK(is_goal_env(state, instance.goal));
      ++corrupted_accepts;
    }
  }
  // Most corruptions must be caught.
  CHECK(corrupted_accepts < 20);
}
