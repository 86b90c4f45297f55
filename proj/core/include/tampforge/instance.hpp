#pragma once

#include <cstdint>
#include <variant>

#include "tampforge/continuous.hpp"
#include "tampforge/discrete.hpp"
#include "tampforge/types.hpp"

namespace tampforge {

using EnvState =
    std::variant<GridworldState, BlocksworldState, BoxLiftState, BoxNetState, ContinuousState>;

inline constexpr int kInstanceSchemaVersion = 1;
inline constexpr double kDefaultExecTimeout = 50.0;

// One seeded, parameterized problem. Immutable after construction;
// (env_kind, seed, difficulty) regenerate the identical instance.
struct TaskInstance {
  EnvKind env_kind = EnvKind::Gridworld;
  uint64_t seed = 0;
  DifficultyParams difficulty;
  EnvState initial_state;
  GoalSpec goal;
  int step_limit = 0;        // discrete envs
  double time_limit = 0.0;   // continuous envs, copied from the scene
  double exec_timeout = kDefaultExecTimeout;

  const ContinuousState& continuous() const { return std::get<ContinuousState>(initial_state); }

  friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

// Deterministic generation; re-samples internally until a solvability
// certificate holds and throws UnsatisfiableError if the difficulty ranges
// cannot produce one.
TaskInstance generate_instance(EnvKind kind, const DifficultyParams& difficulty, uint64_t seed);

// Documented per-env step-limit formula; generous upper bound on any
// oracle-optimal plan for generated instances.
int step_limit_formula(EnvKind kind, const DifficultyParams& difficulty);

json instance_to_json(const TaskInstance& instance);
TaskInstance instance_from_json(const json& j);
EnvState env_state_from_json(EnvKind kind, const json& j);

// Sorted robot ids a waypoint plan must key its trajectories with.
std::vector<std::string> expected_robot_ids(const TaskInstance& instance);

}  // namespace tampforge
