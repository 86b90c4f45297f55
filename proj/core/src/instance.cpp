#include "tampforge/instance.hpp"

#include <stdexcept>

namespace tampforge {

int step_limit_formula(EnvKind kind, const DifficultyParams& d) {
  switch (kind) {
    case EnvKind::Gridworld:
      return 3 * (d.grid_width * d.grid_height + d.num_goals);
    case EnvKind::Blocksworld:
      // Any instance solves in at most 4 moves per block (to table, rebuild).
      return 4 * d.num_blocks + 2;
    case EnvKind::BoxLift:
      return 3 * d.num_boxes;
    case EnvKind::BoxNet:
      return 3 * d.num_boxes * (d.grid_width * d.grid_height + 1);
    default:
      return 0;
  }
}

TaskInstance generate_instance(EnvKind kind, const DifficultyParams& difficulty,
                               uint64_t seed) {
  Rng rng(Rng::derive_seed(seed, to_string(kind), 0));
  TaskInstance instance;
  instance.env_kind = kind;
  instance.seed = seed;
  instance.difficulty = difficulty;
  instance.step_limit = step_limit_formula(kind, difficulty);
  instance.exec_timeout = kDefaultExecTimeout;

  switch (kind) {
    case EnvKind::Gridworld: {
      instance.initial_state = generate_gridworld(difficulty, rng);
      instance.goal.description = "visit all goal cells";
      break;
    }
    case EnvKind::Blocksworld: {
      auto [state, goal] = generate_blocksworld(difficulty, rng);
      instance.initial_state = std::move(state);
      instance.goal = std::move(goal);
      break;
    }
    case EnvKind::BoxLift: {
      instance.initial_state = generate_boxlift(difficulty, rng);
      instance.goal.description = "lift every box";
      break;
    }
    case EnvKind::BoxNet: {
      instance.initial_state = generate_boxnet(difficulty, rng);
      instance.goal.description = "place every box in the goal slot of its color";
      break;
    }
    case EnvKind::PathRacecars: {
      ContinuousState state = generate_racecars(difficulty, rng);
      instance.time_limit = state.scene.time_limit;
      instance.initial_state = std::move(state);
      instance.goal.description = "move every racecar into its goal region";
      break;
    }
    case EnvKind::PathDrones: {
      ContinuousState state = generate_drones(difficulty, rng);
      instance.time_limit = state.scene.time_limit;
      instance.initial_state = std::move(state);
      instance.goal.description = "fly every drone through the hole, one at a time";
      break;
    }
    case EnvKind::ShapeFormation: {
      ContinuousState state = generate_shape_formation(difficulty, rng);
      instance.time_limit = state.scene.time_limit;
      instance.initial_state = std::move(state);
      instance.goal.description = "place the boxes on the target shape, avoiding bowls";
      break;
    }
  }
  return instance;
}

namespace {

json state_to_json(const EnvState& state) {
  return std::visit([](const auto& s) { return json(s); }, state);
}

}  // namespace

EnvState env_state_from_json(EnvKind kind, const json& j) {
  switch (kind) {
    case EnvKind::Gridworld: return j.get<GridworldState>();
    case EnvKind::Blocksworld: return j.get<BlocksworldState>();
    case EnvKind::BoxLift: return j.get<BoxLiftState>();
    case EnvKind::BoxNet: return j.get<BoxNetState>();
    default: return j.get<ContinuousState>();
  }
}

json instance_to_json(const TaskInstance& instance) {
  return json{{"schema_version", kInstanceSchemaVersion},
              {"env_kind", std::string(to_string(instance.env_kind))},
              {"seed", instance.seed},
              {"difficulty", instance.difficulty},
              {"initial_state", state_to_json(instance.initial_state)},
              {"goal", instance.goal},
              {"step_limit", instance.step_limit},
              {"time_limit", instance.time_limit},
              {"exec_timeout", instance.exec_timeout}};
}

TaskInstance instance_from_json(const json& j) {
  const int version = j.value("schema_version", kInstanceSchemaVersion);
  if (version != kInstanceSchemaVersion) {
    throw std::invalid_argument("unsupported instance schema version " +
                                std::to_string(version));
  }
  TaskInstance instance;
  const auto kind = env_kind_from_string(j.at("env_kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown env_kind");
  instance.env_kind = *kind;
  instance.seed = j.at("seed").get<uint64_t>();
  instance.difficulty = j.value("difficulty", DifficultyParams{});
  instance.initial_state = env_state_from_json(*kind, j.at("initial_state"));
  instance.goal = j.value("goal", GoalSpec{});
  instance.step_limit = j.value("step_limit", 0);
  instance.time_limit = j.value("time_limit", 0.0);
  instance.exec_timeout = j.value("exec_timeout", kDefaultExecTimeout);
  if (instance.exec_timeout <= 0.0) throw std::invalid_argument("exec_timeout must be > 0");
  return instance;
}

std::vector<std::string> expected_robot_ids(const TaskInstance& instance) {
  std::vector<std::string> ids;
  if (const auto* continuous = std::get_if<ContinuousState>(&instance.initial_state)) {
    for (const auto& [id, spec] : continuous->scene.robots) ids.push_back(id);
  } else if (const auto* lift = std::get_if<BoxLiftState>(&instance.initial_state)) {
    for (const auto& [id, cap] : lift->robots) ids.push_back(id);
  } else if (const auto* net = std::get_if<BoxNetState>(&instance.initial_state)) {
    for (const auto& [id, cell] : net->arms) ids.push_back(id);
  } else if (std::holds_alternative<BlocksworldState>(instance.initial_state)) {
    ids.push_back("arm");
  } else {
    ids.push_back("robot");
  }
  return ids;
}

}  // namespace tampforge
