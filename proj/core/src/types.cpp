#include "tampforge/types.hpp"

#include <cassert>
#include <stdexcept>

namespace tampforge {

bool is_discrete(EnvKind kind) {
  switch (kind) {
    case EnvKind::BoxNet:
    case EnvKind::Blocksworld:
    case EnvKind::BoxLift:
    case EnvKind::Gridworld:
      return true;
    case EnvKind::PathRacecars:
    case EnvKind::ShapeFormation:
    case EnvKind::PathDrones:
      return false;
  }
  return false;
}

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::BoxNet: return "boxnet";
    case EnvKind::Blocksworld: return "blocksworld";
    case EnvKind::BoxLift: return "boxlift";
    case EnvKind::Gridworld: return "gridworld";
    case EnvKind::PathRacecars: return "path_racecars";
    case EnvKind::ShapeFormation: return "shape_formation";
    case EnvKind::PathDrones: return "path_drones";
  }
  return "unknown";
}

std::optional<EnvKind> env_kind_from_string(std::string_view name) {
  for (EnvKind kind : kAllEnvKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::CodeSymbolicPlanner: return "code_symbolic_planner";
    case Method::OnlyQuestion: return "only_question";
    case Method::CodeAnswer: return "code_answer";
    case Method::SayCan: return "saycan";
    case Method::HMAS2: return "hmas2";
  }
  return "unknown";
}

std::optional<Method> method_from_string(std::string_view name) {
  for (Method method : kAllMethods) {
    if (to_string(method) == name) return method;
  }
  return std::nullopt;
}

DifficultyParams default_difficulty(EnvKind kind, int level) {
  if (level < 0 || level >= kDifficultyLevels) {
    throw std::out_of_range("difficulty level must be in [0, 4]");
  }
  DifficultyParams d;
  d.level = level;
  switch (kind) {
    case EnvKind::Blocksworld:
      // 3 to 15 blocks.
      d.num_blocks = 3 + level * 3;
      break;
    case EnvKind::Gridworld: {
      // 4x4 to 12x12, obstacle density 10% to 30%, 1 to 5 goals.
      d.grid_width = 4 + level * 2;
      d.grid_height = 4 + level * 2;
      const double density = 0.10 + 0.05 * level;
      d.num_obstacles = static_cast<int>(density * d.grid_width * d.grid_height);
      d.num_goals = 1 + level;
      break;
    }
    case EnvKind::BoxLift:
      // 3 to 6 robots (capacity 20-120), 4 to 12 boxes (weight 30-250).
      d.num_robots = 3 + (level * 3) / 4;
      d.num_boxes = 4 + level * 2;
      d.cap_min = 20;
      d.cap_max = 120;
      d.weight_min = 30;
      d.weight_max = 30 + (level + 1) * 44;
      break;
    case EnvKind::BoxNet:
      // 2x2 to 4x4 cells, 2 to 8 boxes.
      d.grid_width = 2 + (level + 1) / 2;
      d.grid_height = 2 + level / 2;
      d.num_boxes = 2 + (level * 6) / 4;
      break;
    case EnvKind::PathRacecars:
      d.num_robots = 1 + level;
      d.num_obstacles = 1 + level;
      break;
    case EnvKind::ShapeFormation:
      d.num_boxes = 3 + level;
      d.num_obstacles = 1 + level / 2;  // bowls
      break;
    case EnvKind::PathDrones:
      d.num_robots = 2 + level;
      break;
  }
  return d;
}

void to_json(json& j, const DifficultyParams& d) {
  j = json{{"level", d.level},
           {"grid_width", d.grid_width},
           {"grid_height", d.grid_height},
           {"num_blocks", d.num_blocks},
           {"num_robots", d.num_robots},
           {"num_boxes", d.num_boxes},
           {"num_goals", d.num_goals},
           {"num_obstacles", d.num_obstacles},
           {"cap_min", d.cap_min},
           {"cap_max", d.cap_max},
           {"weight_min", d.weight_min},
           {"weight_max", d.weight_max}};
}

void from_json(const json& j, DifficultyParams& d) {
  d.level = j.value("level", 0);
  d.grid_width = j.value("grid_width", 0);
  d.grid_height = j.value("grid_height", 0);
  d.num_blocks = j.value("num_blocks", 0);
  d.num_robots = j.value("num_robots", 0);
  d.num_boxes = j.value("num_boxes", 0);
  d.num_goals = j.value("num_goals", 0);
  d.num_obstacles = j.value("num_obstacles", 0);
  d.cap_min = j.value("cap_min", 0);
  d.cap_max = j.value("cap_max", 0);
  d.weight_min = j.value("weight_min", 0);
  d.weight_max = j.value("weight_max", 0);
}

Plan Plan::actions(std::vector<Step> steps) {
  Plan p;
  p.variant = Variant::Actions;
  p.steps = std::move(steps);
  return p;
}

Plan Plan::waypoints(std::map<std::string, std::vector<Waypoint>> trajectories) {
  Plan p;
  p.variant = Variant::Waypoints;
  p.trajectories = std::move(trajectories);
  return p;
}

Plan::Variant plan_variant_for(EnvKind kind) {
  return is_discrete(kind) ? Plan::Variant::Actions : Plan::Variant::Waypoints;
}

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::None: return "none";
    case FailureReason::ParseError: return "parse_error";
    case FailureReason::ExecTimeout: return "exec_timeout";
    case FailureReason::IllegalAction: return "illegal_action";
    case FailureReason::CollisionViolation: return "collision_violation";
    case FailureReason::VelocityViolation: return "velocity_violation";
    case FailureReason::TimeLimitViolation: return "time_limit_violation";
    case FailureReason::GoalNotReached: return "goal_not_reached";
    case FailureReason::SafeDistanceViolation: return "safe_distance_violation";
    case FailureReason::OrderViolation: return "order_violation";
  }
  return "unknown";
}

std::optional<FailureReason> failure_reason_from_string(std::string_view name) {
  constexpr FailureReason all[] = {
      FailureReason::None,
      FailureReason::ParseError,
      FailureReason::ExecTimeout,
      FailureReason::IllegalAction,
      FailureReason::CollisionViolation,
      FailureReason::VelocityViolation,
      FailureReason::TimeLimitViolation,
      FailureReason::GoalNotReached,
      FailureReason::SafeDistanceViolation,
      FailureReason::OrderViolation,
  };
  for (FailureReason r : all) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

Verdict Verdict::pass(std::string detail) {
  Verdict v;
  v.syntax_ok = true;
  v.goal_reached = true;
  v.constraints_ok = true;
  v.success = true;
  v.failure_reason = FailureReason::None;
  v.detail = std::move(detail);
  return v;
}

Verdict Verdict::fail(FailureReason reason, std::string detail, bool syntax_ok,
                      bool goal_reached, bool constraints_ok) {
  if (reason == FailureReason::None || (syntax_ok && goal_reached && constraints_ok)) {
    throw std::invalid_argument("Verdict::fail requires a real failure");
  }
  Verdict v;
  v.syntax_ok = syntax_ok;
  v.goal_reached = goal_reached;
  v.constraints_ok = constraints_ok;
  v.success = false;
  v.failure_reason = reason;
  v.detail = std::move(detail);
  return v;
}

void to_json(json& j, const Verdict& v) {
  j = json{{"syntax_ok", v.syntax_ok},
           {"goal_reached", v.goal_reached},
           {"constraints_ok", v.constraints_ok},
           {"success", v.success},
           {"failure_reason", std::string(to_string(v.failure_reason))},
           {"detail", v.detail}};
}

void from_json(const json& j, Verdict& v) {
  v.syntax_ok = j.at("syntax_ok").get<bool>();
  v.goal_reached = j.at("goal_reached").get<bool>();
  v.constraints_ok = j.at("constraints_ok").get<bool>();
  v.success = j.at("success").get<bool>();
  const auto reason = failure_reason_from_string(j.at("failure_reason").get<std::string>());
  if (!reason) throw std::invalid_argument("unknown failure_reason");
  v.failure_reason = *reason;
  v.detail = j.value("detail", "");
}

void to_json(json& j, const GoalSpec& g) {
  j = json{{"description", g.description}, {"towers", g.towers}};
}

void from_json(const json& j, GoalSpec& g) {
  g.description = j.value("description", "");
  g.towers = j.value("towers", std::vector<std::vector<std::string>>{});
}

}  // namespace tampforge
