#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tampforge {

using json = nlohmann::json;

enum class EnvKind {
  BoxNet,
  Blocksworld,
  BoxLift,
  Gridworld,
  PathRacecars,
  ShapeFormation,
  PathDrones,
};

inline constexpr EnvKind kAllEnvKinds[] = {
    EnvKind::BoxNet,         EnvKind::Blocksworld,    EnvKind::BoxLift,
    EnvKind::Gridworld,      EnvKind::PathRacecars,   EnvKind::ShapeFormation,
    EnvKind::PathDrones,
};

bool is_discrete(EnvKind kind);
std::string_view to_string(EnvKind kind);
std::optional<EnvKind> env_kind_from_string(std::string_view name);

enum class Method {
  CodeSymbolicPlanner,
  OnlyQuestion,
  CodeAnswer,
  SayCan,
  HMAS2,
};

inline constexpr Method kAllMethods[] = {
    Method::CodeSymbolicPlanner, Method::OnlyQuestion, Method::CodeAnswer,
    Method::SayCan,              Method::HMAS2,
};

std::string_view to_string(Method method);
std::optional<Method> method_from_string(std::string_view name);

// One flat parameter block shared by all environments; each generator reads
// the fields that apply to its env kind (documented in docs/schemas.md).
// `level` is the difficulty bucket (0..4) used for sweep reporting.
struct DifficultyParams {
  int level = 0;
  int grid_width = 0;
  int grid_height = 0;
  int num_blocks = 0;
  int num_robots = 0;
  int num_boxes = 0;
  int num_goals = 0;
  int num_obstacles = 0;
  int cap_min = 0;     // BoxLift robot capacity range
  int cap_max = 0;
  int weight_min = 0;  // BoxLift box weight range
  int weight_max = 0;

  friend bool operator==(const DifficultyParams&, const DifficultyParams&) = default;
};

// Per-env defaults spanning trivial to hard, level in [0, 4].
DifficultyParams default_difficulty(EnvKind kind, int level);
inline constexpr int kDifficultyLevels = 5;

void to_json(json& j, const DifficultyParams& d);
void from_json(const json& j, DifficultyParams& d);

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Action {
  std::string robot;
  std::string action;
  std::vector<json> args;

  friend bool operator==(const Action&, const Action&) = default;
};

// Simultaneous per-robot actions forming one discrete time step.
using Step = std::vector<Action>;

struct Plan {
  enum class Variant { Actions, Waypoints };

  Variant variant = Variant::Actions;
  std::vector<Step> steps;                                      // Actions
  std::map<std::string, std::vector<Waypoint>> trajectories;    // Waypoints

  static Plan actions(std::vector<Step> steps);
  static Plan waypoints(std::map<std::string, std::vector<Waypoint>> trajectories);

  friend bool operator==(const Plan&, const Plan&) = default;
};

// Which plan variant an environment consumes.
Plan::Variant plan_variant_for(EnvKind kind);

enum class FailureReason {
  None,
  ParseError,
  ExecTimeout,
  IllegalAction,
  CollisionViolation,
  VelocityViolation,
  TimeLimitViolation,
  GoalNotReached,
  SafeDistanceViolation,
  OrderViolation,
};

std::string_view to_string(FailureReason reason);
std::optional<FailureReason> failure_reason_from_string(std::string_view name);

// Three-criteria trial outcome. Construct through pass()/fail() only: they
// enforce success == (syntax_ok && goal_reached && constraints_ok) and
// failure_reason == None exactly when success.
struct Verdict {
  bool syntax_ok = false;
  bool goal_reached = false;
  bool constraints_ok = false;
  bool success = false;
  FailureReason failure_reason = FailureReason::ParseError;
  std::string detail;

  static Verdict pass(std::string detail = "");
  static Verdict fail(FailureReason reason, std::string detail, bool syntax_ok,
                      bool goal_reached, bool constraints_ok);

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

void to_json(json& j, const Verdict& v);
void from_json(const json& j, Verdict& v);

// Raised when difficulty parameters cannot yield a solvable instance after
// the documented number of re-samples.
class UnsatisfiableError : public std::runtime_error {
 public:
  explicit UnsatisfiableError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kGenerationResampleLimit = 100;

// Structured goal. Most envs encode the goal in the state/scene itself;
// Blocksworld carries explicit target towers (bottom to top).
struct GoalSpec {
  std::string description;
  std::vector<std::vector<std::string>> towers;

  friend bool operator==(const GoalSpec&, const GoalSpec&) = default;
};

void to_json(json& j, const GoalSpec& g);
void from_json(const json& j, GoalSpec& g);

}  // namespace tampforge
