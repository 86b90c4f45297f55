#include "tampforge/plan_format.hpp"

#include <algorithm>
#include <sstream>

namespace tampforge {

std::string_view to_string(PlanParseError::Kind kind) {
  switch (kind) {
    case PlanParseError::Kind::NoDocument: return "no_document";
    case PlanParseError::Kind::SchemaMismatch: return "schema_mismatch";
    case PlanParseError::Kind::VariantMismatch: return "variant_mismatch";
  }
  return "unknown";
}

json plan_to_json(const Plan& plan) {
  if (plan.variant == Plan::Variant::Actions) {
    json steps = json::array();
    for (const Step& step : plan.steps) {
      json actions = json::array();
      for (const Action& a : step) {
        actions.push_back(json{{"robot", a.robot}, {"action", a.action}, {"args", a.args}});
      }
      steps.push_back(std::move(actions));
    }
    return json{{"variant", "actions"}, {"steps", std::move(steps)}};
  }
  json trajectories = json::object();
  for (const auto& [robot, traj] : plan.trajectories) {
    json points = json::array();
    for (const Waypoint& w : traj) points.push_back(json::array({w.x, w.y, w.t}));
    trajectories[robot] = std::move(points);
  }
  return json{{"variant", "waypoints"}, {"trajectories", std::move(trajectories)}};
}

std::string serialize_plan(const Plan& plan) {
  return std::string(kPlanMarker) + "\n" + plan_to_json(plan).dump() + "\n";
}

std::optional<Plan> plan_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("variant")) return std::nullopt;
  if (doc["variant"] == "actions") {
    if (!doc.contains("steps") || !doc["steps"].is_array()) return std::nullopt;
    std::vector<Step> steps;
    for (const json& step_json : doc["steps"]) {
      if (!step_json.is_array()) return std::nullopt;
      Step step;
      for (const json& a : step_json) {
        if (!a.is_object() || !a.contains("robot") || !a.contains("action")) {
          return std::nullopt;
        }
        Action action;
        action.robot = a["robot"].get<std::string>();
        action.action = a["action"].get<std::string>();
        for (const json& arg : a.value("args", json::array())) action.args.push_back(arg);
        step.push_back(std::move(action));
      }
      steps.push_back(std::move(step));
    }
    return Plan::actions(std::move(steps));
  }
  if (doc["variant"] == "waypoints") {
    if (!doc.contains("trajectories") || !doc["trajectories"].is_object()) {
      return std::nullopt;
    }
    std::map<std::string, std::vector<Waypoint>> trajectories;
    for (const auto& [robot, points] : doc["trajectories"].items()) {
      if (!points.is_array()) return std::nullopt;
      std::vector<Waypoint> traj;
      for (const json& p : points) {
        if (!p.is_array() || p.size() != 3) return std::nullopt;
        traj.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
      }
      trajectories[robot] = std::move(traj);
    }
    return Plan::waypoints(std::move(trajectories));
  }
  return std::nullopt;
}

namespace {

using Kind = PlanParseError::Kind;

PlanParseError err(Kind kind, std::string message) {
  return PlanParseError{kind, std::move(message)};
}

PlanParseOutcome build_actions_plan(const json& doc) {
  if (!doc.contains("steps") || !doc["steps"].is_array()) {
    return err(Kind::SchemaMismatch, "actions document needs a 'steps' array");
  }
  std::vector<Step> steps;
  for (const json& step_json : doc["steps"]) {
    if (!step_json.is_array()) {
      return err(Kind::SchemaMismatch, "each step must be an array of actions");
    }
    Step step;
    for (const json& action_json : step_json) {
      if (!action_json.is_object() || !action_json.contains("robot") ||
          !action_json.contains("action") || !action_json["robot"].is_string() ||
          !action_json["action"].is_string()) {
        return err(Kind::SchemaMismatch, "each action needs string 'robot' and 'action'");
      }
      Action a;
      a.robot = action_json["robot"].get<std::string>();
      a.action = action_json["action"].get<std::string>();
      if (action_json.contains("args")) {
        if (!action_json["args"].is_array()) {
          return err(Kind::SchemaMismatch, "'args' must be an array");
        }
        for (const json& arg : action_json["args"]) a.args.push_back(arg);
      }
      step.push_back(std::move(a));
    }
    steps.push_back(std::move(step));
  }
  return Plan::actions(std::move(steps));
}

PlanParseOutcome build_waypoints_plan(const json& doc, const TaskInstance& instance) {
  if (!doc.contains("trajectories") || !doc["trajectories"].is_object()) {
    return err(Kind::SchemaMismatch, "waypoints document needs a 'trajectories' object");
  }
  const auto known = expected_robot_ids(instance);
  const ContinuousState* state = std::get_if<ContinuousState>(&instance.initial_state);

  std::map<std::string, std::vector<Waypoint>> trajectories;
  for (const auto& [robot, points] : doc["trajectories"].items()) {
    if (std::find(known.begin(), known.end(), robot) == known.end()) {
      return err(Kind::SchemaMismatch, "unknown robot id '" + robot + "'");
    }
    if (!points.is_array()) {
      return err(Kind::SchemaMismatch, "trajectory of '" + robot + "' must be an array");
    }
    std::vector<Waypoint> traj;
    for (const json& p : points) {
      if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
          !p[2].is_number()) {
        return err(Kind::SchemaMismatch, "waypoints must be [x, y, t] numbers");
      }
      Waypoint w{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
      if (w.t < 0.0) return err(Kind::SchemaMismatch, "waypoint times must be non-negative");
      if (!traj.empty() && w.t <= traj.back().t) {
        return err(Kind::SchemaMismatch,
                   "waypoint times of '" + robot + "' must be strictly increasing");
      }
      traj.push_back(w);
    }
    if (state && !traj.empty()) {
      const Vec2 start = state->scene.robots.at(robot).start;
      if (distance(start, {traj.front().x, traj.front().y}) > 1e-6) {
        return err(Kind::SchemaMismatch,
                   "trajectory of '" + robot + "' must begin at its start position");
      }
    }
    if (!traj.empty()) trajectories[robot] = std::move(traj);
  }
  return Plan::waypoints(std::move(trajectories));
}

PlanParseOutcome validate_document(const json& doc, const TaskInstance& instance) {
  if (!doc.is_object() || !doc.contains("variant") || !doc["variant"].is_string()) {
    return err(Kind::SchemaMismatch, "plan document must be an object with a 'variant'");
  }
  const std::string variant = doc["variant"].get<std::string>();
  if (variant != "actions" && variant != "waypoints") {
    return err(Kind::SchemaMismatch, "unknown variant '" + variant + "'");
  }
  const bool wants_actions = plan_variant_for(instance.env_kind) == Plan::Variant::Actions;
  if (wants_actions != (variant == "actions")) {
    return err(Kind::VariantMismatch,
               std::string(to_string(instance.env_kind)) + " expects a " +
                   (wants_actions ? "'actions'" : "'waypoints'") + " plan, got '" + variant + "'");
  }
  return wants_actions ? build_actions_plan(doc) : build_waypoints_plan(doc, instance);
}

// Parses exactly one JSON value starting at `pos`, tolerating trailing text.
std::optional<json> parse_one_json(std::string_view text, size_t pos) {
  std::istringstream stream{std::string(text.substr(pos))};
  json value;
  try {
    stream >> value;
  } catch (const json::exception&) {
    return std::nullopt;
  }
  return value;
}

bool marker_at_line(std::string_view text, size_t pos) {
  if (pos != 0 && text[pos - 1] != '\n') return false;
  size_t end = pos + kPlanMarker.size();
  while (end < text.size() && (text[end] == ' ' || text[end] == '\r')) ++end;
  return end >= text.size() || text[end] == '\n';
}

}  // namespace

PlanParseOutcome parse_plan(std::string_view raw_output, const TaskInstance& instance) {
  std::optional<Plan> last_valid;
  std::optional<PlanParseError> last_error;
  bool saw_marker = false;

  size_t pos = raw_output.find(kPlanMarker);
  while (pos != std::string_view::npos) {
    if (marker_at_line(raw_output, pos)) {
      saw_marker = true;
      const size_t line_end = raw_output.find('\n', pos);
      if (line_end != std::string_view::npos) {
        if (const auto doc = parse_one_json(raw_output, line_end + 1)) {
          auto outcome = validate_document(*doc, instance);
          if (auto* plan = std::get_if<Plan>(&outcome)) {
            last_valid = std::move(*plan);
          } else {
            last_error = std::get<PlanParseError>(outcome);
          }
        } else {
          last_error = err(Kind::SchemaMismatch, "marker not followed by valid JSON");
        }
      } else {
        last_error = err(Kind::SchemaMismatch, "marker at end of output without a document");
      }
    }
    pos = raw_output.find(kPlanMarker, pos + 1);
  }

  if (last_valid) return *last_valid;
  if (saw_marker && last_error) return *last_error;
  return err(Kind::NoDocument, "no plan document in output");
}

PlanParseOutcome parse_plan_lenient(std::string_view raw_output, const TaskInstance& instance) {
  auto strict = parse_plan(raw_output, instance);
  if (std::holds_alternative<Plan>(strict)) return strict;

  std::optional<Plan> last_valid;
  std::optional<PlanParseError> last_error;
  for (size_t pos = raw_output.find('{'); pos != std::string_view::npos;
       pos = raw_output.find('{', pos + 1)) {
    const auto doc = parse_one_json(raw_output, pos);
    if (!doc || !doc->is_object() || !doc->contains("variant")) continue;
    auto outcome = validate_document(*doc, instance);
    if (auto* plan = std::get_if<Plan>(&outcome)) {
      last_valid = std::move(*plan);
    } else {
      last_error = std::get<PlanParseError>(outcome);
    }
  }
  if (last_valid) return *last_valid;
  if (last_error) return *last_error;
  return strict;
}

}  // namespace tampforge
