#include "tampforge/prompt.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace tampforge {

namespace fs = std::filesystem;

#ifndef TAMPFORGE_DEFAULT_CONFIG_DIR
#define TAMPFORGE_DEFAULT_CONFIG_DIR "configs"
#endif

std::string default_config_dir() {
  if (const char* dir = std::getenv("TAMPFORGE_CONFIG_DIR"); dir && *dir) return dir;
  return TAMPFORGE_DEFAULT_CONFIG_DIR;
}

PromptLibrary PromptLibrary::load(const std::string& version, const std::string& root) {
  const fs::path base =
      (root.empty() ? fs::path(default_config_dir()) / "prompts" : fs::path(root)) / version;
  if (!fs::is_directory(base)) {
    throw std::runtime_error("prompt template directory not found: " + base.string());
  }
  PromptLibrary lib;
  lib.version_ = version;
  for (const auto& entry : fs::directory_iterator(base)) {
    if (entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path());
    std::ostringstream body;
    body << in.rdbuf();
    lib.templates_[entry.path().stem().string()] = body.str();
  }
  if (lib.templates_.empty()) {
    throw std::runtime_error("no prompt templates in " + base.string());
  }
  return lib;
}

bool PromptLibrary::has(const std::string& template_name) const {
  return templates_.count(template_name) > 0;
}

std::string PromptLibrary::render(const std::string& template_name,
                                  const std::map<std::string, std::string>& vars) const {
  const auto it = templates_.find(template_name);
  if (it == templates_.end()) {
    throw std::runtime_error("unknown prompt template '" + template_name + "' in version " +
                             version_);
  }
  std::string text = it->second;
  for (const auto& [key, value] : vars) {
    const std::string placeholder = "{{" + key + "}}";
    size_t pos = text.find(placeholder);
    while (pos != std::string::npos) {
      text.replace(pos, placeholder.size(), value);
      pos = text.find(placeholder, pos + value.size());
    }
  }
  static const std::regex placeholder_re(R"(\{\{[a-z_]+\}\})");
  std::smatch leftover;
  if (std::regex_search(text, leftover, placeholder_re)) {
    throw std::runtime_error("unfilled placeholder in template '" + template_name +
                             "': " + leftover.str());
  }
  return text;
}

namespace {

std::string task_template_name(EnvKind kind) {
  switch (kind) {
    case EnvKind::BoxNet: return "task_boxnet";
    case EnvKind::Blocksworld: return "task_blocksworld";
    case EnvKind::BoxLift: return "task_boxlift";
    case EnvKind::Gridworld: return "task_gridworld";
    case EnvKind::PathRacecars: return "task_racecars";
    case EnvKind::ShapeFormation: return "task_shape";
    case EnvKind::PathDrones: return "task_drones";
  }
  return "task_gridworld";
}

std::string limits_text(const TaskInstance& instance) {
  std::ostringstream out;
  if (is_discrete(instance.env_kind)) {
    out << "The plan may use at most " << instance.step_limit << " time steps.";
  } else {
    const ContinuousScene& scene = instance.continuous().scene;
    out << "All motion must finish by t = " << scene.time_limit
        << " s. Maximum speed per robot: " << scene.v_max << " m/s.";
    if (scene.safe_distance > 0.0) {
      out << " Keep at least " << scene.safe_distance
          << " m clearance from obstacles and between robots.";
    }
  }
  out << " Your program must finish within " << instance.exec_timeout << " seconds.";
  return out.str();
}

std::string goal_text(const TaskInstance& instance) {
  std::string text = instance.goal.description;
  if (!instance.goal.towers.empty()) {
    text += " Target towers, each listed bottom to top: " + json(instance.goal.towers).dump();
  }
  return text;
}

}  // namespace

std::string render_prompt(const TaskInstance& instance, const PromptLibrary& prompts) {
  const bool actions = plan_variant_for(instance.env_kind) == Plan::Variant::Actions;
  const std::string format_spec =
      prompts.render(actions ? "format_actions" : "format_waypoints", {});

  const json state = instance_to_json(instance)["initial_state"];
  std::map<std::string, std::string> vars{{"state_json", state.dump(2)},
                                          {"goal", goal_text(instance)},
                                          {"limits", limits_text(instance)},
                                          {"format_spec", format_spec}};
  if (instance.env_kind == EnvKind::PathDrones) {
    vars["target_side"] = instance.continuous().scene.hole
                              ? instance.continuous().scene.hole->target_side
                              : "right";
  }
  return prompts.render(task_template_name(instance.env_kind), vars);
}

}  // namespace tampforge
