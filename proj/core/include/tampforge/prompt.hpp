#pragma once

#include <map>
#include <string>

#include "tampforge/instance.hpp"

namespace tampforge {

// Prompt templates are versioned files on disk, one directory per version
// (configs/prompts/v1). Placeholders use {{name}} syntax.
class PromptLibrary {
 public:
  // `root` is the prompts directory containing version subdirectories;
  // empty uses TAMPFORGE_CONFIG_DIR or the source-tree default.
  static PromptLibrary load(const std::string& version, const std::string& root = "");

  std::string render(const std::string& template_name,
                     const std::map<std::string, std::string>& vars) const;
  bool has(const std::string& template_name) const;
  const std::string& version() const { return version_; }

 private:
  std::string version_;
  std::map<std::string, std::string> templates_;
};

// Default configuration root: $TAMPFORGE_CONFIG_DIR if set, else the
// source-tree configs directory compiled into the library.
std::string default_config_dir();

// The task question for an instance: environment description, robot
// capabilities, goal, limits, and the required plan output format.
// Deterministic in (env_kind, seed, difficulty); no few-shot examples.
std::string render_prompt(const TaskInstance& instance, const PromptLibrary& prompts);

}  // namespace tampforge
