#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tampforge/complexity.hpp"
#include "tampforge/instance.hpp"
#include "tampforge/llm.hpp"
#include "tampforge/prompt.hpp"
#include "tampforge/sandbox.hpp"
#include "tampforge/types.hpp"
#include "tampforge/verifier.hpp"

namespace tampforge {

struct OrchestratorConfig {
  Method method = Method::CodeSymbolicPlanner;
  int max_rounds = 3;  // sweepable 1..5; at the cap the answer is force-accepted
  int saycan_k = 5;
  std::string prompts_version = "v1";
  std::string pattern_table = "python_v1";
  int llm_call_budget = 20;         // per episode
  int continuous_step_budget = 24;  // waypoint proposals per robot (SayCan/HMAS-2)
  int max_history_chars = 24000;    // steer context cap; oldest code bodies drop first
};

struct SteerDecision {
  enum class Kind { Accept, Revise, ForceAccept };

  Kind kind = Kind::Revise;
  std::string guidance;
};

std::string_view to_string(SteerDecision::Kind kind);

struct RoundRecord {
  std::string task_prompt;
  std::string generated_code;
  SandboxResult sandbox_result;
  std::string check_code;
  std::string check_report;
  std::optional<ComplexityReport> complexity_report;
  std::string steer_decision;  // "accept" | "revise" | "force_accept"
  std::string guidance_text;
};

struct EpisodeRecord {
  EnvKind env_kind = EnvKind::Gridworld;
  uint64_t seed = 0;
  DifficultyParams difficulty;
  Method method = Method::CodeSymbolicPlanner;
  int max_rounds = 1;
  std::vector<RoundRecord> rounds;
  std::optional<Plan> final_plan;
  Verdict final_verdict;
  double wall_clock_seconds = 0.0;
  bool method_error = false;
  std::string method_error_detail;
  int llm_calls = 0;

  std::string key() const;  // resume identity: env|seed|method|rounds
};

// normalize_timing zeroes wall-clock and sandbox elapsed fields so that mock
// runs serialize byte-identically across machines and runs.
json episode_to_json(const EpisodeRecord& record, bool normalize_timing);
EpisodeRecord episode_from_json(const json& j);

// Last fenced code block in an LLM response (```python preferred), or the
// whole text when there is no fence.
std::string extract_code_block(const std::string& text);

// Runs one (instance, method) episode through the configured components.
class Orchestrator {
 public:
  Orchestrator(PromptLibrary prompts, std::shared_ptr<Gateway> gateway,
               std::shared_ptr<Sandbox> sandbox, OrchestratorConfig config);

  EpisodeRecord run(const TaskInstance& instance) const;

  EpisodeRecord run_code_as_symbolic_planner(const TaskInstance& instance) const;
  EpisodeRecord run_only_question(const TaskInstance& instance) const;
  EpisodeRecord run_code_answer(const TaskInstance& instance) const;
  EpisodeRecord run_saycan(const TaskInstance& instance) const;
  EpisodeRecord run_hmas2(const TaskInstance& instance) const;

  const OrchestratorConfig& config() const { return config_; }
  const PromptLibrary& prompts() const { return prompts_; }

 private:
  struct EpisodeContext {
    int calls = 0;
    bool budget_hit = false;
  };

  std::string complete(EpisodeContext& ctx, const std::string& prompt) const;
  SandboxLimits limits_for(const TaskInstance& instance) const;

  PromptLibrary prompts_;
  std::shared_ptr<Gateway> gateway_;
  std::shared_ptr<Sandbox> sandbox_;
  OrchestratorConfig config_;
  PatternTable pattern_table_;
};

}  // namespace tampforge
