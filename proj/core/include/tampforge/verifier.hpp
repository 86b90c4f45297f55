#pragma once

#include <optional>
#include <string_view>

#include "tampforge/continuous.hpp"
#include "tampforge/instance.hpp"
#include "tampforge/plan_format.hpp"
#include "tampforge/sandbox.hpp"
#include "tampforge/types.hpp"

namespace tampforge {

struct VerificationConfig {
  double exec_timeout = kDefaultExecTimeout;
  double speed_epsilon = kSpeedEpsilon;
  bool record_trace = false;
};

// Applies the three success criteria to raw guest output. Precedence of
// failure classes: ExecTimeout, then ParseError, then IllegalAction, then
// goal/constraint failures. All failures are verdicts, never errors.
Verdict verify(const TaskInstance& instance, std::string_view raw_output,
               const SandboxResult& sandbox_result, const VerificationConfig& config = {});

// Verifies an already-extracted parse outcome (used by methods that answer
// in plain text rather than through the sandbox).
Verdict verify_parsed(const TaskInstance& instance, const PlanParseOutcome& outcome,
                      const VerificationConfig& config = {});

// Replays a structurally valid plan against the instance.
Verdict verify_plan(const TaskInstance& instance, const Plan& plan,
                    const VerificationConfig& config = {});

// Generic dispatch over the discrete state variant, shared by the verifier
// and the step-wise baseline methods.
ApplyResult<EnvState> apply_step_env(const EnvState& state, const Step& step);
bool is_goal_env(const EnvState& state, const GoalSpec& goal);
std::vector<Step> enumerate_candidate_steps_env(const EnvState& state);

}  // namespace tampforge
