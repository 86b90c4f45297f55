#include "tampforge/verifier.hpp"

#include <sstream>

namespace tampforge {

ApplyResult<EnvState> apply_step_env(const EnvState& state, const Step& step) {
  return std::visit(
      [&](const auto& s) -> ApplyResult<EnvState> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ContinuousState>) {
          return IllegalAction{"continuous envs take waypoint plans, not actions"};
        } else {
          auto result = apply_step(s, step);
          if (auto* illegal = std::get_if<IllegalAction>(&result)) return *illegal;
          return EnvState{std::get<S>(std::move(result))};
        }
      },
      state);
}

bool is_goal_env(const EnvState& state, const GoalSpec& goal) {
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BlocksworldState>) {
          return is_goal(s, goal);
        } else if constexpr (std::is_same_v<S, ContinuousState>) {
          throw std::invalid_argument("is_goal_env: continuous envs need a plan");
        } else {
          return is_goal(s);
        }
      },
      state);
}

std::vector<Step> enumerate_candidate_steps_env(const EnvState& state) {
  return std::visit(
      [&](const auto& s) -> std::vector<Step> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ContinuousState>) {
          throw std::invalid_argument("no symbolic candidate steps for continuous envs");
        } else {
          return enumerate_candidate_steps(s);
        }
      },
      state);
}

namespace {

Verdict verify_discrete(const TaskInstance& instance, const Plan& plan,
                        const VerificationConfig& config) {
  EnvState state = instance.initial_state;
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    auto result = apply_step_env(state, plan.steps[i]);
    if (auto* illegal = std::get_if<IllegalAction>(&result)) {
      return Verdict::fail(FailureReason::IllegalAction,
                           "step " + std::to_string(i + 1) + ": " + illegal->detail,
                           /*syntax_ok=*/true, /*goal_reached=*/false,
                           /*constraints_ok=*/false);
    }
    state = std::get<EnvState>(std::move(result));
  }

  const bool reached = is_goal_env(state, instance.goal);
  if (static_cast<int>(plan.steps.size()) > instance.step_limit) {
    return Verdict::fail(FailureReason::TimeLimitViolation,
                         "plan uses " + std::to_string(plan.steps.size()) +
                             " steps, limit is " + std::to_string(instance.step_limit),
                         true, reached, false);
  }
  if (!reached) {
    return Verdict::fail(FailureReason::GoalNotReached, "goal predicate false after replay",
                         true, false, true);
  }
  std::string detail;
  if (config.record_trace) {
    detail = "replayed " + std::to_string(plan.steps.size()) + " steps";
  }
  return Verdict::pass(std::move(detail));
}

Verdict verify_continuous(const TaskInstance& instance, const Plan& plan,
                          const VerificationConfig& config) {
  const ContinuousState& state = instance.continuous();

  // Shape Formation is judged on final placements only.
  if (instance.env_kind != EnvKind::ShapeFormation) {
    Verdict motion = check_motion_constraints(state.scene, plan, config.speed_epsilon);
    if (!motion.success) return motion;
  }
  return check_task_goal(instance.env_kind, state, plan);
}

}  // namespace

Verdict verify_plan(const TaskInstance& instance, const Plan& plan,
                    const VerificationConfig& config) {
  if (plan.variant != plan_variant_for(instance.env_kind)) {
    return Verdict::fail(FailureReason::ParseError,
                         "plan variant does not fit the environment", false, false, false);
  }
  return plan.variant == Plan::Variant::Actions ? verify_discrete(instance, plan, config)
                                                : verify_continuous(instance, plan, config);
}

Verdict verify_parsed(const TaskInstance& instance, const PlanParseOutcome& outcome,
                      const VerificationConfig& config) {
  if (const auto* error = std::get_if<PlanParseError>(&outcome)) {
    return Verdict::fail(FailureReason::ParseError,
                         std::string(to_string(error->kind)) + ": " + error->message,
                         false, false, false);
  }
  return verify_plan(instance, std::get<Plan>(outcome), config);
}

Verdict verify(const TaskInstance& instance, std::string_view raw_output,
               const SandboxResult& sandbox_result, const VerificationConfig& config) {
  if (sandbox_result.timed_out) {
    std::ostringstream detail;
    detail << "guest execution exceeded " << instance.exec_timeout << " s (elapsed "
           << sandbox_result.elapsed_seconds << " s)";
    return Verdict::fail(FailureReason::ExecTimeout, detail.str(), false, false, false);
  }
  // A valid document printed before a crash still counts as parsed.
  return verify_parsed(instance, parse_plan(raw_output, instance), config);
}

}  // namespace tampforge
