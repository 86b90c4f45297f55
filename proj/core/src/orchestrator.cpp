#include "tampforge/orchestrator.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <limits>
#include <regex>
#include <set>
#include <sstream>

#include "tampforge/plan_format.hpp"

namespace tampforge {

namespace {

// Internal signal: the per-episode LLM call budget ran out; the episode
// wraps up with whatever answer it has.
struct EpisodeBudgetStop {};

std::string truncate_text(const std::string& text, size_t limit) {
  if (text.size() <= limit) return text;
  return text.substr(0, limit) + "\n[... truncated ...]";
}

std::string tail_text(const std::string& text, size_t limit) {
  if (text.size() <= limit) return text;
  return "[... truncated ...]\n" + text.substr(text.size() - limit);
}

}  // namespace

std::string_view to_string(SteerDecision::Kind kind) {
  switch (kind) {
    case SteerDecision::Kind::Accept: return "accept";
    case SteerDecision::Kind::Revise: return "revise";
    case SteerDecision::Kind::ForceAccept: return "force_accept";
  }
  return "unknown";
}

std::string EpisodeRecord::key() const {
  std::ostringstream out;
  out << to_string(env_kind) << "|seed=" << seed << "|" << to_string(method)
      << "|rounds=" << max_rounds;
  return out.str();
}

namespace {

json round_to_json(const RoundRecord& round, bool normalize_timing) {
  SandboxResult sandbox = round.sandbox_result;
  if (normalize_timing) sandbox.elapsed_seconds = 0.0;
  sandbox.stderr_bytes = truncate_text(sandbox.stderr_bytes, 2000);
  json j{{"task_prompt", round.task_prompt},
         {"generated_code", round.generated_code},
         {"sandbox_result", sandbox},
         {"check_code", round.check_code},
         {"check_report", round.check_report},
         {"steer_decision", round.steer_decision},
         {"guidance_text", round.guidance_text}};
  if (round.complexity_report) j["complexity_report"] = *round.complexity_report;
  return j;
}

RoundRecord round_from_json(const json& j) {
  RoundRecord round;
  round.task_prompt = j.value("task_prompt", "");
  round.generated_code = j.value("generated_code", "");
  round.sandbox_result = j.value("sandbox_result", SandboxResult{});
  round.check_code = j.value("check_code", "");
  round.check_report = j.value("check_report", "");
  if (j.contains("complexity_report")) {
    round.complexity_report = j["complexity_report"].get<ComplexityReport>();
  }
  round.steer_decision = j.value("steer_decision", "");
  round.guidance_text = j.value("guidance_text", "");
  return round;
}

}  // namespace

json episode_to_json(const EpisodeRecord& record, bool normalize_timing) {
  json rounds = json::array();
  for (const RoundRecord& round : record.rounds) {
    rounds.push_back(round_to_json(round, normalize_timing));
  }
  json j{{"schema_version", kInstanceSchemaVersion},
         {"key", record.key()},
         {"env_kind", std::string(to_string(record.env_kind))},
         {"seed", record.seed},
         {"difficulty", record.difficulty},
         {"method", std::string(to_string(record.method))},
         {"max_rounds", record.max_rounds},
         {"rounds", std::move(rounds)},
         {"final_verdict", record.final_verdict},
         {"wall_clock_seconds", normalize_timing ? 0.0 : record.wall_clock_seconds},
         {"method_error", record.method_error},
         {"method_error_detail", record.method_error_detail},
         {"llm_calls", record.llm_calls}};
  j["final_plan"] = record.final_plan ? plan_to_json(*record.final_plan) : json(nullptr);
  return j;
}

EpisodeRecord episode_from_json(const json& j) {
  EpisodeRecord record;
  const auto kind = env_kind_from_string(j.at("env_kind").get<std::string>());
  const auto method = method_from_string(j.at("method").get<std::string>());
  if (!kind || !method) throw std::invalid_argument("bad episode record");
  record.env_kind = *kind;
  record.method = *method;
  record.seed = j.at("seed").get<uint64_t>();
  record.difficulty = j.value("difficulty", DifficultyParams{});
  record.max_rounds = j.value("max_rounds", 1);
  for (const json& round : j.value("rounds", json::array())) {
    record.rounds.push_back(round_from_json(round));
  }
  record.final_verdict = j.at("final_verdict").get<Verdict>();
  if (j.contains("final_plan") && !j["final_plan"].is_null()) {
    record.final_plan = plan_from_json(j["final_plan"]);
  }
  record.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  record.method_error = j.value("method_error", false);
  record.method_error_detail = j.value("method_error_detail", "");
  record.llm_calls = j.value("llm_calls", 0);
  return record;
}

std::string extract_code_block(const std::string& text) {
  // Last fenced block wins; models often emit prose, then the real program.
  static const std::regex fence_re(R"(```[ \t]*([A-Za-z0-9_+-]*)[ \t]*\r?\n([\s\S]*?)```)");
  std::string last;
  bool found = false;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), fence_re);
       it != std::sregex_iterator(); ++it) {
    last = (*it)[2].str();
    found = true;
  }
  return found ? last : text;
}

Orchestrator::Orchestrator(PromptLibrary prompts, std::shared_ptr<Gateway> gateway,
                           std::shared_ptr<Sandbox> sandbox, OrchestratorConfig config)
    : prompts_(std::move(prompts)),
      gateway_(std::move(gateway)),
      sandbox_(std::move(sandbox)),
      config_(std::move(config)),
      pattern_table_(PatternTable::python_v1()) {
  const auto path = std::filesystem::path(default_config_dir()) / "patterns" /
                    (config_.pattern_table + ".json");
  if (std::filesystem::exists(path)) {
    pattern_table_ = PatternTable::load(path.string());
  } else if (config_.pattern_table != "python_v1") {
    throw std::runtime_error("pattern table not found: " + path.string());
  }
}

std::string Orchestrator::complete(EpisodeContext& ctx, const std::string& prompt) const {
  if (ctx.calls >= config_.llm_call_budget) {
    ctx.budget_hit = true;
    throw EpisodeBudgetStop{};
  }
  ++ctx.calls;
  ChatRequest request;
  request.messages = {{"user", prompt}};
  request.temperature = 0.0;
  return gateway_->complete(request);
}

SandboxLimits Orchestrator::limits_for(const TaskInstance& instance) const {
  SandboxLimits limits;
  limits.timeout_seconds = instance.exec_timeout;
  return limits;
}

namespace {

std::string sandbox_summary(const SandboxResult& r) {
  std::ostringstream out;
  if (r.timed_out) {
    out << "timed out";
  } else if (r.killed) {
    out << "killed by signal " << r.term_signal;
  } else {
    out << "exit status " << r.exit_status;
  }
  return out.str();
}

std::optional<Plan> plan_of(const PlanParseOutcome& outcome) {
  if (const Plan* plan = std::get_if<Plan>(&outcome)) return *plan;
  return std::nullopt;
}

SteerDecision parse_steer(const std::string& response) {
  SteerDecision decision;
  const std::regex decision_re(R"(DECISION:\s*(accept|revise))", std::regex::icase);
  std::smatch m;
  if (std::regex_search(response, m, decision_re)) {
    std::string kind = m[1].str();
    std::transform(kind.begin(), kind.end(), kind.begin(), ::tolower);
    decision.kind =
        kind == "accept" ? SteerDecision::Kind::Accept : SteerDecision::Kind::Revise;
  }
  const size_t g = response.find("GUIDANCE:");
  if (g != std::string::npos) {
    decision.guidance = response.substr(g + 9);
    while (!decision.guidance.empty() &&
           (decision.guidance.front() == ' ' || decision.guidance.front() == '\n')) {
      decision.guidance.erase(decision.guidance.begin());
    }
    while (!decision.guidance.empty() &&
           std::isspace(static_cast<unsigned char>(decision.guidance.back()))) {
      decision.guidance.pop_back();
    }
  }
  return decision;
}

std::string extract_check_line(const SandboxResult& result) {
  if (result.timed_out) return "CHECK: FAIL (checking code timed out)";
  std::istringstream stream(result.stdout_bytes);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.rfind("CHECK:", 0) == 0) return line;
  }
  return "CHECK: FAIL (checking code produced no report, " + sandbox_summary(result) + ")";
}

}  // namespace

EpisodeRecord Orchestrator::run(const TaskInstance& instance) const {
  switch (config_.method) {
    case Method::CodeSymbolicPlanner: return run_code_as_symbolic_planner(instance);
    case Method::OnlyQuestion: return run_only_question(instance);
    case Method::CodeAnswer: return run_code_answer(instance);
    case Method::SayCan: return run_saycan(instance);
    case Method::HMAS2: return run_hmas2(instance);
  }
  throw std::logic_error("unknown method");
}

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace

// Shared core of Code-as-Symbolic-Planner and Code Answer: with a single
// round there is nothing to steer, so the two methods coincide.
EpisodeRecord Orchestrator::run_code_as_symbolic_planner(const TaskInstance& instance) const {
  Stopwatch watch;
  EpisodeRecord record;
  record.env_kind = instance.env_kind;
  record.seed = instance.seed;
  record.difficulty = instance.difficulty;
  record.method = config_.method;
  record.max_rounds = config_.max_rounds;

  const std::string question = render_prompt(instance, prompts_);
  EpisodeContext ctx;

  // History shown to the revise prompt and to SteerLLM. When it outgrows the
  // context cap, the oldest program bodies are dropped first; the verdict
  // summaries always stay.
  struct HistoryEntry {
    std::string code;
    std::string execution;
    std::string check_report;
    std::string complexity;
    std::string decision;
    std::string guidance;
  };
  std::vector<HistoryEntry> history;
  const auto history_text = [&]() {
    std::vector<bool> keep_code(history.size(), true);
    const auto total = [&]() {
      size_t n = 0;
      for (size_t i = 0; i < history.size(); ++i) {
        n += (keep_code[i] ? history[i].code.size() : 0) + history[i].execution.size() +
             history[i].check_report.size() + history[i].complexity.size() + 200;
      }
      return n;
    };
    for (size_t i = 0; i < history.size() && total() > static_cast<size_t>(config_.max_history_chars); ++i) {
      keep_code[i] = false;
    }
    std::ostringstream out;
    for (size_t i = 0; i < history.size(); ++i) {
      const HistoryEntry& entry = history[i];
      out << "Round " << (i + 1) << ":\n--- program ---\n"
          << (keep_code[i] ? entry.code : std::string("[program body omitted]"))
          << "\n--- execution ---\n"
          << entry.execution << "\n--- check report ---\n"
          << entry.check_report << "\n--- complexity ---\n"
          << entry.complexity << "\n";
      if (!entry.decision.empty()) out << "--- decision: " << entry.decision << "\n";
      if (!entry.guidance.empty()) out << "--- guidance: " << entry.guidance << "\n";
      out << "\n";
    }
    return out.str();
  };

  std::string guidance;
  int final_round = -1;

  try {
    for (int r = 0; r < config_.max_rounds; ++r) {
      RoundRecord round;
      round.task_prompt =
          r == 0 ? prompts_.render("task_code", {{"question", question}})
                 : prompts_.render("task_code_revise", {{"question", question},
                                                        {"history", history_text()},
                                                        {"guidance", guidance}});
      const std::string response = complete(ctx, round.task_prompt);
      round.generated_code = extract_code_block(response);
      round.sandbox_result = sandbox_->execute(round.generated_code, limits_for(instance));

      const bool last_round = r + 1 == config_.max_rounds;
      if (last_round) {
        round.steer_decision = std::string(to_string(SteerDecision::Kind::ForceAccept));
        record.rounds.push_back(std::move(round));
        final_round = r;
        break;
      }

      // CheckLLM writes checking code; it runs under the same sandbox contract.
      const std::string check_prompt = prompts_.render(
          "check_code", {{"question", question},
                         {"candidate_output",
                          truncate_text(round.sandbox_result.stdout_bytes, 4000)}});
      round.check_code = extract_code_block(complete(ctx, check_prompt));
      const SandboxResult check_run =
          sandbox_->execute(round.check_code, limits_for(instance));
      round.check_report = extract_check_line(check_run);

      round.complexity_report = analyze(round.generated_code, pattern_table_);

      HistoryEntry entry;
      entry.code = round.generated_code;
      entry.execution = sandbox_summary(round.sandbox_result) + "\nstdout (tail):\n" +
                        tail_text(round.sandbox_result.stdout_bytes, 1500);
      entry.check_report = round.check_report;
      entry.complexity = round.complexity_report->summary;
      history.push_back(entry);

      const std::string steer_prompt =
          prompts_.render("steer", {{"history", history_text()}});
      const SteerDecision decision = parse_steer(complete(ctx, steer_prompt));
      round.steer_decision = std::string(to_string(decision.kind));
      round.guidance_text = decision.guidance;
      history.back().decision = round.steer_decision;
      history.back().guidance = decision.guidance;

      record.rounds.push_back(std::move(round));
      final_round = r;
      if (decision.kind == SteerDecision::Kind::Accept) break;
      guidance = decision.guidance;
    }
  } catch (const EpisodeBudgetStop&) {
    // Budget guard tripped; fall through with what we have.
  } catch (const GatewayError& e) {
    record.method_error = true;
    record.method_error_detail = e.what();
  }

  record.llm_calls = ctx.calls;
  if (final_round >= 0) {
    const SandboxResult& final_run = record.rounds[final_round].sandbox_result;
    record.final_verdict = verify(instance, final_run.stdout_bytes, final_run);
    record.final_plan = plan_of(parse_plan(final_run.stdout_bytes, instance));
  } else {
    record.final_verdict = verify(instance, "", SandboxResult{});
  }
  record.wall_clock_seconds = watch.elapsed();
  return record;
}

EpisodeRecord Orchestrator::run_code_answer(const TaskInstance& instance) const {
  Orchestrator single_round(*this);
  single_round.config_.method = Method::CodeAnswer;
  single_round.config_.max_rounds = 1;
  return single_round.run_code_as_symbolic_planner(instance);
}

EpisodeRecord Orchestrator::run_only_question(const TaskInstance& instance) const {
  Stopwatch watch;
  EpisodeRecord record;
  record.env_kind = instance.env_kind;
  record.seed = instance.seed;
  record.difficulty = instance.difficulty;
  record.method = Method::OnlyQuestion;
  record.max_rounds = 1;

  const std::string question = render_prompt(instance, prompts_);
  EpisodeContext ctx;
  RoundRecord round;
  round.task_prompt = prompts_.render("only_question", {{"question", question}});
  round.steer_decision = std::string(to_string(SteerDecision::Kind::ForceAccept));

  try {
    const std::string response = complete(ctx, round.task_prompt);
    round.generated_code = response;  // the direct text answer
    const PlanParseOutcome outcome = parse_plan_lenient(response, instance);
    record.final_verdict = verify_parsed(instance, outcome);
    record.final_plan = plan_of(outcome);
  } catch (const EpisodeBudgetStop&) {
    record.final_verdict = verify_parsed(
        instance, PlanParseError{PlanParseError::Kind::NoDocument, "no answer"});
  } catch (const GatewayError& e) {
    record.method_error = true;
    record.method_error_detail = e.what();
    record.final_verdict = verify_parsed(
        instance, PlanParseError{PlanParseError::Kind::NoDocument, "method error"});
  }
  record.rounds.push_back(std::move(round));
  record.llm_calls = ctx.calls;
  record.wall_clock_seconds = watch.elapsed();
  return record;
}

// --- SayCan -----------------------------------------------------------------

namespace {

// Per-robot progress for waypoint-based instances driven step by step.
struct ContinuousProgress {
  std::map<std::string, std::vector<Waypoint>> trajectories;
  std::map<std::string, bool> done;
  std::set<size_t> claimed_slots;
  double step_dt = 1.0;
  double stride = 1.0;

  explicit ContinuousProgress(const TaskInstance& instance, int step_budget) {
    const ContinuousScene& scene = instance.continuous().scene;
    step_dt = scene.time_limit / step_budget;
    stride = scene.v_max * step_dt;
    for (const auto& [id, spec] : scene.robots) {
      trajectories[id] = {{spec.start.x, spec.start.y, 0.0}};
      done[id] = false;
    }
  }

  Vec2 position(const std::string& robot) const {
    const Waypoint& w = trajectories.at(robot).back();
    return {w.x, w.y};
  }
};

Vec2 continuous_target(const TaskInstance& instance, const std::string& robot,
                       const ContinuousProgress& progress) {
  const ContinuousScene& scene = instance.continuous().scene;
  const Vec2 pos = progress.position(robot);
  switch (instance.env_kind) {
    case EnvKind::PathRacecars: {
      const Rect& goal = *scene.robots.at(robot).goal_region;
      return {(goal.xmin + goal.xmax) / 2.0, (goal.ymin + goal.ymax) / 2.0};
    }
    case EnvKind::PathDrones: {
      const HoleSpec& hole = *scene.hole;
      const double hole_y = (hole.y0 + hole.y1) / 2.0;
      if (pos.x <= hole.x1) return {(hole.x0 + hole.x1) / 2.0 + 0.5, hole_y};
      return {scene.bounds.xmax - 1.0, hole_y};
    }
    default: {  // ShapeFormation: nearest unclaimed slot
      const ShapeSpec& shape = *instance.continuous().shape;
      double best = std::numeric_limits<double>::infinity();
      Vec2 target = pos;
      for (size_t i = 0; i < shape.slots.size(); ++i) {
        if (progress.claimed_slots.count(i)) continue;
        const double d = distance(pos, shape.slots[i].center);
        if (d < best) {
          best = d;
          target = shape.slots[i].center;
        }
      }
      return target;
    }
  }
}

bool continuous_done(const TaskInstance& instance, const std::string& robot,
                     ContinuousProgress& progress) {
  const ContinuousScene& scene = instance.continuous().scene;
  const Vec2 pos = progress.position(robot);
  switch (instance.env_kind) {
    case EnvKind::PathRacecars:
      return scene.robots.at(robot).goal_region->contains(pos);
    case EnvKind::PathDrones: {
      const HoleSpec& hole = *scene.hole;
      return hole.target_side == "left" ? pos.x < hole.x0 - 0.4 : pos.x > hole.x1 + 0.4;
    }
    default: {
      const ShapeSpec& shape = *instance.continuous().shape;
      for (size_t i = 0; i < shape.slots.size(); ++i) {
        if (progress.claimed_slots.count(i)) continue;
        if (distance(pos, shape.slots[i].center) <= shape.slots[i].tolerance) {
          progress.claimed_slots.insert(i);
          return true;
        }
      }
      return false;
    }
  }
}

// Candidate next waypoints for one robot: 8 compass strides plus a
// goal-directed move, encoded as JSON tokens.
std::vector<std::string> continuous_candidates(const TaskInstance& instance,
                                               const std::string& robot,
                                               const ContinuousProgress& progress) {
  const Vec2 pos = progress.position(robot);
  std::vector<Vec2> moves;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      if (dx == 0 && dy == 0) continue;
      const double len = std::hypot(dx, dy);
      moves.push_back({pos.x + progress.stride * dx / len,
                       pos.y + progress.stride * dy / len});
    }
  }
  const Vec2 target = continuous_target(instance, robot, progress);
  const double d = distance(pos, target);
  if (d > 1e-9) {
    const double scale = std::min(progress.stride, d) / d;
    moves.push_back(pos + scale * (target - pos));
  }

  std::vector<std::string> tokens;
  for (const Vec2& to : moves) {
    tokens.push_back(json{{"robot", robot}, {"to", json::array({to.x, to.y})}}.dump());
  }
  return tokens;
}

bool continuous_move_feasible(const ContinuousScene& scene, Vec2 from, Vec2 to) {
  if (!scene.bounds.contains(to)) return false;
  for (const PolygonObstacle& obs : scene.obstacles) {
    const Polygon poly = obs.world_vertices();
    if (segment_enters_polygon_interior(from, to, poly)) return false;
    if (segment_polygon_clearance(from, to, poly) < scene.safe_distance) return false;
  }
  return true;
}

}  // namespace

EpisodeRecord Orchestrator::run_saycan(const TaskInstance& instance) const {
  Stopwatch watch;
  EpisodeRecord record;
  record.env_kind = instance.env_kind;
  record.seed = instance.seed;
  record.difficulty = instance.difficulty;
  record.method = Method::SayCan;
  record.max_rounds = 1;

  const std::string question = render_prompt(instance, prompts_);
  EpisodeContext ctx;
  RoundRecord round;
  std::vector<std::string> chosen_tokens;

  const auto context_text = [&]() {
    std::string history = chosen_tokens.empty() ? "(none yet)" : "";
    for (const std::string& token : chosen_tokens) history += token + "\n";
    return prompts_.render("saycan_context",
                           {{"question", question}, {"history", history}});
  };

  Plan plan;
  try {
    if (is_discrete(instance.env_kind)) {
      EnvState state = instance.initial_state;
      std::vector<Step> steps;
      for (int step_index = 0; step_index < instance.step_limit; ++step_index) {
        if (is_goal_env(state, instance.goal)) break;
        const std::vector<Step> candidates = enumerate_candidate_steps_env(state);
        if (candidates.empty()) break;
        std::vector<std::string> tokens;
        std::map<std::string, Step> by_token;
        for (const Step& step : candidates) {
          tokens.push_back(step_to_token(step));
          by_token[tokens.back()] = step;
        }
        const auto feasibility = [&](const std::string& token) {
          const auto it = by_token.find(token);
          if (it == by_token.end()) return 0.0;
          return std::holds_alternative<IllegalAction>(apply_step_env(state, it->second))
                     ? 0.0
                     : 1.0;
        };
        ++ctx.calls;  // candidate scoring consumes one LLM interaction
        if (ctx.calls > config_.llm_call_budget) throw EpisodeBudgetStop{};
        const auto scored =
            gateway_->score_candidates(context_text(), tokens, config_.saycan_k, feasibility);
        if (scored.empty() || scored.front().combined <= 0.0) break;
        const Step& best = by_token.at(scored.front().text);
        auto next = apply_step_env(state, best);
        if (std::holds_alternative<IllegalAction>(next)) break;
        state = std::get<EnvState>(std::move(next));
        steps.push_back(best);
        chosen_tokens.push_back(scored.front().text);
      }
      plan = Plan::actions(std::move(steps));
    } else {
      ContinuousProgress progress(instance, config_.continuous_step_budget);
      const ContinuousScene& scene = instance.continuous().scene;
      bool moved = true;
      for (int iteration = 0; iteration < config_.continuous_step_budget && moved;
           ++iteration) {
        moved = false;
        for (auto& [robot, is_done] : progress.done) {
          if (is_done) continue;
          if (continuous_done(instance, robot, progress)) {
            is_done = true;
            continue;
          }
          const auto tokens = continuous_candidates(instance, robot, progress);
          const Vec2 pos = progress.position(robot);
          const auto feasibility = [&](const std::string& token) {
            const json doc = json::parse(token, nullptr, false);
            if (doc.is_discarded()) return 0.0;
            const Vec2 to{doc["to"][0].get<double>(), doc["to"][1].get<double>()};
            return continuous_move_feasible(scene, pos, to) ? 1.0 : 0.0;
          };
          ++ctx.calls;
          if (ctx.calls > config_.llm_call_budget) throw EpisodeBudgetStop{};
          const auto scored = gateway_->score_candidates(context_text(), tokens,
                                                         config_.saycan_k, feasibility);
          if (scored.empty() || scored.front().combined <= 0.0) continue;
          const json doc = json::parse(scored.front().text);
          auto& traj = progress.trajectories.at(robot);
          traj.push_back({doc["to"][0].get<double>(), doc["to"][1].get<double>(),
                          traj.back().t + progress.step_dt});
          chosen_tokens.push_back(scored.front().text);
          moved = true;
        }
      }
      plan = Plan::waypoints(progress.trajectories);
    }
  } catch (const EpisodeBudgetStop&) {
  } catch (const GatewayError& e) {
    record.method_error = true;
    record.method_error_detail = e.what();
  }

  round.task_prompt = context_text();
  round.generated_code = serialize_plan(plan);
  round.steer_decision = std::string(to_string(SteerDecision::Kind::ForceAccept));
  record.rounds.push_back(std::move(round));
  record.final_plan = plan;
  record.final_verdict = verify_plan(instance, plan);
  record.llm_calls = ctx.calls;
  record.wall_clock_seconds = watch.elapsed();
  return record;
}

// --- HMAS-2 -----------------------------------------------------------------

namespace {

std::optional<Step> parse_subtask_step(const std::string& response) {
  const size_t pos = response.find("SUBTASK:");
  if (pos == std::string::npos) return std::nullopt;
  return step_from_token(response.substr(pos + 8));
}

std::optional<std::map<std::string, Waypoint>> parse_subtask_waypoints(
    const std::string& response) {
  const size_t pos = response.find("SUBTASK:");
  if (pos == std::string::npos) return std::nullopt;
  const json doc = json::parse(response.substr(pos + 8), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  std::map<std::string, Waypoint> out;
  for (const auto& [robot, point] : doc.items()) {
    if (!point.is_array() || point.size() != 3) return std::nullopt;
    out[robot] = Waypoint{point[0].get<double>(), point[1].get<double>(),
                          point[2].get<double>()};
  }
  return out;
}

bool says_done(const std::string& response) {
  return response.find("DONE") != std::string::npos &&
         response.find("SUBTASK:") == std::string::npos;
}

}  // namespace

EpisodeRecord Orchestrator::run_hmas2(const TaskInstance& instance) const {
  Stopwatch watch;
  EpisodeRecord record;
  record.env_kind = instance.env_kind;
  record.seed = instance.seed;
  record.difficulty = instance.difficulty;
  record.method = Method::HMAS2;
  record.max_rounds = 1;

  const std::string question = render_prompt(instance, prompts_);
  const std::vector<std::string> robots = expected_robot_ids(instance);
  const bool multi_robot = robots.size() > 1;

  EpisodeContext ctx;
  RoundRecord round;
  std::vector<std::string> committed;

  const auto history_text = [&]() {
    if (committed.empty()) return std::string("(none yet)");
    std::string out;
    for (const std::string& token : committed) out += token + "\n";
    return out;
  };

  // One proposal round: central plan, local feedback from each robot on
  // multi-robot instances, then the committed sub-task.
  const auto propose_and_commit = [&]() -> std::optional<std::string> {
    const std::string proposal = complete(
        ctx, prompts_.render("hmas_propose",
                             {{"question", question}, {"history", history_text()}}));
    if (says_done(proposal)) return std::nullopt;
    if (!multi_robot) return proposal;

    std::string feedback;
    for (const std::string& robot : robots) {
      const std::string reply = complete(
          ctx, prompts_.render("hmas_feedback", {{"robot_id", robot},
                                                 {"question", question},
                                                 {"proposal", proposal}}));
      feedback += robot + ": " + reply + "\n";
    }
    const std::string commit = complete(
        ctx, prompts_.render("hmas_commit", {{"question", question},
                                             {"history", history_text()},
                                             {"proposal", proposal},
                                             {"feedback", feedback}}));
    if (says_done(commit)) return std::nullopt;
    return commit;
  };

  Plan plan;
  try {
    if (is_discrete(instance.env_kind)) {
      EnvState state = instance.initial_state;
      std::vector<Step> steps;
      for (int i = 0; i < instance.step_limit; ++i) {
        if (is_goal_env(state, instance.goal)) break;
        const auto commit = propose_and_commit();
        if (!commit) break;
        const auto step = parse_subtask_step(*commit);
        if (!step) break;
        auto next = apply_step_env(state, *step);
        if (std::holds_alternative<IllegalAction>(next)) break;
        state = std::get<EnvState>(std::move(next));
        steps.push_back(*step);
        committed.push_back(step_to_token(*step));
      }
      plan = Plan::actions(std::move(steps));
    } else {
      ContinuousProgress progress(instance, config_.continuous_step_budget);
      for (int i = 0; i < config_.continuous_step_budget; ++i) {
        const auto commit = propose_and_commit();
        if (!commit) break;
        const auto waypoints = parse_subtask_waypoints(*commit);
        if (!waypoints) break;
        json token = json::object();
        for (const auto& [robot, wp] : *waypoints) {
          const auto it = progress.trajectories.find(robot);
          if (it == progress.trajectories.end() || wp.t <= it->second.back().t) continue;
          it->second.push_back(wp);
          token[robot] = json::array({wp.x, wp.y, wp.t});
        }
        if (token.empty()) break;
        committed.push_back(token.dump());
      }
      plan = Plan::waypoints(progress.trajectories);
    }
  } catch (const EpisodeBudgetStop&) {
  } catch (const GatewayError& e) {
    record.method_error = true;
    record.method_error_detail = e.what();
  }

  round.task_prompt = question;
  round.generated_code = serialize_plan(plan);
  round.steer_decision = std::string(to_string(SteerDecision::Kind::ForceAccept));
  record.rounds.push_back(std::move(round));
  record.final_plan = plan;
  record.final_verdict = verify_plan(instance, plan);
  record.llm_calls = ctx.calls;
  record.wall_clock_seconds = watch.elapsed();
  return record;
}

}  // namespace tampforge
