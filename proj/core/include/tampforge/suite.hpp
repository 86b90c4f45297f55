#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tampforge/orchestrator.hpp"

namespace tampforge {

struct BackendConfig {
  std::string kind = "rule_mock";  // "rule_mock" or "http"
  std::string base_url;
  std::string model;
};

struct SuiteConfig {
  std::vector<EnvKind> tasks{std::begin(kAllEnvKinds), std::end(kAllEnvKinds)};
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  int samples_per_task = 140;
  uint64_t base_seed = 42;
  std::vector<int> difficulty_levels{0, 1, 2, 3, 4};
  std::optional<std::vector<int>> round_sweep;  // Code-as-Symbolic-Planner only
  int max_rounds = 3;
  int saycan_k = 5;
  std::string prompts_version = "v1";
  std::string records_path = "records.jsonl";
  int workers = 1;
  std::optional<bool> normalize_timing;  // default: true unless the backend is http
  size_t token_budget = 0;
  int llm_call_budget = 20;
  BackendConfig backend;

  bool effective_normalize_timing() const {
    return normalize_timing.value_or(backend.kind != "http");
  }
};

SuiteConfig suite_config_from_json(const json& j);
json suite_config_to_json(const SuiteConfig& config);

// Deterministic offline stand-in for a model endpoint: a pure function of
// the request text. Task prompts hash into good (reference solver program)
// or poor (plain-text) answers; steering follows the check report; the
// central-planner policy replays committed sub-tasks and proposes a legal
// next step. Makes full suite runs reproducible byte for byte.
class RuleMockBackend : public Backend {
 public:
  explicit RuleMockBackend(std::string config_dir = "");

  std::string name() const override { return "rule_mock"; }
  std::string complete(const ChatRequest& request) override;
  std::optional<std::vector<double>> likelihoods(
      const std::string& context, const std::vector<std::string>& candidates) override;

 private:
  std::map<std::string, std::string> guest_templates_;
};

struct SuiteCell {
  int samples = 0;
  int successes = 0;
  double rounds_total = 0.0;
  double wall_clock_total = 0.0;
  std::map<std::string, int> failure_histogram;

  double success_rate() const { return samples == 0 ? 0.0 : double(successes) / samples; }
  double mean_rounds() const { return samples == 0 ? 0.0 : rounds_total / samples; }
  double mean_wall_clock() const {
    return samples == 0 ? 0.0 : wall_clock_total / samples;
  }
};

struct SuiteSummary {
  int total_records = 0;
  std::map<std::string, SuiteCell> by_task_method;        // "task|method"
  std::map<std::string, SuiteCell> by_task_method_level;  // "task|method|L<level>"
  std::map<std::string, SuiteCell> by_task_rounds;        // "task|R<cap>", CSP records
};

// Pure function of the record set; recomputable offline from the JSONL.
SuiteSummary summarize_records(const std::vector<EpisodeRecord>& records);
json summary_to_json(const SuiteSummary& summary);

std::vector<EpisodeRecord> load_records(const std::string& path);

// Runs every missing (instance, method) episode, appending records to the
// JSONL in deterministic job order (crash-safe resume: episodes already in
// the file are skipped). Returns the summary over all records in the file.
SuiteSummary run_suite(const SuiteConfig& config, std::shared_ptr<Backend> backend = nullptr);

// Table, CSV, and SVG emission from a records file (see report.cpp).
void write_report(const std::string& records_path, const std::string& out_dir);

}  // namespace tampforge
