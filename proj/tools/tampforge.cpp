#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "tampforge/oracle.hpp"
#include "tampforge/plan_format.hpp"
#include "tampforge/prompt.hpp"
#include "tampforge/suite.hpp"
#include "tampforge/verifier.hpp"

namespace fs = std::filesystem;
using namespace tampforge;

namespace {

TaskInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json j;
  in >> j;
  return instance_from_json(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

int cmd_gen(const std::string& env_name, int count, int level, uint64_t seed,
            const std::string& out_dir, bool oracle_limits, bool print_prompt) {
  const auto kind = env_kind_from_string(env_name);
  if (!kind) {
    std::cerr << "unknown env kind '" << env_name << "'\n";
    return 1;
  }
  fs::create_directories(out_dir);
  std::optional<PromptLibrary> prompts;
  if (print_prompt) prompts = PromptLibrary::load("v1");
  for (int i = 0; i < count; ++i) {
    const uint64_t instance_seed = Rng::derive_seed(seed, env_name, i);
    TaskInstance instance =
        generate_instance(*kind, default_difficulty(*kind, level), instance_seed);
    if (oracle_limits) tighten_step_limit(instance);
    std::ostringstream name;
    name << env_name << "_L" << level << "_" << std::setw(4) << std::setfill('0') << i
         << ".json";
    const fs::path path = fs::path(out_dir) / name.str();
    std::ofstream out(path);
    out << instance_to_json(instance).dump(2) << "\n";
    std::cout << path.string() << "\n";
    if (print_prompt) std::cout << render_prompt(instance, *prompts) << "\n";
  }
  return 0;
}

int cmd_oracle(const std::string& instance_path, size_t budget) {
  const TaskInstance instance = load_instance(instance_path);
  const OracleResult result = oracle_solve(instance, {budget});
  switch (result.status) {
    case OracleStatus::Solved:
      std::cout << "status: solved\noptimal_length: " << *result.optimal_length
                << "\nexpanded: " << result.expanded << "\n"
                << serialize_plan(*result.plan);
      return 0;
    case OracleStatus::NoSolution:
      std::cout << "status: no_solution\nexpanded: " << result.expanded << "\n";
      return 2;
    case OracleStatus::BudgetExceeded:
      std::cout << "status: budget_exceeded\nexpanded: " << result.expanded << "\n";
      return 3;
  }
  return 1;
}

int cmd_verify(const std::string& instance_path, const std::string& plan_path) {
  const TaskInstance instance = load_instance(instance_path);
  SandboxResult pseudo;
  pseudo.stdout_bytes = read_file(plan_path);
  const Verdict verdict = verify(instance, pseudo.stdout_bytes, pseudo);
  json out;
  to_json(out, verdict);
  std::cout << out.dump(2) << "\n";
  return verdict.success ? 0 : 1;
}

int cmd_analyze(const std::string& source_path, const std::string& table_name) {
  const std::string source = read_file(source_path);
  const fs::path table_path =
      fs::path(default_config_dir()) / "patterns" / (table_name + ".json");
  const ComplexityReport report =
      fs::exists(table_path) ? analyze(source, PatternTable::load(table_path.string()))
                             : analyze(source, PatternTable::python_v1());
  json out;
  to_json(out, report);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& records_override,
            int workers_override) {
  SuiteConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config: " + config_path);
    json j;
    in >> j;
    config = suite_config_from_json(j);
  }
  if (!records_override.empty()) config.records_path = records_override;
  if (workers_override > 0) config.workers = workers_override;

  const SuiteSummary summary = run_suite(config);
  std::cout << summary_to_json(summary).dump(2) << "\n";
  return 0;
}

int cmd_report(const std::string& records_path, const std::string& out_dir) {
  write_report(records_path, out_dir);
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tampforge: multi-robot planning benchmark harness"};
  app.require_subcommand(1);

  std::string env_name = "gridworld";
  int gen_count = 1;
  int gen_level = 0;
  uint64_t gen_seed = 42;
  std::string gen_out = "instances";
  bool gen_oracle_limits = false;
  bool gen_print_prompt = false;
  auto* gen = app.add_subcommand("gen", "Generate instance files");
  gen->add_option("--env", env_name, "Environment kind")->required();
  gen->add_option("--count", gen_count, "Number of instances");
  gen->add_option("--level", gen_level, "Difficulty level 0-4");
  gen->add_option("--seed", gen_seed, "Base seed");
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_flag("--oracle-limits", gen_oracle_limits,
                "Tighten step limits to 3x the oracle optimum");
  gen->add_flag("--print-prompt", gen_print_prompt, "Also print the rendered prompt");

  std::string oracle_instance;
  size_t oracle_budget = 1'000'000;
  auto* oracle = app.add_subcommand("oracle", "Solve an instance by brute force");
  oracle->add_option("instance", oracle_instance, "Instance JSON file")->required();
  oracle->add_option("--budget", oracle_budget, "Expansion budget");

  std::string verify_instance, verify_plan;
  auto* verify_cmd = app.add_subcommand("verify", "Verify a plan file against an instance");
  verify_cmd->add_option("instance", verify_instance, "Instance JSON file")->required();
  verify_cmd->add_option("plan", verify_plan, "Plan document file")->required();

  std::string analyze_source;
  std::string analyze_table = "python_v1";
  auto* analyze_cmd = app.add_subcommand("analyze", "Complexity report for a source file");
  analyze_cmd->add_option("source", analyze_source, "Guest source file")->required();
  analyze_cmd->add_option("--patterns", analyze_table, "Pattern table name");

  std::string run_config;
  std::string run_records;
  int run_workers = 0;
  auto* run = app.add_subcommand("run", "Run a benchmark suite");
  run->add_option("--config", run_config, "Suite config JSON file");
  run->add_option("--records", run_records, "Records JSONL path override");
  run->add_option("--workers", run_workers, "Worker thread count override");

  std::string report_records = "records.jsonl";
  std::string report_out = "report";
  auto* report = app.add_subcommand("report", "Emit tables, CSVs, and charts");
  report->add_option("records", report_records, "Records JSONL path");
  report->add_option("--out", report_out, "Report output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_gen(env_name, gen_count, gen_level, gen_seed, gen_out, gen_oracle_limits,
                     gen_print_prompt);
    }
    if (oracle->parsed()) return cmd_oracle(oracle_instance, oracle_budget);
    if (verify_cmd->parsed()) return cmd_verify(verify_instance, verify_plan);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_source, analyze_table);
    if (run->parsed()) return cmd_run(run_config, run_records, run_workers);
    if (report->parsed()) return cmd_report(report_records, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
