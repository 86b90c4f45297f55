#pragma once

#include <condition_variable>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tampforge/types.hpp"

namespace tampforge {

struct SandboxLimits {
  double timeout_seconds = 50.0;
  size_t max_stdout_bytes = 8ull << 20;
  size_t max_stderr_bytes = 1ull << 20;
  size_t max_memory_bytes = 512ull << 20;
};

struct SandboxResult {
  std::string stdout_bytes;
  std::string stderr_bytes;
  int exit_status = 0;     // meaningful when killed == false
  bool killed = false;     // terminated by signal (including the timeout kill)
  int term_signal = 0;
  double elapsed_seconds = 0.0;
  bool timed_out = false;
  bool stdout_truncated = false;

  bool clean_exit() const { return !killed && exit_status == 0; }
};

void to_json(json& j, const SandboxResult& r);
void from_json(const json& j, SandboxResult& r);

// Configuration problem (missing interpreter), never a trial failure.
class InterpreterNotFoundError : public std::runtime_error {
 public:
  explicit InterpreterNotFoundError(const std::string& what) : std::runtime_error(what) {}
};

// Runs untrusted guest programs in a child process: scrubbed environment,
// private scratch directory, memory cap, hard wall-clock kill. A global
// gate caps the number of concurrent children.
class Sandbox {
 public:
  struct Config {
    std::vector<std::string> interpreter_cmd = {"python3"};
    std::string source_extension = ".py";
    std::string scratch_root;     // empty: system temp dir
    int max_parallel = 0;         // 0: hardware concurrency
  };

  explicit Sandbox(Config config = config_from_env());

  // TAMPFORGE_GUEST_CMD overrides the interpreter command (whitespace-split).
  static Config config_from_env();

  SandboxResult execute(std::string_view program, const SandboxLimits& limits) const;

  const Config& config() const { return config_; }

  class Gate {
   public:
    explicit Gate(int slots) : slots_(slots) {}
    void acquire();
    void release();

   private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int slots_;
  };

 private:
  Config config_;
  mutable Gate gate_;
};

}  // namespace tampforge
