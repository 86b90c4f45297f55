#pragma once

#include <atomic>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tampforge/types.hpp"

namespace tampforge {

struct ChatMessage {
  std::string role;  // "system", "user", "assistant"
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 4096;
  std::string model_id;
};

void to_json(json& j, const ChatMessage& m);
void to_json(json& j, const ChatRequest& r);

class GatewayError : public std::runtime_error {
 public:
  enum class Kind { BackendUnavailable, BudgetExceeded };

  GatewayError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind(kind) {}

  Kind kind;
};

// Transient transport failure; the gateway retries these.
class TransportError : public std::runtime_error {
 public:
  explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string name() const = 0;
  virtual std::string complete(const ChatRequest& request) = 0;

  // Native candidate likelihoods (token log-prob style). nullopt means the
  // backend cannot provide them and the gateway falls back to a rating prompt.
  virtual std::optional<std::vector<double>> likelihoods(
      const std::string& context, const std::vector<std::string>& candidates) {
    (void)context;
    (void)candidates;
    return std::nullopt;
  }
};

// Deterministic scripted backend for tests: responses are served from a
// queue, likelihood vectors from a parallel queue.
class ScriptedMockBackend : public Backend {
 public:
  std::string name() const override { return "scripted_mock"; }

  void push_response(std::string response);
  void push_failure(std::string message);  // one transient transport error
  void push_likelihoods(std::vector<double> values);

  std::string complete(const ChatRequest& request) override;
  std::optional<std::vector<double>> likelihoods(
      const std::string& context, const std::vector<std::string>& candidates) override;

  const std::vector<ChatRequest>& requests() const { return requests_; }
  size_t remaining() const { return responses_.size(); }

 private:
  struct Entry {
    bool fail = false;
    std::string payload;
  };
  std::deque<Entry> responses_;
  std::deque<std::vector<double>> likelihood_queue_;
  std::vector<ChatRequest> requests_;
  std::mutex mutex_;
};

// JSON-over-HTTP chat-completion backend (OpenAI-style wire format).
class HttpBackend : public Backend {
 public:
  struct Options {
    std::string base_url;       // e.g. https://api.example.com
    std::string path = "/v1/chat/completions";
    std::string api_key;
    std::string model;
    int connect_timeout_s = 10;
    int read_timeout_s = 120;
  };

  explicit HttpBackend(Options options);
  static HttpBackend from_env();  // TAMPFORGE_LLM_BASE_URL / _API_KEY / _MODEL

  std::string name() const override { return "http"; }
  std::string complete(const ChatRequest& request) override;

 private:
  Options options_;
};

struct ScoredCandidate {
  std::string text;
  double llm_likelihood = 0.0;
  double feasibility_likelihood = 0.0;
  double combined = 0.0;  // product of the two
  bool rating_fallback_used = false;
};

struct GatewayOptions {
  int max_retries = 3;
  double backoff_initial_s = 0.2;
  std::optional<size_t> token_budget;  // unset: uncapped; 0 rejects every call
  std::string transcript_path;
  // "product" (default) or "sum"; how candidate likelihoods combine.
  std::string likelihood_combination = "product";
};

// Uniform chat-completion front end: retry with exponential backoff on
// transport errors, per-run token budget, optional JSONL transcript.
// Shareable across workers.
class Gateway {
 public:
  Gateway(std::shared_ptr<Backend> backend, GatewayOptions options = {});

  std::string complete(const ChatRequest& request);

  // Top-K candidates by combined likelihood. Feasibility comes from the
  // caller (environment affordances, 0 or 1); K clamps to the candidate
  // count. Uses native backend likelihoods when available, otherwise a
  // 0-100 rating prompt whose use is flagged on the results.
  std::vector<ScoredCandidate> score_candidates(
      const std::string& context, const std::vector<std::string>& candidates, int k,
      const std::function<double(const std::string&)>& feasibility);

  size_t calls_made() const { return calls_; }
  size_t tokens_used() const { return tokens_used_; }
  Backend& backend() { return *backend_; }

  static size_t estimate_tokens(const ChatRequest& request);

 private:
  void log_transcript(const ChatRequest& request, const std::string& response, int retries);

  std::shared_ptr<Backend> backend_;
  GatewayOptions options_;
  std::atomic<size_t> calls_{0};
  std::atomic<size_t> tokens_used_{0};
  std::mutex transcript_mutex_;
};

}  // namespace tampforge
