#include "tampforge/llm.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>
#include <thread>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
// Plain-HTTP client; https endpoints need a TLS-enabled build.
#endif
#include <httplib.h>

namespace tampforge {

void to_json(json& j, const ChatMessage& m) {
  j = json{{"role", m.role}, {"content", m.content}};
}

void to_json(json& j, const ChatRequest& r) {
  j = json{{"messages", r.messages},
           {"temperature", r.temperature},
           {"max_tokens", r.max_tokens},
           {"model", r.model_id}};
}

// --- ScriptedMockBackend -------------------------------------------------------

void ScriptedMockBackend::push_response(std::string response) {
  std::lock_guard lock(mutex_);
  responses_.push_back({false, std::move(response)});
}

void ScriptedMockBackend::push_failure(std::string message) {
  std::lock_guard lock(mutex_);
  responses_.push_back({true, std::move(message)});
}

void ScriptedMockBackend::push_likelihoods(std::vector<double> values) {
  std::lock_guard lock(mutex_);
  likelihood_queue_.push_back(std::move(values));
}

std::string ScriptedMockBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mutex_);
  requests_.push_back(request);
  if (responses_.empty()) {
    throw TransportError("scripted mock ran out of responses");
  }
  const Entry entry = std::move(responses_.front());
  responses_.pop_front();
  if (entry.fail) throw TransportError(entry.payload);
  return entry.payload;
}

std::optional<std::vector<double>> ScriptedMockBackend::likelihoods(
    const std::string& context, const std::vector<std::string>& candidates) {
  (void)context;
  std::lock_guard lock(mutex_);
  if (likelihood_queue_.empty()) return std::nullopt;
  std::vector<double> values = std::move(likelihood_queue_.front());
  likelihood_queue_.pop_front();
  values.resize(candidates.size(), 0.0);
  return values;
}

// --- HttpBackend ----------------------------------------------------------------

HttpBackend::HttpBackend(Options options) : options_(std::move(options)) {
  if (options_.base_url.empty()) {
    throw std::invalid_argument("HttpBackend needs a base URL");
  }
}

HttpBackend HttpBackend::from_env() {
  Options options;
  if (const char* url = std::getenv("TAMPFORGE_LLM_BASE_URL")) options.base_url = url;
  if (const char* key = std::getenv("TAMPFORGE_LLM_API_KEY")) options.api_key = key;
  if (const char* model = std::getenv("TAMPFORGE_LLM_MODEL")) options.model = model;
  return HttpBackend(std::move(options));
}

std::string HttpBackend::complete(const ChatRequest& request) {
  httplib::Client client(options_.base_url);
  client.set_connection_timeout(options_.connect_timeout_s);
  client.set_read_timeout(options_.read_timeout_s);

  json body;
  to_json(body, request);
  if (!options_.model.empty() && request.model_id.empty()) body["model"] = options_.model;

  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }
  const auto result = client.Post(options_.path, headers, body.dump(), "application/json");
  if (!result) {
    throw TransportError("transport failure: " + httplib::to_string(result.error()));
  }
  if (result->status >= 500) {
    throw TransportError("server error " + std::to_string(result->status));
  }
  if (result->status != 200) {
    throw GatewayError(GatewayError::Kind::BackendUnavailable,
                       "backend returned status " + std::to_string(result->status) + ": " +
                           result->body);
  }
  const json payload = json::parse(result->body, nullptr, /*allow_exceptions=*/false);
  if (payload.is_discarded() || !payload.contains("choices") || payload["choices"].empty()) {
    throw TransportError("malformed completion payload");
  }
  return payload["choices"][0].value("message", json::object()).value("content", "");
}

// --- Gateway ---------------------------------------------------------------------

Gateway::Gateway(std::shared_ptr<Backend> backend, GatewayOptions options)
    : backend_(std::move(backend)), options_(std::move(options)) {}

size_t Gateway::estimate_tokens(const ChatRequest& request) {
  size_t chars = 0;
  for (const ChatMessage& m : request.messages) chars += m.content.size();
  return chars / 4 + 1;
}

void Gateway::log_transcript(const ChatRequest& request, const std::string& response,
                             int retries) {
  if (options_.transcript_path.empty()) return;
  std::lock_guard lock(transcript_mutex_);
  std::ofstream out(options_.transcript_path, std::ios::app);
  json line{{"backend", backend_->name()}, {"retries", retries}, {"response", response}};
  to_json(line["request"], request);
  out << line.dump() << "\n";
}

std::string Gateway::complete(const ChatRequest& request) {
  const size_t estimate = estimate_tokens(request);
  if (options_.token_budget && tokens_used_ + estimate > *options_.token_budget) {
    throw GatewayError(GatewayError::Kind::BudgetExceeded,
                       "token budget exhausted before the call");
  }

  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      const double delay = options_.backoff_initial_s * (1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    try {
      std::string response = backend_->complete(request);
      ++calls_;
      tokens_used_ += estimate + response.size() / 4;
      log_transcript(request, response, attempt);
      return response;
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw GatewayError(GatewayError::Kind::BackendUnavailable,
                     "backend unavailable after " + std::to_string(options_.max_retries) +
                         " retries: " + last_error);
}

namespace {

// Fallback when the backend exposes no token likelihoods: ask for 0-100
// ratings, one per line, and normalize them into a distribution.
std::string rating_prompt(const std::string& context,
                          const std::vector<std::string>& candidates) {
  std::ostringstream prompt;
  prompt << "You are ranking candidate next actions for a robot planner.\n"
         << "Context:\n"
         << context << "\n\n"
         << "Rate how promising each candidate is on a 0-100 scale.\n"
         << "Answer with one line per candidate, formatted exactly as\n"
         << "RATING <index>: <score>\n\nCandidates:\n";
  for (size_t i = 0; i < candidates.size(); ++i) {
    prompt << i << ": " << candidates[i] << "\n";
  }
  return prompt.str();
}

std::vector<double> parse_ratings(const std::string& response, size_t count) {
  std::vector<double> scores(count, 0.0);
  const std::regex line_re(R"(RATING\s+(\d+)\s*:\s*(-?[0-9]+(?:\.[0-9]+)?))");
  for (auto it = std::sregex_iterator(response.begin(), response.end(), line_re);
       it != std::sregex_iterator(); ++it) {
    const size_t index = std::stoul((*it)[1].str());
    if (index < count) scores[index] = std::max(0.0, std::stod((*it)[2].str()));
  }
  return scores;
}

void normalize(std::vector<double>& values) {
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (total <= 0.0) {
    std::fill(values.begin(), values.end(), 1.0 / static_cast<double>(values.size()));
    return;
  }
  for (double& v : values) v /= total;
}

}  // namespace

std::vector<ScoredCandidate> Gateway::score_candidates(
    const std::string& context, const std::vector<std::string>& candidates, int k,
    const std::function<double(const std::string&)>& feasibility) {
  if (candidates.empty()) throw std::invalid_argument("score_candidates needs candidates");
  if (k < 1) throw std::invalid_argument("K must be >= 1");

  bool fallback = false;
  std::vector<double> llm;
  if (auto native = backend_->likelihoods(context, candidates)) {
    llm = std::move(*native);
  } else {
    fallback = true;
    ChatRequest request;
    request.messages = {{"user", rating_prompt(context, candidates)}};
    llm = parse_ratings(complete(request), candidates.size());
  }
  llm.resize(candidates.size(), 0.0);
  normalize(llm);

  std::vector<ScoredCandidate> scored;
  for (size_t i = 0; i < candidates.size(); ++i) {
    ScoredCandidate c;
    c.text = candidates[i];
    c.llm_likelihood = llm[i];
    c.feasibility_likelihood = feasibility(candidates[i]);
    c.combined = options_.likelihood_combination == "sum"
                     ? c.llm_likelihood + c.feasibility_likelihood
                     : c.llm_likelihood * c.feasibility_likelihood;
    c.rating_fallback_used = fallback;
    scored.push_back(std::move(c));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredCandidate& a, const ScoredCandidate& b) {
                     return a.combined > b.combined;
                   });
  scored.resize(std::min<size_t>(scored.size(), static_cast<size_t>(k)));
  return scored;
}

}  // namespace tampforge
