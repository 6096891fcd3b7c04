#pragma once

// Chat-completion client used by the planning loop. Live providers speak the
// OpenAI-compatible, Gemini and Anthropic HTTP schemas; the scripted oracle
// replays canned responses for deterministic runs.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coverpath/error.hpp"

namespace coverpath {

struct ChatRequest {
  std::string system_prompt;
  std::vector<std::string> user_messages;
  double temperature = 0.6;
  std::string model_id;

  /// Throws InvalidRequest unless temperature is in [0, 2] and there is at
  /// least one user message.
  void validate() const;
};

struct ChatResponse {
  std::string text;
  double latency = 0.0;  // seconds
  std::map<std::string, std::string> provider_meta;
};

class Provider {
 public:
  virtual ~Provider() = default;

  /// Must be safe to call concurrently.
  virtual ChatResponse complete(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// Replays responses in order, then throws ScriptExhausted.
class ScriptedOracle final : public Provider {
 public:
  /// Throws EmptyScript.
  explicit ScriptedOracle(std::vector<std::string> responses);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "scripted"; }

  std::size_t calls() const;
  std::size_t remaining() const;

 private:
  std::vector<std::string> responses_;
  mutable std::mutex mutex_;
  std::size_t cursor_ = 0;
};

/// Script file: one response per record, records separated by a line that
/// contains only "---". Leading and trailing newlines of a record are dropped.
std::vector<std::string> parse_script(std::string_view text);
std::vector<std::string> load_script_file(const std::string& path);

enum class ProviderKind { OpenAI, Gemini, Anthropic, Scripted };

std::string_view to_string(ProviderKind kind);
std::optional<ProviderKind> parse_provider_kind(std::string_view name);

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::duration<double> backoff_base{1.0};
  double backoff_factor = 2.0;

  /// Delay before retry number `retry` (0-based).
  std::chrono::duration<double> delay(int retry) const;
};

using Sleeper = std::function<void(std::chrono::duration<double>)>;

/// Runs `attempt` until it succeeds, a non-retryable Error escapes, or
/// max_retries retries have been spent (at most max_retries + 1 calls).
template <typename Fn>
auto with_retries(const RetryPolicy& policy, const Sleeper& sleep, Fn&& attempt) -> decltype(attempt()) {
  for (int retry = 0;; ++retry) {
    try {
      return attempt();
    } catch (const Error& e) {
      if (!is_retryable(e.code()) || retry >= policy.max_retries) throw;
      if (sleep) sleep(policy.delay(retry));
    }
  }
}

struct ProviderConfig {
  ProviderKind kind = ProviderKind::Scripted;
  std::string model_id;
  /// Scheme, host, optional port and path prefix, e.g. "https://api.openai.com".
  /// Empty selects the provider's public endpoint.
  std::string base_url;
  /// Empty reads COVERPATH_OPENAI_KEY / COVERPATH_GEMINI_KEY / COVERPATH_ANTHROPIC_KEY.
  std::string api_key;
  std::chrono::seconds timeout{60};
  RetryPolicy retry;
  /// Scripted providers only.
  std::vector<std::string> script;
  /// Overrides the real sleep between retries (tests).
  Sleeper sleeper;
};

std::string default_base_url(ProviderKind kind);
std::string api_key_env_var(ProviderKind kind);

/// Throws InvalidConfig (e.g. scripted kind without a script).
std::shared_ptr<Provider> make_provider(const ProviderConfig& config);

/// Equivalent to provider.complete(request) after validating the request.
ChatResponse complete(Provider& provider, const ChatRequest& request);

/// Removes trailing whitespace only.
std::string trim_trailing(std::string text);

}  // namespace coverpath
