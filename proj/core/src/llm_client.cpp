#include "coverpath/llm_client.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "http_providers.hpp"

namespace coverpath {

void ChatRequest::validate() const {
  if (!std::isfinite(temperature) || temperature < 0.0 || temperature > 2.0) {
    throw Error(ErrorCode::InvalidRequest, "temperature " + std::to_string(temperature) + " outside [0, 2]");
  }
  if (user_messages.empty()) {
    throw Error(ErrorCode::InvalidRequest, "request needs at least one user message");
  }
}

ScriptedOracle::ScriptedOracle(std::vector<std::string> responses) : responses_(std::move(responses)) {
  if (responses_.empty()) {
    throw Error(ErrorCode::EmptyScript, "scripted oracle needs at least one response");
  }
}

ChatResponse ScriptedOracle::complete(const ChatRequest& request) {
  request.validate();
  std::lock_guard lock(mutex_);
  if (cursor_ >= responses_.size()) {
    throw Error(ErrorCode::ScriptExhausted,
                "all " + std::to_string(responses_.size()) + " scripted responses already used");
  }
  ChatResponse response;
  response.text = trim_trailing(responses_[cursor_]);
  response.latency = 0.0;
  response.provider_meta["script_index"] = std::to_string(cursor_);
  ++cursor_;
  return response;
}

std::size_t ScriptedOracle::calls() const {
  std::lock_guard lock(mutex_);
  return cursor_;
}

std::size_t ScriptedOracle::remaining() const {
  std::lock_guard lock(mutex_);
  return responses_.size() - cursor_;
}

std::vector<std::string> parse_script(std::string_view text) {
  std::vector<std::string> records;
  std::string current;
  bool any_line = false;
  auto flush = [&] {
    while (!current.empty() && current.front() == '\n') current.erase(current.begin());
    while (!current.empty() && current.back() == '\n') current.pop_back();
    records.push_back(current);
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line == "---") {
      flush();
    } else {
      current.append(line);
      current.push_back('\n');
      any_line = true;
    }
    pos = nl + 1;
  }
  if (any_line || !records.empty()) flush();
  // A trailing separator leaves one empty record behind.
  if (!records.empty() && records.back().empty()) records.pop_back();
  return records;
}

std::vector<std::string> load_script_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open script file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_script(buf.str());
}

std::string_view to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::OpenAI: return "openai";
    case ProviderKind::Gemini: return "gemini";
    case ProviderKind::Anthropic: return "anthropic";
    case ProviderKind::Scripted: return "scripted";
  }
  return "unknown";
}

std::optional<ProviderKind> parse_provider_kind(std::string_view name) {
  if (name == "openai") return ProviderKind::OpenAI;
  if (name == "gemini") return ProviderKind::Gemini;
  if (name == "anthropic") return ProviderKind::Anthropic;
  if (name == "scripted") return ProviderKind::Scripted;
  return std::nullopt;
}

std::chrono::duration<double> RetryPolicy::delay(int retry) const {
  return backoff_base * std::pow(backoff_factor, retry);
}

std::string default_base_url(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::OpenAI: return "https://api.openai.com";
    case ProviderKind::Gemini: return "https://generativelanguage.googleapis.com";
    case ProviderKind::Anthropic: return "https://api.anthropic.com";
    case ProviderKind::Scripted: return "";
  }
  return "";
}

std::string api_key_env_var(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::OpenAI: return "COVERPATH_OPENAI_KEY";
    case ProviderKind::Gemini: return "COVERPATH_GEMINI_KEY";
    case ProviderKind::Anthropic: return "COVERPATH_ANTHROPIC_KEY";
    case ProviderKind::Scripted: return "";
  }
  return "";
}

std::shared_ptr<Provider> make_provider(const ProviderConfig& config) {
  if (config.kind == ProviderKind::Scripted) {
    if (config.script.empty()) {
      throw Error(ErrorCode::InvalidConfig, "scripted provider needs a script");
    }
    return std::make_shared<ScriptedOracle>(config.script);
  }
  ProviderConfig resolved = config;
  if (resolved.base_url.empty()) resolved.base_url = default_base_url(config.kind);
  if (resolved.api_key.empty()) {
    if (const char* env = std::getenv(api_key_env_var(config.kind).c_str())) resolved.api_key = env;
  }
  if (!resolved.sleeper) {
    resolved.sleeper = [](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); };
  }
  return detail::make_http_provider(resolved);
}

ChatResponse complete(Provider& provider, const ChatRequest& request) {
  request.validate();
  return provider.complete(request);
}

std::string trim_trailing(std::string text) {
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\n' ||
                           text.back() == '\r' || text.back() == '\f' || text.back() == '\v')) {
    text.pop_back();
  }
  return text;
}

}  // namespace coverpath
