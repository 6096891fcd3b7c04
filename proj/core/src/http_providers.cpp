#include "http_providers.hpp"

#include <httplib.h>

#include <chrono>
#include <json.hpp>

namespace coverpath::detail {

namespace {

using nlohmann::json;

struct HttpResult {
  int status = 0;
  std::string body;
};

std::string join_user_messages(const std::vector<std::string>& messages) {
  std::string out;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += messages[i];
  }
  return out;
}

// Shared transport: one client per call so concurrent complete() calls never
// share connection state.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(ProviderConfig config) : config_(std::move(config)), endpoint_(parse_endpoint(config_.base_url)) {}

  ChatResponse complete(const ChatRequest& request) override {
    request.validate();
    if (config_.api_key.empty()) {
      throw Error(ErrorCode::AuthError, "no API key for " + std::string(to_string(config_.kind)) + "; set " +
                                            api_key_env_var(config_.kind));
    }
    const std::string model = request.model_id.empty() ? config_.model_id : request.model_id;
    const auto start = std::chrono::steady_clock::now();
    int attempts = 0;
    HttpResult result = with_retries(config_.retry, config_.sleeper, [&] {
      ++attempts;
      return post_once(request, model);
    });
    ChatResponse response;
    response.text = trim_trailing(extract_text(result.body));
    response.latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    response.provider_meta["provider"] = std::string(to_string(config_.kind));
    response.provider_meta["model"] = model;
    response.provider_meta["attempts"] = std::to_string(attempts);
    response.provider_meta["http_status"] = std::to_string(result.status);
    return response;
  }

  std::string name() const override { return std::string(to_string(config_.kind)) + ":" + config_.model_id; }

 protected:
  virtual std::string path(const std::string& model) const = 0;
  virtual httplib::Headers headers() const = 0;
  virtual json body(const ChatRequest& request, const std::string& model) const = 0;
  virtual std::string text_from(const json& reply) const = 0;

  const ProviderConfig& config() const { return config_; }

 private:
  HttpResult post_once(const ChatRequest& request, const std::string& model) const {
    httplib::Client client(endpoint_.scheme_host_port);
    const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
    client.set_connection_timeout(static_cast<time_t>(timeout), 0);
    client.set_read_timeout(static_cast<time_t>(timeout), 0);
    client.set_write_timeout(static_cast<time_t>(timeout), 0);

    const std::string target = endpoint_.path_prefix + path(model);
    auto res = client.Post(target, headers(), body(request, model).dump(), "application/json");
    if (!res) {
      throw Error(ErrorCode::NetworkError, "POST " + target + " failed: " + httplib::to_string(res.error()));
    }
    const int status = res->status;
    if (status == 401 || status == 403) {
      throw Error(ErrorCode::AuthError, "HTTP " + std::to_string(status) + " from " + target);
    }
    if (status == 429) {
      throw Error(ErrorCode::RateLimited, "HTTP 429 from " + target);
    }
    if (status >= 500) {
      throw Error(ErrorCode::NetworkError, "HTTP " + std::to_string(status) + " from " + target);
    }
    if (status < 200 || status >= 300) {
      throw Error(ErrorCode::ProviderRejected, "HTTP " + std::to_string(status) + " from " + target + ": " +
                                                   res->body.substr(0, 200));
    }
    return {status, res->body};
  }

  std::string extract_text(const std::string& raw) const {
    json reply = json::parse(raw, nullptr, false);
    if (reply.is_discarded()) {
      throw Error(ErrorCode::MalformedProviderResponse, "response body is not JSON");
    }
    try {
      return text_from(reply);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedProviderResponse, e.what());
    }
  }

  ProviderConfig config_;
  Endpoint endpoint_;
};

// POST /v1/chat/completions
class OpenAIProvider final : public HttpProvider {
 public:
  using HttpProvider::HttpProvider;

 protected:
  std::string path(const std::string&) const override { return "/v1/chat/completions"; }

  httplib::Headers headers() const override { return {{"Authorization", "Bearer " + config().api_key}}; }

  json body(const ChatRequest& request, const std::string& model) const override {
    json messages = json::array();
    if (!request.system_prompt.empty()) {
      messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
    }
    for (const std::string& m : request.user_messages) {
      messages.push_back({{"role", "user"}, {"content", m}});
    }
    return {{"model", model}, {"temperature", request.temperature}, {"messages", messages}, {"stream", false}};
  }

  std::string text_from(const json& reply) const override {
    const json& content = reply.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) {
      throw Error(ErrorCode::MalformedProviderResponse, "choices[0].message.content is not a string");
    }
    return content.get<std::string>();
  }
};

// POST /v1beta/models/{model}:generateContent
class GeminiProvider final : public HttpProvider {
 public:
  using HttpProvider::HttpProvider;

 protected:
  std::string path(const std::string& model) const override {
    return "/v1beta/models/" + model + ":generateContent";
  }

  httplib::Headers headers() const override { return {{"x-goog-api-key", config().api_key}}; }

  json body(const ChatRequest& request, const std::string&) const override {
    json out = {
        {"contents", json::array({{{"role", "user"},
                                   {"parts", json::array({{{"text", join_user_messages(request.user_messages)}}})}}})},
        {"generationConfig", {{"temperature", request.temperature}}},
    };
    if (!request.system_prompt.empty()) {
      out["systemInstruction"] = {{"parts", json::array({{{"text", request.system_prompt}}})}};
    }
    return out;
  }

  std::string text_from(const json& reply) const override {
    std::string text;
    for (const json& part : reply.at("candidates").at(0).at("content").at("parts")) {
      if (part.contains("text")) text += part.at("text").get<std::string>();
    }
    return text;
  }
};

// POST /v1/messages
class AnthropicProvider final : public HttpProvider {
 public:
  using HttpProvider::HttpProvider;

 protected:
  std::string path(const std::string&) const override { return "/v1/messages"; }

  httplib::Headers headers() const override {
    return {{"x-api-key", config().api_key}, {"anthropic-version", "2023-06-01"}};
  }

  json body(const ChatRequest& request, const std::string& model) const override {
    json out = {
        {"model", model},
        {"max_tokens", 4096},
        {"temperature", std::min(request.temperature, 1.0)},  // API range is [0, 1]
        {"messages", json::array({{{"role", "user"}, {"content", join_user_messages(request.user_messages)}}})},
    };
    if (!request.system_prompt.empty()) out["system"] = request.system_prompt;
    return out;
  }

  std::string text_from(const json& reply) const override {
    std::string text;
    for (const json& block : reply.at("content")) {
      if (block.value("type", "") == "text") text += block.at("text").get<std::string>();
    }
    return text;
  }
};

}  // namespace

Endpoint parse_endpoint(const std::string& base_url) {
  const std::size_t scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidConfig, "provider URL '" + base_url + "' lacks a scheme");
  }
  const std::string scheme = base_url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::InvalidConfig, "unsupported URL scheme '" + scheme + "'");
  }
  const std::size_t host_begin = scheme_end + 3;
  const std::size_t path_begin = base_url.find('/', host_begin);
  Endpoint ep;
  ep.scheme_host_port = base_url.substr(0, path_begin);
  if (ep.scheme_host_port.size() <= host_begin) {
    throw Error(ErrorCode::InvalidConfig, "provider URL '" + base_url + "' lacks a host");
  }
  if (path_begin != std::string::npos) {
    ep.path_prefix = base_url.substr(path_begin);
    while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') ep.path_prefix.pop_back();
  }
  return ep;
}

std::shared_ptr<Provider> make_http_provider(const ProviderConfig& config) {
  switch (config.kind) {
    case ProviderKind::OpenAI: return std::make_shared<OpenAIProvider>(config);
    case ProviderKind::Gemini: return std::make_shared<GeminiProvider>(config);
    case ProviderKind::Anthropic: return std::make_shared<AnthropicProvider>(config);
    case ProviderKind::Scripted: break;
  }
  throw Error(ErrorCode::InvalidConfig, "not an HTTP provider kind");
}

}  // namespace coverpath::detail
