#pragma once

#include <memory>
#include <string>

#include "coverpath/llm_client.hpp"

namespace coverpath::detail {

struct Endpoint {
  std::string scheme_host_port;  // "https://api.openai.com:443"
  std::string path_prefix;       // "" or "/proxy"
};

/// Throws InvalidConfig for URLs without an http(s) scheme or host.
Endpoint parse_endpoint(const std::string& base_url);

/// config must have base_url and sleeper resolved.
std::shared_ptr<Provider> make_http_provider(const ProviderConfig& config);

}  // namespace coverpath::detail
