#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coverpath {

enum class ErrorCode {
  // grid
  MalformedMap,
  DisconnectedFreeSpace,
  EmptyMap,
  OutOfBounds,
  // metrics
  InvalidPath,
  StartOnObstacle,
  EmptyEpisodeList,
  // patterns
  UnsupportedMap,
  NotACorner,
  MapTooSmall,
  // llm_client
  InvalidRequest,
  NetworkError,
  AuthError,
  RateLimited,
  MalformedProviderResponse,
  ProviderRejected,
  ScriptExhausted,
  EmptyScript,
  // planner
  EmptyResponse,
  MalformedToken,
  OnObstacle,
  ExhaustedIterations,
  // sim / nav
  CommandOutOfLimits,
  NonAdjacentCells,
  SafetyStop,
  StalledProgress,
  // harness / config
  InvalidConfig,
  IoError,
};

/// Stable name used in episode records and CLI output.
std::string_view to_string(ErrorCode code);

/// True for transport failures worth retrying (NetworkError, RateLimited).
bool is_retryable(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coverpath
