#include "coverpath/error.hpp"

namespace coverpath {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedMap: return "MalformedMap";
    case ErrorCode::DisconnectedFreeSpace: return "DisconnectedFreeSpace";
    case ErrorCode::EmptyMap: return "EmptyMap";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::StartOnObstacle: return "StartOnObstacle";
    case ErrorCode::EmptyEpisodeList: return "EmptyEpisodeList";
    case ErrorCode::UnsupportedMap: return "UnsupportedMap";
    case ErrorCode::NotACorner: return "NotACorner";
    case ErrorCode::MapTooSmall: return "MapTooSmall";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::MalformedProviderResponse: return "MalformedProviderResponse";
    case ErrorCode::ProviderRejected: return "ProviderRejected";
    case ErrorCode::ScriptExhausted: return "ScriptExhausted";
    case ErrorCode::EmptyScript: return "EmptyScript";
    case ErrorCode::EmptyResponse: return "EmptyResponse";
    case ErrorCode::MalformedToken: return "MalformedToken";
    case ErrorCode::OnObstacle: return "OnObstacle";
    case ErrorCode::ExhaustedIterations: return "ExhaustedIterations";
    case ErrorCode::CommandOutOfLimits: return "CommandOutOfLimits";
    case ErrorCode::NonAdjacentCells: return "NonAdjacentCells";
    case ErrorCode::SafetyStop: return "SafetyStop";
    case ErrorCode::StalledProgress: return "StalledProgress";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_retryable(ErrorCode code) {
  return code == ErrorCode::NetworkError || code == ErrorCode::RateLimited;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace coverpath
