#pragma once

#include <iosfwd>

namespace coverpath {

// Exit statuses, following sysexits where one fits.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitExhausted = 2;
inline constexpr int kExitDriveFailed = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitDataErr = 65;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitUnavailable = 69;
inline constexpr int kExitSoftware = 70;

/// Entry point behind the `coverpath` binary; never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coverpath
