#pragma once

namespace lrmt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv, runs one subcommand and returns the process exit status:
/// 0 on success, 1 on an operational failure, 2 on a usage or config error.
/// Logs go to stderr.
int run(int argc, const char* const* argv);

} // namespace lrmt::cli
