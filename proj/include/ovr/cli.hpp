#pragma once

namespace ovr {

inline constexpr const char* kVersion = "1.0.0";

/// Parses arguments, runs the requested command and reports through the
/// process exit code: 0 success, 1 usage errors, 2 data errors (unreadable
/// or malformed inputs), 3 runtime failures.
int run_cli(int argc, const char* const* argv);

}  // namespace ovr
