#pragma once

#include <iosfwd>

namespace fwiforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the fwiforge tool: subcommands generate, invert, analyze
/// and validate. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace fwiforge::cli
