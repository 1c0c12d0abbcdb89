#pragma once

#include <iosfwd>

namespace dht::cli {

// Exit codes. Usage errors come from the argument parser.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitIo = 2;

// Entry point for the `dht` tool: transform, detect, score, eval, bench,
// gtmap. Data goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dht::cli
