#pragma once

#include <iosfwd>

namespace recomb {

// Exit codes shared by every subcommand.
inline constexpr int kExitSolved = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;

// Entry point of the `recomb` tool: subcommands solve, bench and check.
// Normal output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace recomb
