#pragma once

#include <iosfwd>

namespace autozoom::cli {

// Exit codes: 0 success, 1 I/O or environment failure, 2 validation or
// domain error (including bad command lines).
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;

// Entry point of the `autozoom` tool. Subcommands: track, zoom, reason,
// bench, synth.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace autozoom::cli
