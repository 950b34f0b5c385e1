#pragma once

#include <ostream>

namespace dimwitness::cli {

// Exit codes are part of the public interface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // bad arguments, unknown witness, parse errors
inline constexpr int kExitTooLarge = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNoViolation = 4;

// Entry point of the command-line tool; writes to out/err instead of the
// process streams so it can run in-process from tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dimwitness::cli
