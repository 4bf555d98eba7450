#pragma once

// The `maxjsr` command-line front end, kept in the library so tests can
// drive it in-process.
//
// Exit codes: 0 success, 1 a check or certificate verification failed,
// 2 parse or usage error, 3 guard (budget, tolerance, divergence),
// 4 hypothesis violation (reducible set, mu = 0, ...).

#include <ostream>

namespace maxjsr {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace maxjsr
