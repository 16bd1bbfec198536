#pragma once

#include <string>
#include <vector>

namespace ivreg {

// Whole command-line app as a callable, so tests can drive it in-process.
// Exit codes: 0 success, 2 usage, 3 data/schema, 4 numerical (rank or
// singularity).
int run_cli(const std::vector<std::string>& args);

}  // namespace ivreg
