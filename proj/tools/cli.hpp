#pragma once

#include <string>
#include <vector>

namespace segdiag::cli {

// Entry point shared by the binary and the tests. Returns the process exit
// code: 0 success, 1 validation error, 2 I/O error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace segdiag::cli
