#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace secoda::cli {

// Runs one command line (without the program name). Exit codes: 0 success,
// 2 usage or validation error, 3 I/O or runtime error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secoda::cli
