#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ordforms::cli {

/// Exit codes: 0 success, 1 data or I/O error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

} // namespace ordforms::cli
