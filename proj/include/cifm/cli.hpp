#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cifm::cli {

namespace exit_code {
constexpr int ok = 0;
constexpr int check_failed = 1;
constexpr int usage = 2;
constexpr int range = 3;
constexpr int io = 4;
} // namespace exit_code

/// Runs one command line. `args[0]` is the program name.
int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

} // namespace cifm::cli
