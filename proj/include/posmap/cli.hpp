// cli.hpp — Command front end over the shared JSON formats.
//
// Exit codes: 0 success, 2 input error, 3 domain error, 4 resource limit.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace posmap {

// Runs one subcommand (args exclude the program name). All reports go to
// `out`; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace posmap
