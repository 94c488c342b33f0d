#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace meandev {

/// Runs the command line `args` (without the program name). Returns the exit
/// code: 0 on success, 2 on usage or parse errors, 1 on numeric or domain errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace meandev
