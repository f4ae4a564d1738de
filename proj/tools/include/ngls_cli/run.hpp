#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ngls::cli {

/// Dispatches one command line (without the program name) and writes the
/// report to `out` (or the path given by --out). Returns the process exit
/// code: 0 success, 2 configuration error, 3 numeric guard, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ngls::cli
