#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fuselab::cli {

// Runs one CLI invocation. args excludes the program name. Data goes to
// `out` (or the --output file), diagnostics to `err`. Returns the process
// exit status: 0 success, 1 data/IO error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fuselab::cli
