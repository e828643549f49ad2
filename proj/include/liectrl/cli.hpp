#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liectrl {

// Runs one CLI invocation (args exclude the program name) writing the report
// to `out` and diagnostics to `err`. Returns the process exit status: 0 on
// success, 1 on a negative analyze/adrank verdict, 2 on input errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liectrl
