#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perceptsim {

// Process exit codes, stable across versions.
enum ExitCode : int {
    kExitOk = 0,
    kExitFindings = 1,  // validation findings
    kExitUsage = 2,     // usage, I/O, or parse error
    kExitNumeric = 3,   // numeric failure in a pipeline stage
};

// Entry point behind the `perceptsim` executable. `args` excludes the
// program name. Primary output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perceptsim
