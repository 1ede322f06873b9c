#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace enlarge::cli {

enum ExitCode : int {
    kOk = 0,
    kDomainError = 1,  // library error on well-formed input, or an invalid basis under `validate`
    kSchemaError = 2,
    kViolation = 3,
};

/// Parses args (without the program name), runs one subcommand and writes the JSON report to
/// --output or to out. Diagnostics and reproducers also go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace enlarge::cli
