#ifndef RISKM_CLI_HPP
#define RISKM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace riskm::cli {

// Dispatch one command-line invocation (argv without the program name).
// stdout carries exactly one JSON document; human-readable prose goes to
// stderr. Returns the process exit code: 0 success, 1 domain or validation
// error (stdout then carries {"error": ...}), 2 tripped internal guard.
// Identical arguments, files, and seed give byte-identical stdout.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace riskm::cli

#endif  // RISKM_CLI_HPP
