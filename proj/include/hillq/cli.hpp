#ifndef HILLQ_CLI_HPP
#define HILLQ_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace hillq::cli {

enum ExitCode : int {
  kOk = 0,
  kIoOrSchema = 1,
  kUnstable = 2,
  kResonance = 3,
  kVerificationFailed = 4,
};

/// Runs one command line (args[0] is the program name). The JSON report goes
/// to `out`, diagnostics to `err`; CSV files go to --out when given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hillq::cli

#endif  // HILLQ_CLI_HPP
