#ifndef MORSE_CLI_HPP
#define MORSE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace morse::cli {

enum ExitCode : int { kSuccess = 0, kVerdictFailure = 1, kInputError = 2 };

/// Parses `args` (without the program name), dispatches to the library and
/// renders the result on `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morse::cli

#endif  // MORSE_CLI_HPP
