#ifndef LORENZ5_TOOLS_CLI_H
#define LORENZ5_TOOLS_CLI_H

#include "lorenz5/types.h"

#include <ostream>
#include <string>
#include <vector>

namespace lorenz5::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

/// Runs one command. `args` excludes the program name. Output goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a flat "key = value" file into "--key=value" tokens. Blank lines and
/// lines starting with '#' are skipped. Throws ConfigError on malformed lines.
std::vector<std::string> read_config_file(const std::string& path);

/// Parses a real number that may be written as a multiple or fraction of pi:
/// "1.5", "pi", "-pi/2", "2pi", "0.5pi".
double parse_angle(const std::string& text);

/// "start:stop:count" -> count points start + i (stop - start) / count,
/// i = 0..count-1 (stop excluded, so 0:2pi:n is a periodic grid).
std::vector<double> parse_grid(const std::string& spec);

/// Comma-separated reals (pi forms allowed). An empty string gives an empty list.
std::vector<double> parse_list(const std::string& text);

} // namespace lorenz5::cli

#endif // LORENZ5_TOOLS_CLI_H
