#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <ewgeom/states.hpp>

namespace ewgeom::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNonConvergence = 2, kMismatch = 3 };

/// Runs one command line (without the program name). Reports go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "3,3,1", "1/3,-2,0.5" -> values. Throws std::invalid_argument.
std::vector<double> parse_list(const std::string& text);
double parse_number(const std::string& text);

/// Classification stated for the beta line at grid points beta = k/10.
std::optional<Classification> expected_beta_line(double beta);
/// Classification stated for varrho at integer beta and gamma in {0, 2, 3, 4, 6}.
std::optional<Classification> expected_varrho(double beta, double gamma);

}  // namespace ewgeom::cli
