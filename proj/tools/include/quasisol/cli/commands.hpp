#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "quasisol/cli/config.hpp"
#include "quasisol/diagnostics.hpp"
#include "quasisol/errors.hpp"

namespace quasisol::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_solver = 3, exit_accuracy = 4 };

/// usage_error and parameter errors map to 2, accuracy_abort to 4,
/// everything else to 3.
int exit_code_for(ErrorCode code);

struct Outcome {
  int exit_code = exit_ok;
  std::string summary;  ///< one line
};

/// Executes a validated description, writing its files under out_dir.
/// Solver trouble is reported through the exit code; partial outputs are
/// still written.
Outcome run(const RunDescription& description, const std::filesystem::path& out_dir);

/// Trailing-10% L-infinity fit of a diagnostics CSV.
FinalFit fit_report(const std::filesystem::path& diagnostics_csv, int alpha);

/// Whole program: parses args (without argv[0]), runs, prints the summary
/// to out and errors to err, returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quasisol::cli
