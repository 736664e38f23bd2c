#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace colombeau::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kConstruction = 3,
  kEvaluation = 4,
  kIo = 5,
};

// Runs the command line `args` (args[0] is the program name), writing human
// output to `out` and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Writes the five figure CSVs into `outdir`. Throws on failure.
void write_figures(const std::filesystem::path& outdir, char delimiter = ',');

}  // namespace colombeau::cli
