#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"

namespace mmbin::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kGateFailure = 3 };

/// The output directory exists, is not empty and --force was not given.
class OutputExistsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandOptions {
  std::filesystem::path out_dir = "out";
  bool svg = false;
  bool force = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

/// pi.csv, F.csv, D.csv, residuals.csv and statics.csv. Fails the gate when
/// an identity residual exceeds 1e-10.
int cmd_chain(const RunSettings& s, const std::filesystem::path& dir, bool svg, std::ostream& log);

/// path.csv (or path_<k>.csv) with time, N, chain_state, intensity.
int cmd_simulate(const RunSettings& s, const std::filesystem::path& dir, bool svg, std::ostream& log);

/// summary.csv from run_experiment and paths.csv with centred sample paths
/// next to the theory standard deviation; the exit code reflects the gate.
int cmd_clt(const RunSettings& s, const std::filesystem::path& dir, bool svg, std::ostream& log);

/// curves.csv with the centring curve and the limit variance.
int cmd_curves(const RunSettings& s, const std::filesystem::path& dir, bool svg, std::ostream& log);

/// Creates `dir`; refuses a non-empty directory unless `force`.
void prepare_output_dir(const std::filesystem::path& dir, bool force);

/// Applies overrides, writes a manifest per run and dispatches. Runs of a
/// multi-run preset go to subdirectories named by their labels. Returns the
/// worst exit code; errors are reported on `err`.
int run_command(const std::string& command, std::vector<RunSettings> runs,
                const CommandOptions& options, std::ostream& log, std::ostream& err);

}  // namespace mmbin::cli
