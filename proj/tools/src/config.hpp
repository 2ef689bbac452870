#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmbin/counting.hpp"
#include "mmbin/dense_matrix.hpp"
#include "mmbin/experiment.hpp"
#include "mmbin/generator.hpp"
#include "mmbin/limits.hpp"

namespace mmbin::cli {

/// Malformed or inconsistent configuration; the message carries file:line
/// when known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully resolved settings of one run. Every field has a value after parsing,
/// so a manifest written from it reproduces the run.
struct RunSettings {
  std::string label;  // subdirectory name when a preset has several runs

  DenseMatrix q{{0.0}};
  Convention convention = Convention::column;

  ProcessSpec process;
  InitialState initial = InitialState::stationary();
  Regime regime;

  std::size_t replicates = 1000;
  std::vector<double> grid;
  Centering centering = Centering::deterministic;
  Engine engine = Engine::automatic;
  TolerancePolicy tolerance;

  std::uint64_t seed = 1;
  std::size_t threads = 1;

  std::size_t paths = 1;          // simulate: number of paths written
  std::size_t plot_paths = 20;    // clt: centred sample paths kept for plotting
  std::size_t plot_points = 201;  // clt: time points of those paths
  std::size_t curve_points = 101; // curves: time points

  Generator generator() const { return validate_generator(q, convention); }
  ExperimentConfig experiment() const;
};

/// Parses YAML text. Unknown keys, wrong types and missing required values
/// raise ConfigError naming `source` and the line.
RunSettings parse_config(const std::string& text, const std::string& source = "<config>");
RunSettings load_config(const std::filesystem::path& path);

/// YAML that parse_config maps back to `settings`, with version and command
/// recorded alongside.
std::string to_manifest(const RunSettings& settings, const std::string& command);

}  // namespace mmbin::cli
