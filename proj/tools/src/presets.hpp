#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace mmbin::cli {

/// A named bundle of runs for one subcommand.
struct Preset {
  std::string name;
  std::string command;  // chain, simulate, clt or curves
  std::string description;
  std::vector<RunSettings> runs;
};

/// fig1–fig4 and the accept-* experiments.
const std::vector<Preset>& presets();

/// Throws ConfigError for unknown names.
const Preset& find_preset(std::string_view name);

/// Reference three-state chain and per-state intensities shared by presets.
DenseMatrix reference_generator_matrix();
Vector reference_intensities();

}  // namespace mmbin::cli
