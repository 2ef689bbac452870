#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "presets.hpp"

using namespace mmbin::cli;

int main(int argc, char** argv) {
  CLI::App app{"Markov-modulated binomial counting processes: simulation and limit laws"};
  app.set_version_flag("--version", MMBIN_VERSION);
  app.require_subcommand(0, 1);

  bool list = false;
  app.add_flag("--list-presets", list, "List available presets and exit");

  std::string config_path, preset_name;
  CommandOptions options;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  const std::pair<const char*, const char*> commands[] = {
      {"chain", "Stationary law, fundamental and deviation matrices of the background chain"},
      {"simulate", "Sample paths of the counting process and its intensity"},
      {"clt", "Replicated experiment against the limit law, with variance gate"},
      {"curves", "Centring curve and limit variance of a regime"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* cfg = sub->add_option("--config", config_path, "YAML configuration file")->check(CLI::ExistingFile);
    auto* pre = sub->add_option("--preset", preset_name, "Built-in configuration (see --list-presets)");
    cfg->excludes(pre);
    sub->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Override the master seed");
    sub->add_option("--threads", threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--svg", options.svg, "Also write SVG plots");
    sub->add_flag("--force", options.force, "Allow writing into a non-empty output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (list) {
    for (const Preset& p : presets()) std::cout << p.name << " (" << p.command << "): " << p.description << '\n';
    return kOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) options.seed = seed;
  if (sub->count("--threads")) options.threads = threads;

  std::vector<RunSettings> runs;
  try {
    if (!preset_name.empty()) {
      runs = find_preset(preset_name).runs;
    } else if (!config_path.empty()) {
      runs.push_back(load_config(config_path));
    } else {
      std::cerr << "error: one of --config or --preset is required\n";
      return kUsage;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kValidation;
  }

  try {
    return run_command(sub->get_name(), std::move(runs), options, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
}
