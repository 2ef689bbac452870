#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmbin/chain_path.hpp"
#include "mmbin/counting.hpp"
#include "mmbin/generator.hpp"
#include "mmbin/limits.hpp"

namespace mmbin {

/// How replicates are produced. `ssa` simulates every chain jump and event;
/// `grid` draws the exact joint law on the grid via uniformized occupation
/// times (no recovery only); `automatic` picks `grid` when the expected number
/// of chain jumps per replicate exceeds `kGridJumpThreshold`.
enum class Engine { automatic, ssa, grid };

inline constexpr double kGridJumpThreshold = 1e7;

std::string_view to_string(Engine engine);
Engine engine_from_string(std::string_view name);

struct TolerancePolicy {
  double ks_alpha = 0.01;
  std::optional<double> rel_tol;  // defaults to default_relative_tolerance(M)
  double mean_sigmas = 4.0;
  double theory_floor = 1e-6;
};

/// max(0.10, 3·√(2/(M−1))).
double default_relative_tolerance(std::size_t replicates);

struct ExperimentConfig {
  ProcessSpec spec;
  Regime regime;
  Generator generator;
  std::size_t replicates = 1000;
  std::vector<double> grid;
  std::uint64_t master_seed = 0;
  Centering centering = Centering::deterministic;
  InitialState initial = InitialState::stationary();
  Engine engine = Engine::automatic;
  TolerancePolicy tolerance;
  std::size_t threads = 1;  // hint only; results do not depend on it

  /// Throws std::invalid_argument on any inconsistency.
  void validate() const;
  double relative_tolerance() const;
};

/// Engine actually used for a config.
Engine resolve_engine(const ExperimentConfig& config);

struct McRow {
  double time = 0.0;
  double emp_mean = 0.0;
  double emp_var = 0.0;
  double mean_se = 0.0;
  double var_se = 0.0;
  double theory_var = 0.0;
  double rel_err = 0.0;  // NaN when theory_var is below the floor
  double ks_stat = 0.0;  // NaN when degenerate
  double ks_p = 1.0;     // NaN when degenerate
  bool degenerate = false;
};

/// Per-time comparison of replicated samples with a limit law. `samples[k]`
/// holds the values at grid time k, in replicate order.
struct McSummary {
  std::size_t replicates = 0;
  std::vector<McRow> rows;
  std::vector<std::vector<double>> samples;
  Engine engine = Engine::ssa;
};

/// Test stage alone: moments, variance error and KS against N(0, theory_var).
McSummary summarize_samples(std::span<const double> grid,
                            const std::vector<std::vector<double>>& samples, const LimitLaw& law,
                            double theory_floor = 1e-6);

/// Scaled, centred values of one replicate at the grid times.
std::vector<double> run_replicate(const ExperimentConfig& config, std::uint64_t index);

McSummary run_experiment(const ExperimentConfig& config);

struct GateReport {
  bool passed = true;
  bool skipped = false;  // every point degenerate: nothing to compare
  std::vector<std::string> messages;
};

/// Passes iff the relative variance error is within `rel_tol` at every time
/// with theory above the floor and every mean is within `mean_sigmas`
/// standard errors of 0.
GateReport variance_gate(const McSummary& summary, double rel_tol, double mean_sigmas = 4.0,
                         double theory_floor = 1e-6);

}  // namespace mmbin
