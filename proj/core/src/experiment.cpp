#include "mmbin/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mmbin/chain_statics.hpp"
#include "mmbin/stats_tests.hpp"

namespace mmbin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_recovery_regime(RegimeKind kind) {
  return kind == RegimeKind::recovery_non_modulated || kind == RegimeKind::recovery_joint;
}

bool is_joint_regime(RegimeKind kind) {
  return kind == RegimeKind::joint_beta || kind == RegimeKind::recovery_joint;
}

// Everything a replicate needs, built once per experiment.
class Runner {
 public:
  explicit Runner(const ExperimentConfig& config)
      : config_(config),
        statics_(compute_statics(config.generator, config.spec.lambda, config.spec.mu)),
        engine_(resolve_engine(config)) {
    if (engine_ == Engine::grid) {
      grid_sampler_.emplace(config.spec, config.generator);
    } else {
      simulator_.emplace(config.spec, config.generator);
    }
    if (config_.centering == Centering::deterministic) {
      rho_.reserve(config_.grid.size());
      for (double t : config_.grid) rho_.push_back(centering_curve(config_.regime, statics_, t));
    }
  }

  Engine engine() const { return engine_; }
  const ChainStatics& statics() const { return statics_; }

  std::vector<double> run(std::uint64_t index) const {
    RngStream rng(config_.master_seed, index);
    if (simulator_) {
      const CountingPath path = simulator_->sample(config_.initial, rng);
      return center_and_scale(path, config_.regime, statics_, config_.grid, config_.centering);
    }
    const GridMarginals marginals = grid_sampler_->sample(config_.initial, config_.grid, rng);
    const double exponent = scaling_exponent(config_.regime);
    const double scale = config_.spec.intensity_scale();
    std::vector<double> out(config_.grid.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double rho = config_.centering == Centering::deterministic
                             ? rho_[k]
                             : -std::expm1(-scale * marginals.accumulated_intensity[k]);
      out[k] = scaled_deviation(config_.spec.n, static_cast<double>(marginals.counts[k]), rho,
                                exponent);
    }
    return out;
  }

 private:
  const ExperimentConfig& config_;
  ChainStatics statics_;
  Engine engine_;
  std::optional<CountingSimulator> simulator_;
  std::optional<GridMarginalSampler> grid_sampler_;
  std::vector<double> rho_;
};

}  // namespace

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::automatic: return "auto";
    case Engine::ssa: return "ssa";
    case Engine::grid: return "grid";
  }
  return "unknown";
}

Engine engine_from_string(std::string_view name) {
  if (name == "auto") return Engine::automatic;
  if (name == "ssa") return Engine::ssa;
  if (name == "grid") return Engine::grid;
  throw std::invalid_argument("unknown engine '" + std::string(name) + "' (auto, ssa, grid)");
}

double default_relative_tolerance(std::size_t replicates) {
  if (replicates < 2) throw std::invalid_argument("default_relative_tolerance: need M >= 2");
  return std::max(0.10, 3.0 * std::sqrt(2.0 / static_cast<double>(replicates - 1)));
}

void ExperimentConfig::validate() const {
  const std::size_t d = generator.dimension();
  spec.validate(d);
  regime.validate();
  if (replicates < 100) throw std::invalid_argument("replicates must be at least 100");
  if (grid.empty()) throw std::invalid_argument("grid must not be empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k]) || grid[k] < 0.0 || grid[k] > spec.horizon) {
      throw std::invalid_argument("grid times must lie in [0, horizon]");
    }
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw std::invalid_argument("grid times must be strictly increasing");
    }
  }
  if (initial.state && *initial.state >= d) {
    throw std::invalid_argument("initial state out of range");
  }
  if (spec.gamma != regime.intensity_exponent()) {
    throw std::invalid_argument("process gamma does not match the regime");
  }
  if (spec.has_recovery() && !is_recovery_regime(regime.kind)) {
    throw std::invalid_argument("recovery rates given for a regime without recovery");
  }
  if (is_joint_regime(regime.kind)) {
    const double expected = std::pow(static_cast<double>(spec.n), regime.beta);
    if (std::abs(spec.chain_speed - expected) > 1e-9 * expected) {
      throw std::invalid_argument("joint regime requires chain_speed = n^beta");
    }
  }
  if (centering == Centering::pathwise && is_recovery_regime(regime.kind)) {
    throw std::invalid_argument("pathwise centering is undefined with recovery");
  }
  if (regime.kind == RegimeKind::gamma && centering != Centering::pathwise) {
    throw std::invalid_argument("the gamma regime requires pathwise centering");
  }
  if (engine == Engine::grid && spec.has_recovery()) {
    throw std::invalid_argument("the grid engine does not support recovery");
  }
  if (!(tolerance.ks_alpha > 0.0 && tolerance.ks_alpha < 1.0)) {
    throw std::invalid_argument("ks_alpha must lie in (0, 1)");
  }
  if (tolerance.rel_tol && !(*tolerance.rel_tol > 0.0)) {
    throw std::invalid_argument("rel_tol must be positive");
  }
}

double ExperimentConfig::relative_tolerance() const {
  return tolerance.rel_tol.value_or(default_relative_tolerance(replicates));
}

Engine resolve_engine(const ExperimentConfig& config) {
  if (config.engine != Engine::automatic) return config.engine;
  if (config.spec.has_recovery() || config.generator.dimension() < 2) return Engine::ssa;
  const double jumps =
      config.spec.chain_speed * config.generator.max_exit_rate() * config.grid.back();
  return jumps > kGridJumpThreshold ? Engine::grid : Engine::ssa;
}

McSummary summarize_samples(std::span<const double> grid,
                            const std::vector<std::vector<double>>& samples, const LimitLaw& law,
                            double theory_floor) {
  if (samples.size() != grid.size()) {
    throw std::invalid_argument("summarize_samples: one sample vector per grid time expected");
  }
  McSummary summary;
  summary.replicates = samples.empty() ? 0 : samples.front().size();
  if (summary.replicates < 2) throw std::invalid_argument("summarize_samples: need M >= 2");
  const auto m = static_cast<double>(summary.replicates);

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& xs = samples[k];
    if (xs.size() != summary.replicates) {
      throw std::invalid_argument("summarize_samples: ragged sample matrix");
    }
    McRow row;
    row.time = grid[k];
    double sum = 0.0;
    for (double x : xs) sum += x;
    row.emp_mean = sum / m;
    double squares = 0.0;
    for (double x : xs) squares += (x - row.emp_mean) * (x - row.emp_mean);
    row.emp_var = squares / (m - 1.0);
    row.mean_se = std::sqrt(row.emp_var / m);
    row.theory_var = law.variance(grid[k]);

    const double spread = std::sqrt(2.0 / (m - 1.0));
    const bool theory_ok = row.theory_var > theory_floor;
    row.var_se = (theory_ok ? row.theory_var : row.emp_var) * spread;
    row.rel_err = theory_ok ? std::abs(row.emp_var - row.theory_var) / row.theory_var : kNaN;
    row.degenerate = !theory_ok || row.emp_var == 0.0;
    if (row.degenerate) {
      row.ks_stat = kNaN;
      row.ks_p = kNaN;
    } else {
      const KsResult ks = ks_test_normal(xs, 0.0, row.theory_var);
      row.ks_stat = ks.statistic;
      row.ks_p = ks.p_value;
    }
    summary.rows.push_back(row);
  }
  summary.samples = samples;
  return summary;
}

std::vector<double> run_replicate(const ExperimentConfig& config, std::uint64_t index) {
  config.validate();
  return Runner(config).run(index);
}

McSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Runner runner(config);
  const std::size_t m = config.replicates;
  std::vector<std::vector<double>> by_replicate(m);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= m) return;
      try {
        by_replicate[r] = runner.run(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(m);
        return;
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, m);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::vector<double>> by_time(config.grid.size(), std::vector<double>(m));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < config.grid.size(); ++k) by_time[k][r] = by_replicate[r][k];
  }
  const LimitLaw law = make_limit_law(config.regime, runner.statics());
  McSummary summary =
      summarize_samples(config.grid, by_time, law, config.tolerance.theory_floor);
  summary.engine = runner.engine();
  return summary;
}

GateReport variance_gate(const McSummary& summary, double rel_tol, double mean_sigmas,
                         double theory_floor) {
  GateReport report;
  std::size_t compared = 0;
  for (const McRow& row : summary.rows) {
    std::ostringstream msg;
    msg << "t=" << row.time << ": ";
    if (row.theory_var > theory_floor) {
      ++compared;
      const bool ok = row.rel_err <= rel_tol;
      msg << "variance " << row.emp_var << " vs theory " << row.theory_var << " (rel err "
          << row.rel_err << ", tol " << rel_tol << ") " << (ok ? "ok" : "FAIL");
      report.passed = report.passed && ok;
    } else {
      msg << "theory variance below " << theory_floor << ", variance not compared";
    }
    const bool mean_ok = std::abs(row.emp_mean) <= mean_sigmas * row.mean_se;
    msg << "; mean " << row.emp_mean << " (se " << row.mean_se << ") "
        << (mean_ok ? "ok" : "FAIL");
    report.passed = report.passed && mean_ok;
    report.messages.push_back(msg.str());
  }
  if (compared == 0) {
    report.skipped = true;
    report.messages.push_back("degenerate distribution: gate skipped");
  }
  return report;
}

}  // namespace mmbin
