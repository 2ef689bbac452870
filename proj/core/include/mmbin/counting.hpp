#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmbin/chain_path.hpp"
#include "mmbin/generator.hpp"
#include "mmbin/occupation.hpp"
#include "mmbin/rng.hpp"

namespace mmbin {

/// Parameters of a (Markov-modulated) binomial counting process.
struct ProcessSpec {
  std::uint64_t n = 1;       // number of obligors
  Vector lambda;             // per-state default intensity
  Vector mu;                 // per-state recovery intensity; empty means none
  double chain_speed = 1.0;  // multiplier applied to Q
  double gamma = 0.0;        // default intensity is scaled by n^{-gamma}
  double horizon = 1.0;

  bool has_recovery() const;
  /// n^{-gamma}
  double intensity_scale() const;
  /// Throws std::invalid_argument on any violated constraint.
  void validate(std::size_t dimension) const;
};

/// Raised when an operation is only defined without recovery.
class UnsupportedRegimeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Event record of N together with the chain path that drove it.
struct CountingPath {
  std::uint64_t n = 0;
  std::vector<double> event_times;       // strictly increasing
  std::vector<std::int8_t> event_marks;  // +1 default, -1 recovery
  std::vector<std::uint32_t> levels;     // N just after each event
  ChainPath chain;

  /// N(t), right-continuous.
  std::uint64_t count_at(double t) const;
};

/// Joint event-driven simulation of (Z, N). In state (i, k) the competing
/// rates are speed·q_ji for chain moves, n^{-γ}λ_i(n−k) for a default and
/// μ_i·k for a recovery.
class CountingSimulator {
 public:
  CountingSimulator(const ProcessSpec& spec, const Generator& g);

  const ProcessSpec& spec() const { return spec_; }
  const ChainSampler& chain() const { return chain_; }
  CountingPath sample(InitialState initial, RngStream& rng) const;

 private:
  ProcessSpec spec_;
  ChainSampler chain_;
  Vector default_rate_;  // n^{-γ}λ_i
  Vector recovery_rate_;
};

CountingPath simulate_counting(const ProcessSpec& spec, const Generator& g, InitialState initial,
                               RngStream& rng);

/// Binomial(n, 1 − exp(−scale·Λ_t)) given the chain path.
std::uint64_t conditional_binomial_sample(const ChainPath& path, std::span<const double> lambda,
                                          std::uint64_t n, double t, RngStream& rng,
                                          double intensity_scale = 1.0);

/// Same, driven by a spec; rejects specs with recovery.
std::uint64_t conditional_binomial_sample(const ProcessSpec& spec, const ChainPath& path, double t,
                                          RngStream& rng);

/// E[N_t]/n = 1 − 𝟙ᵀexp((speed·Q − n^{-γ}diag{λ})t)z₀, with z₀ a unit vector
/// or π. Recovery specs are rejected.
double expected_fraction_semianalytic(const Generator& g, const ProcessSpec& spec,
                                      InitialState initial, double t);

/// ρ_t = λ/(λ+μ)·(1 − e^{−(λ+μ)t}).
double recovery_mean_ode(double lambda_inf, double mu_inf, double t);

/// N, Λ and the chain state at each grid time.
struct GridMarginals {
  std::vector<double> times;
  std::vector<std::uint64_t> counts;
  std::vector<double> accumulated_intensity;  // unscaled Λ_t
  std::vector<std::uint32_t> states;
};

/// Exact joint law of (N_t, Λ_t, Z_t) on an increasing grid without recovery:
/// chain occupation per grid interval from the uniformized sampler, then
/// N_{t'} − N_t ~ Bin(n − N_t, 1 − exp(−n^{-γ}(Λ_{t'} − Λ_t))).
class GridMarginalSampler {
 public:
  GridMarginalSampler(const ProcessSpec& spec, const Generator& g);

  GridMarginals sample(InitialState initial, std::span<const double> grid, RngStream& rng) const;

 private:
  ProcessSpec spec_;
  ChainSampler chain_;
  UniformizedOccupationSampler occupation_;
};

}  // namespace mmbin
