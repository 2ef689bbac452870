#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mmbin/generator.hpp"
#include "mmbin/rng.hpp"

namespace mmbin {

/// Where a simulated chain starts: a fixed state or a draw from π.
struct InitialState {
  std::optional<std::size_t> state;

  static InitialState stationary() { return {}; }
  static InitialState fixed(std::size_t i) { return {i}; }
  bool is_stationary() const { return !state.has_value(); }
};

/// Piecewise-constant, right-continuous trajectory of the background chain on
/// [0, horizon].
struct ChainPath {
  double horizon = 0.0;
  double speed = 1.0;
  std::size_t initial_state = 0;
  std::vector<double> jump_times;        // strictly increasing, in (0, horizon]
  std::vector<std::uint32_t> states;     // state entered at each jump

  std::size_t jump_count() const { return jump_times.size(); }
  /// State occupied at time t (the post-jump state at a jump instant).
  std::size_t state_at(double t) const;
};

/// Precomputed exit rates and jump distributions of a generator.
class ChainSampler {
 public:
  explicit ChainSampler(const Generator& g);

  std::size_t dimension() const { return exit_.size(); }
  double exit_rate(std::size_t i) const { return exit_[i]; }
  const Vector& stationary() const { return pi_; }

  std::size_t draw_initial(InitialState initial, RngStream& rng) const;
  /// Next state after leaving i, given u uniform on [0, 1).
  std::size_t next_state(std::size_t i, double u) const;

  /// Exact path of the chain with generator speed·Q on [0, horizon].
  ChainPath sample(double speed, InitialState initial, double horizon, RngStream& rng) const;

 private:
  Vector exit_;
  Vector pi_;
  std::vector<std::vector<std::uint32_t>> targets_;
  std::vector<std::vector<double>> cumulative_;
};

ChainPath sample_chain_path(const Generator& g, double speed, InitialState initial, double horizon,
                            RngStream& rng);

/// Λ_t = ∫₀ᵗ λ(Z_s) ds, exact for the piecewise-constant path.
double accumulated_intensity(const ChainPath& path, std::span<const double> lambda, double t);

/// Time spent in each state during [0, t].
Vector occupation_times(const ChainPath& path, std::size_t dimension, double t);

}  // namespace mmbin
