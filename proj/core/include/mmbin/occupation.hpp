#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mmbin/generator.hpp"
#include "mmbin/rng.hpp"

namespace mmbin {

/// Occupation times of the chain over one interval together with its end state.
struct IntervalOccupation {
  std::size_t end_state = 0;
  Vector occupation;                  // time spent in each state, sums to the interval length
  std::uint64_t uniformized_steps = 0;
};

/// Exact sampler of (Z_h, ∫₀ʰ Z_s ds) for a chain with generator speed·Q that
/// never materialises individual jumps.
///
/// The chain is uniformized at rate r = speed·max_i(−q_ii): the number of
/// epochs in [0, h] is Poisson(r·h) and the embedded chain P = I + Q/max_exit
/// moves at each epoch. The K+1 sojourns between epochs are exchangeable
/// uniform spacings of [0, h], so conditional on the number c_i of sojourns
/// spent in each state the occupation vector is h·Dirichlet(c). Visit counts
/// of the embedded chain are drawn m steps at a time from a precomputed alias
/// table over (visit counts, end state), which keeps the cost at roughly
/// r·h/m table lookups.
class UniformizedOccupationSampler {
 public:
  UniformizedOccupationSampler(const Generator& g, double speed);

  std::size_t dimension() const { return dimension_; }
  double uniformization_rate() const { return rate_; }
  std::size_t macro_steps() const { return macro_; }

  IntervalOccupation sample(std::size_t start, double h, RngStream& rng) const;

  /// Advances the embedded chain `steps` times from `start`, adding visit
  /// counts of the post-step states into `counts`. Returns the final state.
  std::size_t advance(std::size_t start, std::uint64_t steps, std::vector<std::uint64_t>& counts,
                      RngStream& rng) const;

 private:
  struct Slot {
    double threshold;
    std::uint32_t primary;
    std::uint32_t alias;
  };
  struct MacroTable {
    unsigned bits = 0;
    std::vector<Slot> slots;
    std::vector<std::uint16_t> counts;  // outcome-major, dimension_ entries each
    std::vector<std::uint32_t> end_state;
  };

  std::size_t single_step(std::size_t i, RngStream& rng) const;

  std::size_t dimension_;
  double rate_;
  std::size_t macro_;
  std::vector<std::vector<double>> step_cumulative_;  // per state, over all d targets
  std::vector<MacroTable> tables_;
};

}  // namespace mmbin
