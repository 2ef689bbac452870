#include "mmbin/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mmbin {

namespace {

constexpr std::size_t kMaxMacroSteps = 64;
constexpr std::size_t kMaxOutcomesPerState = 8192;

double binomial_coefficient(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// Largest m whose (visit count, end state) support fits the table budget.
std::size_t choose_macro_length(std::size_t d) {
  std::size_t m = 1;
  while (m < kMaxMacroSteps &&
         binomial_coefficient(m + 1 + d - 1, d - 1) * static_cast<double>(d) <=
             static_cast<double>(kMaxOutcomesPerState)) {
    ++m;
  }
  return m;
}

}  // namespace

UniformizedOccupationSampler::UniformizedOccupationSampler(const Generator& g, double speed)
    : dimension_(g.dimension()), rate_(0.0), macro_(1) {
  if (!(speed > 0.0)) throw std::invalid_argument("occupation sampler: speed must be > 0");
  const std::size_t d = dimension_;
  const double max_exit = g.max_exit_rate();
  if (d == 1 || max_exit == 0.0) return;
  rate_ = speed * max_exit;

  // Embedded (uniformized) transition law, column i = distribution after leaving i.
  std::vector<std::vector<double>> step(d, std::vector<double>(d, 0.0));
  step_cumulative_.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      step[i][j] = (i == j) ? 1.0 - g.exit_rate(i) / max_exit : g.rate(i, j) / max_exit;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      acc += step[i][j];
      step_cumulative_[i][j] = acc;
    }
    step_cumulative_[i][d - 1] = 1.0;
  }

  macro_ = choose_macro_length(d);
  tables_.resize(d);
  for (std::size_t s = 0; s < d; ++s) {
    // Distribution over (visit counts of X_1..X_m, X_m) by forward recursion.
    using Key = std::vector<std::uint16_t>;  // d counts followed by current state
    std::map<Key, double> dist;
    Key init(d + 1, 0);
    init[d] = static_cast<std::uint16_t>(s);
    dist[init] = 1.0;
    for (std::size_t step_index = 0; step_index < macro_; ++step_index) {
      std::map<Key, double> next;
      for (const auto& [key, p] : dist) {
        const std::size_t i = key[d];
        for (std::size_t j = 0; j < d; ++j) {
          if (step[i][j] <= 0.0) continue;
          Key k2 = key;
          ++k2[j];
          k2[d] = static_cast<std::uint16_t>(j);
          next[k2] += p * step[i][j];
        }
      }
      dist = std::move(next);
    }

    MacroTable& table = tables_[s];
    const std::size_t outcomes = dist.size();
    while ((std::size_t{1} << table.bits) < outcomes) ++table.bits;
    const std::size_t slots = std::size_t{1} << table.bits;
    table.counts.reserve(slots * d);
    std::vector<double> scaled;
    scaled.reserve(slots);
    double total = 0.0;
    for (const auto& [key, p] : dist) total += p;
    for (const auto& [key, p] : dist) {
      table.counts.insert(table.counts.end(), key.begin(), key.begin() + static_cast<long>(d));
      table.end_state.push_back(key[d]);
      scaled.push_back(p / total * static_cast<double>(slots));
    }
    // Zero-probability padding up to a power of two.
    while (scaled.size() < slots) {
      table.counts.insert(table.counts.end(), d, 0);
      table.end_state.push_back(0);
      scaled.push_back(0.0);
    }

    // Vose alias construction.
    table.slots.resize(slots);
    std::vector<std::uint32_t> small, large;
    for (std::uint32_t k = 0; k < slots; ++k) (scaled[k] < 1.0 ? small : large).push_back(k);
    while (!small.empty() && !large.empty()) {
      const std::uint32_t l = small.back();
      small.pop_back();
      const std::uint32_t g2 = large.back();
      table.slots[l] = {scaled[l], l, g2};
      scaled[g2] = (scaled[g2] + scaled[l]) - 1.0;
      if (scaled[g2] < 1.0) {
        large.pop_back();
        small.push_back(g2);
      }
    }
    for (std::uint32_t k : large) table.slots[k] = {1.0, k, k};
    for (std::uint32_t k : small) table.slots[k] = {1.0, k, k};
  }
}

std::size_t UniformizedOccupationSampler::single_step(std::size_t i, RngStream& rng) const {
  const auto& cum = step_cumulative_[i];
  const double u = rng.uniform();
  for (std::size_t j = 0; j + 1 < cum.size(); ++j) {
    if (u < cum[j]) return j;
  }
  return cum.size() - 1;
}

std::size_t UniformizedOccupationSampler::advance(std::size_t state, std::uint64_t steps,
                                                  std::vector<std::uint64_t>& counts,
                                                  RngStream& rng) const {
  const std::size_t d = dimension_;
  if (rate_ == 0.0) {
    counts[state] += steps;
    return state;
  }
  const std::uint64_t macros = steps / macro_;
  const std::uint64_t rest = steps % macro_;
  for (std::uint64_t k = 0; k < macros; ++k) {
    const MacroTable& table = tables_[state];
    const std::uint64_t x = rng();
    // Top `bits` bits pick the slot, the next 53 bits flip the alias coin.
    const auto slot_index =
        table.bits == 0 ? std::uint32_t{0} : static_cast<std::uint32_t>(x >> (64 - table.bits));
    const double coin = static_cast<double>((x << table.bits) >> 11) * 0x1.0p-53;
    const Slot& slot = table.slots[slot_index];
    const std::uint32_t outcome = coin < slot.threshold ? slot.primary : slot.alias;
    const std::uint16_t* c = &table.counts[static_cast<std::size_t>(outcome) * d];
    for (std::size_t i = 0; i < d; ++i) counts[i] += c[i];
    state = table.end_state[outcome];
  }
  for (std::uint64_t k = 0; k < rest; ++k) {
    state = single_step(state, rng);
    ++counts[state];
  }
  return state;
}

IntervalOccupation UniformizedOccupationSampler::sample(std::size_t start, double h,
                                                        RngStream& rng) const {
  if (start >= dimension_) throw std::out_of_range("occupation sampler: start state out of range");
  if (!(h >= 0.0)) throw std::invalid_argument("occupation sampler: h must be >= 0");
  IntervalOccupation out;
  out.occupation.assign(dimension_, 0.0);
  out.end_state = start;
  if (h == 0.0) return out;
  if (rate_ == 0.0) {
    out.occupation[start] = h;
    return out;
  }

  const std::uint64_t epochs = sample_poisson(rng, rate_ * h);
  std::vector<std::uint64_t> counts(dimension_, 0);
  counts[start] = 1;
  out.end_state = advance(start, epochs, counts, rng);
  out.uniformized_steps = epochs;

  std::size_t visited = 0;
  std::size_t only = start;
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (counts[i] > 0) {
      ++visited;
      only = i;
    }
  }
  if (visited == 1) {
    out.occupation[only] = h;
    return out;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (counts[i] == 0) continue;
    out.occupation[i] = sample_gamma(rng, static_cast<double>(counts[i]));
    total += out.occupation[i];
  }
  for (double& x : out.occupation) x = x / total * h;
  return out;
}

}  // namespace mmbin
