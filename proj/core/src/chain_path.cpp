#include "mmbin/chain_path.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mmbin/chain_statics.hpp"

namespace mmbin {

namespace {

void require_time(const ChainPath& path, double t) {
  if (!(t >= 0.0 && t <= path.horizon)) {
    throw std::out_of_range("time " + std::to_string(t) + " outside path horizon [0, " +
                            std::to_string(path.horizon) + "]");
  }
}

}  // namespace

std::size_t ChainPath::state_at(double t) const {
  const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  if (it == jump_times.begin()) return initial_state;
  return states[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

ChainSampler::ChainSampler(const Generator& g)
    : exit_(g.dimension()),
      pi_(stationary_distribution(g)),
      targets_(g.dimension()),
      cumulative_(g.dimension()) {
  const std::size_t d = g.dimension();
  for (std::size_t i = 0; i < d; ++i) {
    exit_[i] = g.exit_rate(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == i || g.rate(i, j) <= 0.0) continue;
      acc += g.rate(i, j);
      targets_[i].push_back(static_cast<std::uint32_t>(j));
      cumulative_[i].push_back(acc);
    }
    for (double& c : cumulative_[i]) c /= acc;
    if (!cumulative_[i].empty()) cumulative_[i].back() = 1.0;
  }
}

std::size_t ChainSampler::draw_initial(InitialState initial, RngStream& rng) const {
  if (initial.state) {
    if (*initial.state >= dimension()) {
      throw std::out_of_range("initial state " + std::to_string(*initial.state + 1) +
                              " exceeds chain dimension " + std::to_string(dimension()));
    }
    return *initial.state;
  }
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pi_.size(); ++i) {
    acc += pi_[i];
    if (u < acc) return i;
  }
  return pi_.size() - 1;
}

std::size_t ChainSampler::next_state(std::size_t i, double u) const {
  const auto& cum = cumulative_[i];
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
  return targets_[i][k];
}

ChainPath ChainSampler::sample(double speed, InitialState initial, double horizon,
                               RngStream& rng) const {
  if (!(speed > 0.0)) throw std::invalid_argument("chain speed must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  ChainPath path;
  path.horizon = horizon;
  path.speed = speed;
  path.initial_state = draw_initial(initial, rng);
  std::size_t state = path.initial_state;
  double t = 0.0;
  if (dimension() == 1) return path;
  for (;;) {
    t += rng.exponential() / (speed * exit_[state]);
    if (t > horizon) break;
    state = next_state(state, rng.uniform());
    path.jump_times.push_back(t);
    path.states.push_back(static_cast<std::uint32_t>(state));
  }
  return path;
}

ChainPath sample_chain_path(const Generator& g, double speed, InitialState initial, double horizon,
                            RngStream& rng) {
  return ChainSampler(g).sample(speed, initial, horizon, rng);
}

double accumulated_intensity(const ChainPath& path, std::span<const double> lambda, double t) {
  require_time(path, t);
  double total = 0.0;
  double previous = 0.0;
  std::size_t state = path.initial_state;
  for (std::size_t k = 0; k < path.jump_times.size() && path.jump_times[k] < t; ++k) {
    total += lambda[state] * (path.jump_times[k] - previous);
    previous = path.jump_times[k];
    state = path.states[k];
  }
  return total + lambda[state] * (t - previous);
}

Vector occupation_times(const ChainPath& path, std::size_t dimension, double t) {
  require_time(path, t);
  Vector occ(dimension, 0.0);
  double previous = 0.0;
  std::size_t state = path.initial_state;
  for (std::size_t k = 0; k < path.jump_times.size() && path.jump_times[k] < t; ++k) {
    occ[state] += path.jump_times[k] - previous;
    previous = path.jump_times[k];
    state = path.states[k];
  }
  occ[state] += t - previous;
  return occ;
}

}  // namespace mmbin
