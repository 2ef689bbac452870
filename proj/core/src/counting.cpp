#include "mmbin/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mmbin/chain_statics.hpp"
#include "mmbin/expm.hpp"

namespace mmbin {

bool ProcessSpec::has_recovery() const {
  return std::any_of(mu.begin(), mu.end(), [](double m) { return m != 0.0; });
}

double ProcessSpec::intensity_scale() const {
  return gamma == 0.0 ? 1.0 : std::pow(static_cast<double>(n), -gamma);
}

void ProcessSpec::validate(std::size_t dimension) const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("process spec: " + msg); };
  if (n < 1) fail("n must be >= 1");
  if (n > std::numeric_limits<std::uint32_t>::max()) fail("n must fit in 32 bits");
  if (lambda.size() != dimension) {
    fail("lambda has length " + std::to_string(lambda.size()) + ", chain has dimension " +
         std::to_string(dimension));
  }
  if (!mu.empty() && mu.size() != dimension) {
    fail("mu has length " + std::to_string(mu.size()) + ", chain has dimension " +
         std::to_string(dimension));
  }
  for (double l : lambda)
    if (!(l >= 0.0) || !std::isfinite(l)) fail("lambda entries must be finite and >= 0");
  for (double m : mu)
    if (!(m >= 0.0) || !std::isfinite(m)) fail("mu entries must be finite and >= 0");
  if (!(chain_speed > 0.0) || !std::isfinite(chain_speed)) fail("chain_speed must be > 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) fail("gamma must be >= 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) fail("horizon must be > 0");
  if (gamma > 0.0 && has_recovery()) fail("gamma > 0 cannot be combined with recovery");
}

std::uint64_t CountingPath::count_at(double t) const {
  const auto it = std::upper_bound(event_times.begin(), event_times.end(), t);
  if (it == event_times.begin()) return 0;
  return levels[static_cast<std::size_t>(it - event_times.begin()) - 1];
}

CountingSimulator::CountingSimulator(const ProcessSpec& spec, const Generator& g)
    : spec_(spec), chain_(g) {
  spec_.validate(g.dimension());
  const std::size_t d = g.dimension();
  const double scale = spec_.intensity_scale();
  default_rate_.resize(d);
  recovery_rate_.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    default_rate_[i] = scale * spec_.lambda[i];
    if (!spec_.mu.empty()) recovery_rate_[i] = spec_.mu[i];
  }
}

CountingPath CountingSimulator::sample(InitialState initial, RngStream& rng) const {
  CountingPath path;
  path.n = spec_.n;
  path.chain.horizon = spec_.horizon;
  path.chain.speed = spec_.chain_speed;
  path.chain.initial_state = chain_.draw_initial(initial, rng);

  const double speed = spec_.chain_speed;
  const double horizon = spec_.horizon;
  const auto n = static_cast<double>(spec_.n);
  const bool moving_chain = chain_.dimension() > 1;

  std::size_t state = path.chain.initial_state;
  std::uint32_t k = 0;
  double t = 0.0;
  for (;;) {
    const double chain_rate = moving_chain ? speed * chain_.exit_rate(state) : 0.0;
    const double default_rate = default_rate_[state] * (n - k);
    const double recovery_rate = recovery_rate_[state] * k;
    const double total = chain_rate + default_rate + recovery_rate;
    if (!(total > 0.0)) break;
    t += rng.exponential() / total;
    if (t > horizon) break;
    const double u = rng.uniform() * total;
    if (u < chain_rate) {
      // u / chain_rate is again uniform on [0, 1) given this branch.
      state = chain_.next_state(state, u / chain_rate);
      path.chain.jump_times.push_back(t);
      path.chain.states.push_back(static_cast<std::uint32_t>(state));
    } else if (u < chain_rate + default_rate || recovery_rate == 0.0) {
      ++k;
      path.event_times.push_back(t);
      path.event_marks.push_back(1);
      path.levels.push_back(k);
    } else {
      --k;
      path.event_times.push_back(t);
      path.event_marks.push_back(-1);
      path.levels.push_back(k);
    }
  }
  return path;
}

CountingPath simulate_counting(const ProcessSpec& spec, const Generator& g, InitialState initial,
                               RngStream& rng) {
  return CountingSimulator(spec, g).sample(initial, rng);
}

std::uint64_t conditional_binomial_sample(const ChainPath& path, std::span<const double> lambda,
                                          std::uint64_t n, double t, RngStream& rng,
                                          double intensity_scale) {
  const double big_lambda = intensity_scale * accumulated_intensity(path, lambda, t);
  return sample_binomial(rng, n, -std::expm1(-big_lambda));
}

std::uint64_t conditional_binomial_sample(const ProcessSpec& spec, const ChainPath& path, double t,
                                          RngStream& rng) {
  if (spec.has_recovery()) {
    throw UnsupportedRegimeError(
        "conditional_binomial_sample: the conditional binomial law does not hold with recovery");
  }
  return conditional_binomial_sample(path, spec.lambda, spec.n, t, rng, spec.intensity_scale());
}

double expected_fraction_semianalytic(const Generator& g, const ProcessSpec& spec,
                                      InitialState initial, double t) {
  if (spec.has_recovery()) {
    throw UnsupportedRegimeError("expected_fraction_semianalytic: not defined with recovery");
  }
  spec.validate(g.dimension());
  const std::size_t d = g.dimension();
  DenseMatrix a = spec.chain_speed * g.matrix();
  const double scale = spec.intensity_scale();
  for (std::size_t i = 0; i < d; ++i) a(i, i) -= scale * spec.lambda[i];

  Vector z0(d, 0.0);
  if (initial.state) {
    if (*initial.state >= d) throw std::out_of_range("initial state out of range");
    z0[*initial.state] = 1.0;
  } else {
    z0 = stationary_distribution(g);
  }
  const Vector survival = matrix_exponential_action(a, t, z0);
  double alive = 0.0;
  for (double x : survival) alive += x;
  return std::clamp(1.0 - alive, 0.0, 1.0);
}

double recovery_mean_ode(double lambda_inf, double mu_inf, double t) {
  const double a = lambda_inf + mu_inf;
  if (!(a > 0.0)) throw std::invalid_argument("recovery_mean_ode: lambda + mu must be > 0");
  if (!(t >= 0.0)) throw std::invalid_argument("recovery_mean_ode: t must be >= 0");
  return lambda_inf / a * -std::expm1(-a * t);
}

GridMarginalSampler::GridMarginalSampler(const ProcessSpec& spec, const Generator& g)
    : spec_(spec), chain_(g), occupation_(g, spec.chain_speed) {
  spec_.validate(g.dimension());
  if (spec_.has_recovery()) {
    throw UnsupportedRegimeError("grid marginal sampler: not available with recovery");
  }
}

GridMarginals GridMarginalSampler::sample(InitialState initial, std::span<const double> grid,
                                          RngStream& rng) const {
  GridMarginals out;
  out.times.assign(grid.begin(), grid.end());
  out.counts.reserve(grid.size());
  out.accumulated_intensity.reserve(grid.size());
  out.states.reserve(grid.size());

  std::size_t state = chain_.draw_initial(initial, rng);
  double t = 0.0;
  double big_lambda = 0.0;
  std::uint64_t count = 0;
  const double scale = spec_.intensity_scale();
  for (double next : grid) {
    if (!(next >= t) || next > spec_.horizon) {
      throw std::invalid_argument("grid must be increasing, start at >= 0 and stay within the horizon");
    }
    const IntervalOccupation occ = occupation_.sample(state, next - t, rng);
    double increment = 0.0;
    for (std::size_t i = 0; i < occ.occupation.size(); ++i) {
      increment += spec_.lambda[i] * occ.occupation[i];
    }
    count += sample_binomial(rng, spec_.n - count, -std::expm1(-scale * increment));
    big_lambda += increment;
    state = occ.end_state;
    t = next;
    out.counts.push_back(count);
    out.accumulated_intensity.push_back(big_lambda);
    out.states.push_back(static_cast<std::uint32_t>(state));
  }
  return out;
}

}  // namespace mmbin
