#include "mmbin/rng.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

namespace mmbin {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  __extension__ using u128 = unsigned __int128;
  const u128 product = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                        std::array<std::uint64_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : key_{master_seed, stream_index} {}

void RngStream::refill() {
  buffer_ = philox4x64({counter_, 0, 0, 0}, key_);
  ++counter_;
  next_ = 0;
}

double RngStream::exponential() { return -std::log(uniform_open()); }

double RngStream::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(*this);
}

std::uint64_t sample_binomial(RngStream& rng, std::uint64_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_binomial: p outside [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (n > static_cast<std::uint64_t>(std::numeric_limits<long long>::max())) {
    throw std::invalid_argument("sample_binomial: n too large");
  }
  boost::random::binomial_distribution<long long, double> dist(static_cast<long long>(n), p);
  return static_cast<std::uint64_t>(dist(rng));
}

std::uint64_t sample_poisson(RngStream& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("sample_poisson: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  boost::random::poisson_distribution<long long, double> dist(mean);
  return static_cast<std::uint64_t>(dist(rng));
}

// Marsaglia–Tsang squeeze/rejection. The acceptance test is written with
// log1p so it stays accurate for shapes in the 1e9 range.
double sample_gamma(RngStream& rng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be > 0");
  if (shape < 1.0) {
    const double boosted = sample_gamma(rng, shape + 1.0);
    return boosted * std::exp(std::log(rng.uniform_open()) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double cx;
    do {
      x = rng.normal();
      cx = c * x;
    } while (cx <= -1.0);
    const double v = (1.0 + cx) * (1.0 + cx) * (1.0 + cx);
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    const double v_minus_one = cx * (3.0 + cx * (3.0 + cx));
    if (std::log(u) < 0.5 * x2 + d * (3.0 * std::log1p(cx) - v_minus_one)) return d * v;
  }
}

}  // namespace mmbin
