#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mmbin {

/// Counter-based random stream (Philox4x64-10).
///
/// The key is (master_seed, stream_index) and the counter starts at zero, so a
/// stream is fully determined by those two numbers and substreams never need
/// jump-ahead. Satisfies UniformRandomBitGenerator. Not thread-safe: each task
/// owns its stream.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (next_ == kBlock) refill();
    return buffer_[next_++];
  }

  std::uint64_t master_seed() const { return key_[0]; }
  std::uint64_t stream_index() const { return key_[1]; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }
  /// Exponential with rate 1.
  double exponential();
  /// Standard normal.
  double normal();

 private:
  static constexpr std::size_t kBlock = 4;
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, kBlock> buffer_{};
  std::size_t next_ = kBlock;
};

/// Raw Philox4x64-10 block function, exposed for known-answer tests.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

/// Binomial(n, p) draw.
std::uint64_t sample_binomial(RngStream& rng, std::uint64_t n, double p);
/// Poisson(mean) draw; handles means well beyond 2^31.
std::uint64_t sample_poisson(RngStream& rng, double mean);
/// Gamma(shape, 1) draw.
double sample_gamma(RngStream& rng, double shape);

}  // namespace mmbin
