#include <benchmark/benchmark.h>

#include "mmbin/chain_statics.hpp"
#include "mmbin/counting.hpp"
#include "mmbin/expm.hpp"
#include "mmbin/occupation.hpp"

namespace {

mmbin::Generator reference() {
  return mmbin::validate_generator(mmbin::DenseMatrix{{-5, 1, 5}, {2, -2, 5}, {3, 1, -10}});
}

void BM_CountingSsa(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  mmbin::ProcessSpec spec;
  spec.n = n;
  spec.lambda = {0.1, 1.0, 3.0};
  spec.chain_speed = static_cast<double>(n);
  spec.horizon = 3.0;
  const mmbin::CountingSimulator sim(spec, reference());
  std::uint64_t index = 0;
  std::size_t events = 0;
  for (auto _ : state) {
    mmbin::RngStream rng(1, index++);
    const auto path = sim.sample(mmbin::InitialState::stationary(), rng);
    events += path.event_times.size() + path.chain.jump_count();
    benchmark::DoNotOptimize(path.event_times.data());
  }
  state.counters["events/s"] =
      benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_CountingSsa)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_GridMarginals(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  mmbin::ProcessSpec spec;
  spec.n = n;
  spec.lambda = {0.1, 1.0, 3.0};
  spec.chain_speed = static_cast<double>(n) * static_cast<double>(n);
  spec.horizon = 2.0;
  const mmbin::GridMarginalSampler sampler(spec, reference());
  const std::vector<double> grid{1.0, 2.0};
  std::uint64_t index = 0;
  for (auto _ : state) {
    mmbin::RngStream rng(2, index++);
    benchmark::DoNotOptimize(sampler.sample(mmbin::InitialState::stationary(), grid, rng));
  }
}
BENCHMARK(BM_GridMarginals)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ExpmAction(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0));
  mmbin::DenseMatrix a = alpha * reference().matrix();
  a(0, 0) -= 0.1;
  a(1, 1) -= 1.0;
  a(2, 2) -= 3.0;
  const mmbin::Vector v{1.0, 0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(mmbin::matrix_exponential_action(a, 3.0, v));
}
BENCHMARK(BM_ExpmAction)->Arg(1)->Arg(100)->Arg(10000);

void BM_ChainStatics(benchmark::State& state) {
  const auto g = reference();
  const mmbin::Vector lambda{0.1, 1.0, 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(mmbin::compute_statics(g, lambda));
}
BENCHMARK(BM_ChainStatics);

}  // namespace
BENCHMARK_MAIN();
