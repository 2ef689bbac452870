#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "mmbin/chain_statics.hpp"
#include "mmbin/experiment.hpp"
#include "mmbin/stats_tests.hpp"
#include "test_support.hpp"

namespace mmbin {
namespace {

using testing::reference_generator;
using testing::reference_lambda;

ExperimentConfig non_modulated_config(std::size_t m, double lambda = 1.0) {
  ProcessSpec spec;
  spec.n = 500;
  spec.lambda = {lambda};
  spec.horizon = 1.0;
  return ExperimentConfig{.spec = spec,
                          .regime = {RegimeKind::non_modulated},
                          .generator = validate_generator(DenseMatrix{{0.0}}),
                          .replicates = m,
                          .grid = {0.5, 1.0},
                          .master_seed = 12345};
}

ExperimentConfig joint_config(std::size_t m, std::size_t threads) {
  ProcessSpec spec;
  spec.n = 200;
  spec.lambda = reference_lambda();
  spec.chain_speed = 200;
  spec.horizon = 2.0;
  return ExperimentConfig{.spec = spec,
                          .regime = {RegimeKind::joint_beta, 1.0},
                          .generator = reference_generator(),
                          .replicates = m,
                          .grid = {1.0, 2.0},
                          .master_seed = 99,
                          .threads = threads};
}

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(KsTest, UniformSamplesAndShiftedSamples) {
  std::vector<double> u(1000);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (i + 0.5) / 1000.0;
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const KsResult exact = ks_test(u, uniform);
  EXPECT_NEAR(exact.statistic, 0.0005, 1e-12);
  EXPECT_NEAR(exact.p_value, 1.0, 1e-12);
  for (auto& x : u) x = x * 0.8;
  const KsResult shifted = ks_test(u, uniform);
  EXPECT_NEAR(shifted.statistic, 0.2, 1e-3);
  EXPECT_LT(shifted.p_value, 1e-10);
  EXPECT_THROW(ks_test_normal(u, 0.0, 0.0), std::invalid_argument);
}

TEST(ChiSquare, TwoSampleIdenticalAndDifferent) {
  std::vector<std::uint64_t> a, b, c;
  for (int k = 0; k < 2000; ++k) {
    a.push_back(k % 10);
    b.push_back((k * 7) % 10);
    c.push_back(k % 10 < 5 ? 0 : k % 10);
  }
  const ChiSquareResult same = chi_square_two_sample(a, b);
  EXPECT_NEAR(same.statistic, 0.0, 1e-12);
  EXPECT_EQ(same.bins, 10u);
  EXPECT_DOUBLE_EQ(same.dof, 9.0);
  EXPECT_LT(chi_square_two_sample(a, c).p_value, 1e-10);
}

TEST(ChiSquare, BinsPoolToMinimumExpectation) {
  std::vector<std::uint64_t> a(100, 0), b(100, 0);
  for (int k = 0; k < 30; ++k) a[k] = b[k] = 1 + k % 30;  // 30 sparse values
  const ChiSquareResult r = chi_square_two_sample(a, b, 20.0);
  EXPECT_LE(r.bins, 200u / 40u);
  EXPECT_GE(r.bins, 2u);
}

TEST(ChiSquare, BinomialGoodnessOfFitDetectsWrongP) {
  RngStream rng(1, 0);
  std::vector<std::uint64_t> xs(5000);
  for (auto& x : xs) x = sample_binomial(rng, 100, 0.3);
  EXPECT_GT(chi_square_binomial(xs, 100, 0.3).p_value, 1e-3);
  EXPECT_LT(chi_square_binomial(xs, 100, 0.33).p_value, 1e-6);
}

TEST(Experiment, ConfigValidation) {
  ExperimentConfig c = non_modulated_config(100);
  EXPECT_NO_THROW(c.validate());
  c.replicates = 99;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = non_modulated_config(100);
  c.grid = {};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.grid = {0.5, 1.5};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.grid = {0.5, 0.5};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = joint_config(100, 1);
  c.spec.chain_speed = 100;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = joint_config(100, 1);
  c.regime = {RegimeKind::gamma, 1.0, 0.5};
  EXPECT_THROW(c.validate(), std::invalid_argument);  // process gamma mismatch
}

TEST(Experiment, RelativeToleranceDefault) {
  EXPECT_DOUBLE_EQ(default_relative_tolerance(100000), 0.10);
  EXPECT_NEAR(default_relative_tolerance(1000), 3.0 * std::sqrt(2.0 / 999.0), 1e-15);
  EXPECT_NEAR(default_relative_tolerance(2000), 0.10, 1e-15);
}

TEST(Experiment, NonModulatedVarianceWithinThreeStandardErrors) {
  const McSummary s = run_experiment(non_modulated_config(2000));
  const McRow& row = s.rows.back();
  const double theory = std::exp(-1.0) * (1 - std::exp(-1.0));
  EXPECT_NEAR(row.theory_var, theory, 1e-15);
  EXPECT_NEAR(row.emp_var, theory, 3.0 * row.var_se);
  EXPECT_GE(row.ks_p, 0.0);
  EXPECT_LE(row.ks_p, 1.0);
  EXPECT_TRUE(variance_gate(s, default_relative_tolerance(2000)).passed);
}

TEST(Experiment, ZeroIntensityIsDegenerate) {
  const McSummary s = run_experiment(non_modulated_config(100, 0.0));
  for (const McRow& row : s.rows) {
    EXPECT_EQ(row.emp_var, 0.0);
    EXPECT_EQ(row.emp_mean, 0.0);
    EXPECT_TRUE(row.degenerate);
    EXPECT_TRUE(std::isnan(row.ks_p));
  }
  const GateReport gate = variance_gate(s, 0.1);
  EXPECT_TRUE(gate.skipped);
  EXPECT_TRUE(gate.passed);
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  const McSummary one = run_experiment(joint_config(120, 1));
  const McSummary three = run_experiment(joint_config(120, 3));
  ASSERT_EQ(one.rows.size(), three.rows.size());
  for (std::size_t k = 0; k < one.rows.size(); ++k) {
    EXPECT_TRUE(bitwise_equal(one.rows[k].emp_mean, three.rows[k].emp_mean));
    EXPECT_TRUE(bitwise_equal(one.rows[k].emp_var, three.rows[k].emp_var));
    EXPECT_TRUE(bitwise_equal(one.rows[k].ks_stat, three.rows[k].ks_stat));
  }
  EXPECT_EQ(one.samples, three.samples);
}

TEST(Experiment, ReplicateMatchesExperimentColumn) {
  const ExperimentConfig c = joint_config(100, 1);
  const McSummary s = run_experiment(c);
  const auto r7 = run_replicate(c, 7);
  EXPECT_EQ(r7[0], s.samples[0][7]);
  EXPECT_EQ(r7[1], s.samples[1][7]);
}

TEST(Experiment, DoublingReplicatesNeverIncreasesVarianceSe) {
  const McSummary small = run_experiment(joint_config(100, 1));
  const McSummary large = run_experiment(joint_config(200, 1));
  for (std::size_t k = 0; k < small.rows.size(); ++k) {
    EXPECT_LE(large.rows[k].var_se, small.rows[k].var_se);
  }
}

TEST(Experiment, EngineSelection) {
  ExperimentConfig c = joint_config(100, 1);
  EXPECT_EQ(resolve_engine(c), Engine::ssa);
  c.spec.n = 10000;
  c.spec.chain_speed = 1e8;
  EXPECT_EQ(resolve_engine(c), Engine::grid);
  c.engine = Engine::ssa;
  EXPECT_EQ(resolve_engine(c), Engine::ssa);
  EXPECT_EQ(engine_from_string("grid"), Engine::grid);
  EXPECT_THROW(engine_from_string("fast"), std::invalid_argument);
}

TEST(Experiment, GridEngineAgreesWithSsaInDistribution) {
  ExperimentConfig ssa = joint_config(3000, 1);
  ssa.engine = Engine::ssa;
  ExperimentConfig grid = ssa;
  grid.engine = Engine::grid;
  grid.master_seed = 100;
  const McSummary a = run_experiment(ssa);
  const McSummary b = run_experiment(grid);
  EXPECT_EQ(b.engine, Engine::grid);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const double se = std::hypot(a.rows[k].var_se, b.rows[k].var_se);
    EXPECT_NEAR(a.rows[k].emp_var, b.rows[k].emp_var, 4.0 * se);
  }
}

TEST(VarianceGate, ExamplesAndMeanCheck) {
  McSummary s;
  s.replicates = 1000;
  McRow row;
  row.time = 1.0;
  row.theory_var = 0.5;
  row.emp_var = 0.5;
  row.rel_err = 0.0;
  row.mean_se = 0.02;
  s.rows = {row};
  EXPECT_TRUE(variance_gate(s, 0.1).passed);

  s.rows[0].emp_var = 0.6;
  s.rows[0].rel_err = 0.2;
  EXPECT_FALSE(variance_gate(s, 0.1).passed);

  s.rows[0].emp_var = 0.5;
  s.rows[0].rel_err = 0.0;
  s.rows[0].emp_mean = 0.09;  // 4.5 standard errors
  EXPECT_FALSE(variance_gate(s, 0.1).passed);
}

TEST(SelfConsistency, LimitSamplesPassTheirOwnKsGate) {
  const ChainStatics statics = compute_statics(reference_generator(), reference_lambda());
  const LimitLaw law = make_limit_law({RegimeKind::joint_beta, 1.0}, statics);
  const std::vector<double> grid{0.5, 1.0, 2.0, 3.0};
  const std::size_t m = 100000;
  std::vector<std::vector<double>> samples(grid.size(), std::vector<double>(m));
  for (std::size_t r = 0; r < m; ++r) {
    RngStream rng(2024, r);
    const auto x = sample_limit_process(law, grid, rng);
    for (std::size_t k = 0; k < grid.size(); ++k) samples[k][r] = x[k];
  }
  const McSummary s = summarize_samples(grid, samples, law);
  for (const McRow& row : s.rows) {
    EXPECT_GT(row.ks_p, 0.01) << "t=" << row.time;
    EXPECT_LE(row.rel_err, default_relative_tolerance(m));
  }
  EXPECT_TRUE(variance_gate(s, default_relative_tolerance(m)).passed);
}

}  // namespace
}  // namespace mmbin
