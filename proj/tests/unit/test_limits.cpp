#include <gtest/gtest.h>

#include <cmath>

#include "mmbin/chain_statics.hpp"
#include "mmbin/counting.hpp"
#include "mmbin/limits.hpp"
#include "mmbin/quadrature.hpp"
#include "test_support.hpp"

namespace mmbin {
namespace {

using testing::reference_generator;
using testing::reference_lambda;

ChainStatics reference_statics() { return compute_statics(reference_generator(), reference_lambda()); }

// e^{−2at}∫₀ᵗ e^{2as}σ²(s) ds by quadrature.
double ou_variance_oracle(const std::function<double(double)>& sigma2, double a, double t) {
  return integrate([&](double s) { return std::exp(-2.0 * a * (t - s)) * sigma2(s); }, 0.0, t,
                   1e-13);
}

std::vector<double> grid100(double horizon) {
  std::vector<double> g;
  for (int k = 1; k <= 100; ++k) g.push_back(horizon * k / 100.0);
  return g;
}

TEST(Regime, NamesRoundTrip) {
  for (auto kind : {RegimeKind::non_modulated, RegimeKind::iterated_n_then_alpha,
                    RegimeKind::iterated_alpha_then_n, RegimeKind::joint_beta, RegimeKind::gamma,
                    RegimeKind::recovery_non_modulated, RegimeKind::recovery_joint}) {
    EXPECT_EQ(regime_kind_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW(regime_kind_from_string("joint"), std::invalid_argument);
  EXPECT_EQ(centering_from_string("pathwise"), Centering::pathwise);
  EXPECT_THROW(centering_from_string("none"), std::invalid_argument);
}

TEST(Regime, Validation) {
  EXPECT_THROW((Regime{RegimeKind::gamma, 1.0, 0.0}).validate(), std::invalid_argument);
  EXPECT_THROW((Regime{RegimeKind::gamma, 1.0, 1.0}).validate(), std::invalid_argument);
  EXPECT_THROW((Regime{RegimeKind::joint_beta, 0.0, 0.0}).validate(), std::invalid_argument);
  EXPECT_NO_THROW((Regime{RegimeKind::gamma, 1.0, 0.5}).validate());
}

TEST(ScalingExponent, ByRegime) {
  EXPECT_DOUBLE_EQ(scaling_exponent({RegimeKind::non_modulated}), -0.5);
  EXPECT_DOUBLE_EQ(scaling_exponent({RegimeKind::iterated_n_then_alpha}), -0.5);
  EXPECT_DOUBLE_EQ(scaling_exponent({RegimeKind::joint_beta, 1.0}), -0.5);
  EXPECT_DOUBLE_EQ(scaling_exponent({RegimeKind::joint_beta, 2.0}), -0.5);
  EXPECT_DOUBLE_EQ(scaling_exponent({RegimeKind::joint_beta, 0.5}), -0.75);
  EXPECT_DOUBLE_EQ(scaling_exponent({RegimeKind::recovery_joint, 0.5}), -0.75);
  EXPECT_DOUBLE_EQ(scaling_exponent({RegimeKind::gamma, 1.0, 0.5}), -0.25);
  EXPECT_DOUBLE_EQ(scaling_exponent({RegimeKind::recovery_non_modulated}), -0.5);
}

TEST(LimitVariance, ClosedFormsForReferenceChain) {
  const ChainStatics s = reference_statics();
  const double lam = 30.25 / 29.0, v = s.V;
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    const double e = std::exp(-lam * t);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::joint_beta, 1.0}, s, t),
                std::exp(-2 * lam * t) * (v * t + std::exp(lam * t) - 1.0), 1e-14);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::joint_beta, 0.5}, s, t), v * t * e * e, 1e-14);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::joint_beta, 2.0}, s, t), e * (1 - e), 1e-14);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::iterated_n_then_alpha}, s, t), e * (1 - e), 1e-14);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::iterated_alpha_then_n}, s, t), e * (1 - e), 1e-14);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::gamma, 1.0, 0.5}, s, t), lam * t, 1e-13);
  }
  EXPECT_DOUBLE_EQ(limit_variance_curve({RegimeKind::joint_beta, 1.0}, s, 0.0), 0.0);
}

TEST(LimitVariance, OuFormulaMatchesQuadrature) {
  const ChainStatics s = reference_statics();
  const double lam = s.lambda_inf, v = s.V;
  for (double t : {0.25, 1.0, 4.0}) {
    EXPECT_NEAR(limit_variance_curve({RegimeKind::joint_beta, 1.0}, s, t),
                ou_variance_oracle([&](double u) { return lam * std::exp(-lam * u) + v * std::exp(-2 * lam * u); }, lam, t),
                1e-12);
  }
}

TEST(LimitVariance, RecoveryNonModulatedIsBinomialVariance) {
  // With σ² = λ − (λ − μ)ρ the OU variance equals ρ(1 − ρ).
  const Generator one = validate_generator(DenseMatrix{{0.0}});
  const ChainStatics s = compute_statics(one, Vector{1.0}, Vector{0.5});
  const Regime r{RegimeKind::recovery_non_modulated};
  for (double t : {0.1, 1.0, 3.0, 10.0}) {
    const double rho = recovery_mean_ode(1.0, 0.5, t);
    EXPECT_NEAR(centering_curve(r, s, t), rho, 1e-15);
    EXPECT_NEAR(limit_variance_curve(r, s, t), rho * (1 - rho), 1e-13);
    EXPECT_NEAR(limit_variance_curve(r, s, t),
                ou_variance_oracle([](double u) { return 1.0 - 0.5 * recovery_mean_ode(1.0, 0.5, u); }, 1.5, t),
                1e-12);
  }
}

TEST(LimitVariance, RecoveryJointMatchesVectorQuadrature) {
  const Generator g = reference_generator();
  const Vector lambda = reference_lambda();
  const Vector mu{0.4, 0.1, 2.0};
  const ChainStatics s = compute_statics(g, lambda, mu);
  const DenseMatrix sym = symmetrized_deviation(s.pi, s.D);
  const double a = s.lambda_inf + s.mu_inf;
  auto sigma1 = [&](double u) {
    const double rho = recovery_mean_ode(s.lambda_inf, s.mu_inf, u);
    Vector phi(3);
    for (int i = 0; i < 3; ++i) phi[i] = (1 - rho) * lambda[i] - rho * mu[i];
    return dot(phi, sym * phi);
  };
  auto sigma2 = [&](double u) {
    const double rho = recovery_mean_ode(s.lambda_inf, s.mu_inf, u);
    return s.lambda_inf * (1 - rho) + s.mu_inf * rho;
  };
  for (double t : {0.5, 2.0}) {
    EXPECT_NEAR(limit_variance_curve({RegimeKind::recovery_joint, 1.0}, s, t),
                ou_variance_oracle([&](double u) { return sigma1(u) + sigma2(u); }, a, t), 1e-12);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::recovery_joint, 0.5}, s, t),
                ou_variance_oracle(sigma1, a, t), 1e-12);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::recovery_joint, 2.0}, s, t),
                ou_variance_oracle(sigma2, a, t), 1e-12);
  }
}

TEST(StructuralIdentities, ConstantIntensityCurvesCoincide) {
  const ChainStatics s = compute_statics(reference_generator(), Vector{0.8, 0.8, 0.8});
  EXPECT_LE(std::abs(s.V), 1e-10);
  const ChainStatics flat = compute_statics(validate_generator(DenseMatrix{{0.0}}), Vector{0.8});
  for (double t : grid100(5.0)) {
    const double base = limit_variance_curve({RegimeKind::non_modulated}, flat, t);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::joint_beta, 1.0}, s, t), base, 1e-10);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::joint_beta, 0.5}, s, t), 0.0, 1e-10);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::iterated_alpha_then_n}, s, t), base, 1e-10);
  }
}

TEST(StructuralIdentities, BracketsAddUpAtBetaOne) {
  const ChainStatics s = reference_statics();
  const LimitLaw law = make_limit_law({RegimeKind::joint_beta, 1.0}, s);
  const MartingaleComponent* b = nullptr;
  const MartingaleComponent* g = nullptr;
  const MartingaleComponent* gh = nullptr;
  for (const auto& c : law.components) {
    if (c.label == "B") b = &c;
    if (c.label == "G") g = &c;
    if (c.label == "G^H") gh = &c;
  }
  ASSERT_TRUE(b && g && gh);
  const double lam = s.lambda_inf;
  for (double t : grid100(3.0)) {
    const double total_bracket = integrate(law.diffusion_squared, 0.0, t, 1e-13);
    EXPECT_NEAR(b->bracket(t) + g->bracket(t), total_bracket, 1e-10);
    EXPECT_NEAR(b->variance(t) + g->variance(t), law.variance(t), 1e-10);
    EXPECT_NEAR(b->bracket(t), -std::expm1(-lam * t), 1e-10);
    EXPECT_NEAR(gh->bracket(t), s.V * t, 1e-10);
    EXPECT_NEAR(gh->variance(t), g->variance(t), 1e-10);
  }
  // Away from β = 1 only one source survives.
  EXPECT_EQ(make_limit_law({RegimeKind::joint_beta, 2.0}, s).components.size(), 1u);
  EXPECT_EQ(make_limit_law({RegimeKind::joint_beta, 0.5}, s).components.size(), 2u);
}

TEST(StructuralIdentities, RecoveryReducesWithoutRecovery) {
  const ChainStatics s = reference_statics();  // μ = 0
  const ChainStatics flat = compute_statics(validate_generator(DenseMatrix{{0.0}}), Vector{1.3});
  for (double t : grid100(3.0)) {
    for (double beta : {0.5, 1.0, 2.0}) {
      EXPECT_NEAR(limit_variance_curve({RegimeKind::recovery_joint, beta}, s, t),
                  limit_variance_curve({RegimeKind::joint_beta, beta}, s, t), 1e-10);
    }
    EXPECT_NEAR(centering_curve({RegimeKind::recovery_joint, 1.0}, s, t),
                centering_curve({RegimeKind::joint_beta, 1.0}, s, t), 1e-10);
    EXPECT_NEAR(limit_variance_curve({RegimeKind::recovery_non_modulated}, flat, t),
                limit_variance_curve({RegimeKind::non_modulated}, flat, t), 1e-10);
  }
}

TEST(LimitProcess, TransitionsReproduceVarianceAndCovariance) {
  const ChainStatics s = reference_statics();
  const LimitLaw law = make_limit_law({RegimeKind::joint_beta, 1.0}, s);
  const std::vector<double> grid{0.5, 1.0, 2.0};
  RngStream rng(1, 0);
  const int m = 50000;
  std::vector<double> sq(3, 0.0);
  double cross = 0.0;
  for (int k = 0; k < m; ++k) {
    const auto x = sample_limit_process(law, grid, rng);
    for (int i = 0; i < 3; ++i) sq[i] += x[i] * x[i] / m;
    cross += x[1] * x[2] / m;
  }
  for (int i = 0; i < 3; ++i) {
    const double v = law.variance(grid[i]);
    EXPECT_NEAR(sq[i], v, 4.0 * v * std::sqrt(2.0 / m));
  }
  const double cov = std::exp(-law.drift * 1.0) * law.variance(1.0);
  EXPECT_NEAR(cross, cov, 0.01);
}

TEST(LimitProcess, ConditionalVarianceFollowsPath) {
  ChainPath p;
  p.horizon = 2.0;
  p.initial_state = 0;
  p.jump_times = {1.0};
  p.states = {1};
  const Vector lambda{0.5, 2.0};
  const double big = 0.5 + 2.0;
  EXPECT_NEAR(conditional_limit_variance(p, lambda, 2.0), std::exp(-big) - std::exp(-2 * big), 1e-15);
  RngStream rng(2, 0);
  const std::vector<double> grid{2.0};
  const int m = 40000;
  double sq = 0.0;
  for (int k = 0; k < m; ++k) {
    const double x = sample_conditional_limit_process(p, lambda, grid, rng)[0];
    sq += x * x / m;
  }
  const double v = conditional_limit_variance(p, lambda, 2.0);
  EXPECT_NEAR(sq, v, 4.0 * v * std::sqrt(2.0 / m));
}

TEST(CenterAndScale, MatchesDefinition) {
  CountingPath path;
  path.n = 100;
  path.event_times = {0.2, 0.4};
  path.event_marks = {1, 1};
  path.levels = {1, 2};
  path.chain.horizon = 1.0;
  const ChainStatics s = compute_statics(validate_generator(DenseMatrix{{0.0}}), Vector{0.1});
  const std::vector<double> grid{0.5, 1.0};
  const auto x = center_and_scale(path, {RegimeKind::non_modulated}, s, grid, Centering::deterministic);
  EXPECT_NEAR(x[0], (2.0 - 100.0 * -std::expm1(-0.05)) / 10.0, 1e-14);
  EXPECT_NEAR(x[1], (2.0 - 100.0 * -std::expm1(-0.1)) / 10.0, 1e-14);
  const auto y = center_and_scale(path, {RegimeKind::non_modulated}, s, grid, Centering::pathwise);
  EXPECT_NEAR(y[1], x[1], 1e-14);
}

TEST(Decomposition, ResidualVanishesOnSimulatedPaths) {
  const Generator g = reference_generator();
  ProcessSpec spec;
  spec.n = 500;
  spec.lambda = reference_lambda();
  spec.chain_speed = 500;
  spec.horizon = 3.0;
  const ChainStatics s = reference_statics();
  const CountingSimulator sim(spec, g);
  const auto grid = grid100(3.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(77, seed);
    const Decomposition d = decompose(sim.sample(InitialState::stationary(), rng), s, grid);
    EXPECT_LE(d.max_residual(), 1e-12);
  }
}

}  // namespace
}  // namespace mmbin
