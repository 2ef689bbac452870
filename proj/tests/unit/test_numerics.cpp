#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mmbin/dense_matrix.hpp"
#include "mmbin/expm.hpp"
#include "mmbin/linalg.hpp"
#include "mmbin/quadrature.hpp"
#include "mmbin/special.hpp"
#include "test_support.hpp"

namespace mmbin {
namespace {

using testing::max_abs_diff;
using testing::random_q;
using testing::reference_q;
using testing::taylor_expm;

TEST(DenseMatrix, ArithmeticAndShape) {
  const DenseMatrix a{{1, 2}, {3, 4}};
  const DenseMatrix b{{0, 1}, {1, 0}};
  EXPECT_EQ(a * b, (DenseMatrix{{2, 1}, {4, 3}}));
  EXPECT_EQ(a + b, (DenseMatrix{{1, 3}, {4, 4}}));
  EXPECT_EQ(a.transposed(), (DenseMatrix{{1, 3}, {2, 4}}));
  EXPECT_DOUBLE_EQ(a.inf_norm(), 7.0);
  EXPECT_DOUBLE_EQ(a.max_abs(), 4.0);
  const Vector x{1.0, -1.0};
  EXPECT_EQ(a * x, (Vector{-1.0, -1.0}));
  EXPECT_DOUBLE_EQ(dot(x, x), 2.0);
}

TEST(DenseMatrix, RejectsNonFiniteAndRaggedInput) {
  EXPECT_THROW((DenseMatrix{{1.0, NAN}}), std::invalid_argument);
  EXPECT_THROW((DenseMatrix{{1.0, 2.0}, {3.0}}), std::invalid_argument);
  EXPECT_THROW(DenseMatrix(2, 2, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Linalg, SolvesSmallSystem) {
  const DenseMatrix a{{4, -2, 1}, {-2, 4, -2}, {1, -2, 4}};
  const Vector b{11, -16, 17};
  const Vector x = solve_linear(a, b);
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], -2.0, 1e-14);
  EXPECT_NEAR(x[2], 3.0, 1e-14);
}

TEST(Linalg, PivotsAroundZeroLeadingEntry) {
  const DenseMatrix a{{0, 1}, {1, 0}};
  const Vector x = solve_linear(a, Vector{2, 3});
  EXPECT_DOUBLE_EQ(x[0], 3.0);
  EXPECT_DOUBLE_EQ(x[1], 2.0);
}

TEST(Linalg, InverseTimesMatrixIsIdentity) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 20; ++trial) {
    DenseMatrix a(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) a(i, j) = z(gen) + (i == j ? 6.0 : 0.0);
    const DenseMatrix inv = LuDecomposition(a).inverse();
    EXPECT_LT(max_abs_diff(a * inv, DenseMatrix::identity(6)), 1e-13);
  }
}

TEST(Linalg, SingularMatrixNamesStep) {
  const DenseMatrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  try {
    solve_linear(a, Vector{1, 2, 3});
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.step(), 2u);
  }
  EXPECT_THROW(solve_linear(DenseMatrix{{0, 0}, {0, 0}}, Vector{1, 1}), SingularMatrixError);
}

TEST(Expm, ZeroTimeIsIdentity) {
  EXPECT_LT(max_abs_diff(matrix_exponential(reference_q(), 0.0), DenseMatrix::identity(3)), 1e-15);
}

TEST(Expm, ReferenceGeneratorMatchesTaylorOracle) {
  for (double t : {0.01, 0.3, 1.0, 3.0}) {
    EXPECT_LT(max_abs_diff(matrix_exponential(reference_q(), t), taylor_expm(reference_q(), t)),
              1e-11)
        << "t=" << t;
  }
}

TEST(Expm, SubGeneratorMatchesTaylorOracle) {
  const DenseMatrix lambda = DenseMatrix::diagonal(Vector{0.1, 1.0, 3.0});
  const DenseMatrix a = 100.0 * reference_q() - lambda;
  ASSERT_TRUE(is_column_subgenerator(a));
  EXPECT_LT(max_abs_diff(matrix_exponential(a, 0.05), taylor_expm(a, 0.05)), 1e-11);
}

TEST(Expm, GeneralMatrixUsesTaylorPath) {
  const DenseMatrix rotation{{0, -1}, {1, 0}};
  ASSERT_FALSE(is_column_subgenerator(rotation));
  const double t = std::numbers::pi / 3.0;
  const DenseMatrix e = matrix_exponential(rotation, t);
  EXPECT_NEAR(e(0, 0), std::cos(t), 1e-13);
  EXPECT_NEAR(e(1, 0), std::sin(t), 1e-13);
  EXPECT_NEAR(e(0, 1), -std::sin(t), 1e-13);
}

TEST(Expm, StiffLongHorizonStaysStochastic) {
  const DenseMatrix a = 1e4 * reference_q();
  const Vector v = matrix_exponential_action(a, 3.0, Vector{1.0, 0.0, 0.0});
  EXPECT_NEAR(v[0] + v[1] + v[2], 1.0, 1e-10);
  EXPECT_NEAR(v[0], 7.5 / 29.0, 1e-10);
  EXPECT_NEAR(v[1], 17.5 / 29.0, 1e-10);
}

TEST(Expm, PropertyRandomGeneratorsKeepMassAndMatchOracle) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const DenseMatrix q = random_q(d, gen);
    const DenseMatrix e = matrix_exponential(q, 0.7);
    for (std::size_t j = 0; j < d; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        EXPECT_GE(e(i, j), 0.0);
        col += e(i, j);
      }
      EXPECT_NEAR(col, 1.0, 1e-12);
    }
    EXPECT_LT(max_abs_diff(e, taylor_expm(q, 0.7)), 1e-10);
  }
}

TEST(Expm, OverflowIsReported) {
  const DenseMatrix a{{800.0}};
  EXPECT_THROW(matrix_exponential_action(a, 1.0, Vector{1.0}), std::overflow_error);
}

TEST(Quadrature, PolynomialAndOscillatory) {
  EXPECT_NEAR(integrate([](double x) { return x * x * x; }, 0.0, 2.0), 4.0, 1e-13);
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi), 2.0, 1e-13);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 0.0, 40.0), 1.0 - std::exp(-40.0),
              1e-13);
  EXPECT_NEAR(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0), 2.0 / 3.0, 1e-10);
  EXPECT_DOUBLE_EQ(integrate([](double) { return 1.0; }, 1.0, 1.0), 0.0);
}

TEST(Special, NormalCdf) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-15);
  EXPECT_NEAR(normal_cdf(-3.0), 1.3498980316300946e-3, 1e-17);
  EXPECT_NEAR(normal_cdf(-10.0), 7.619853024160527e-24, 1e-36);
}

TEST(Special, KolmogorovTail) {
  // Q(x) = 2 Σ (−1)^{k−1} exp(−2k²x²) at x = √n·D.
  auto series = [](double x) {
    double s = 0.0;
    for (int k = 1; k < 200; ++k) s += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
    return s;
  };
  for (double x : {0.5, 0.8, 1.0, 1.36, 1.63, 2.5}) {
    EXPECT_NEAR(kolmogorov_pvalue(x / 10.0, 100), series(x), 1e-10) << x;
  }
  EXPECT_NEAR(kolmogorov_pvalue(1.3581 / 10.0, 100), 0.05, 1e-4);
  EXPECT_NEAR(kolmogorov_pvalue(0.1 / 10.0, 100), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(kolmogorov_pvalue(0.0, 100), 1.0);
  EXPECT_GE(kolmogorov_pvalue(2.0, 100), 0.0);
}

TEST(Special, ChiSquareTail) {
  EXPECT_NEAR(chi_square_sf(3.841458820694124, 1.0), 0.05, 1e-12);
  EXPECT_NEAR(chi_square_sf(2.0, 2.0), std::exp(-1.0), 1e-14);
  EXPECT_NEAR(chi_square_sf(18.307038053275146, 10.0), 0.05, 1e-12);
  EXPECT_DOUBLE_EQ(chi_square_sf(0.0, 3.0), 1.0);
}

}  // namespace
}  // namespace mmbin
