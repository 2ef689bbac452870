#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace mmbin {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov–Smirnov test against a fully specified CDF.
KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

/// KS against N(mean, variance) with known parameters.
KsResult ks_test_normal(std::span<const double> samples, double mean, double variance);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Two-sample chi-square test on integer-valued samples. Adjacent values are
/// pooled until every bin expects at least `min_expected` observations from
/// each sample under the null.
ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b,
                                      double min_expected = 20.0);

/// Goodness of fit of integer samples to Binomial(n, p), with the same pooling.
ChiSquareResult chi_square_binomial(std::span<const std::uint64_t> samples, std::uint64_t n,
                                    double p, double min_expected = 20.0);

}  // namespace mmbin
