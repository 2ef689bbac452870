#pragma once

#include <cstddef>

namespace mmbin {

/// Standard normal CDF, Φ(x) = erfc(-x/√2)/2.
double normal_cdf(double x);

/// Upper tail of the asymptotic Kolmogorov distribution at √n·stat,
/// i.e. the p-value of a one-sample KS statistic `stat` on n samples.
double kolmogorov_pvalue(double stat, std::size_t n_samples);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_sf(double x, double dof);

}  // namespace mmbin
