#include "mmbin/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace mmbin {

double normal_cdf(double x) {
  if (std::isnan(x)) return x;
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double kolmogorov_pvalue(double stat, std::size_t n_samples) {
  if (!(stat >= 0.0)) throw std::invalid_argument("kolmogorov_pvalue: stat must be >= 0");
  const double x = std::sqrt(static_cast<double>(n_samples)) * stat;
  if (x == 0.0) return 1.0;
  constexpr double kTail = 1e-12;
  constexpr int kMinTerms = 25;
  constexpr int kMaxTerms = 10000;

  if (x < 1.0) {
    // Jacobi theta form of the CDF; converges fast for small x.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * pi2 / (8.0 * x * x));
      cdf += term;
      if (k >= kMinTerms && term < kTail) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }

  double p = 0.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    p += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (k >= kMinTerms && term < kTail) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

double chi_square_sf(double x, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi_square_sf: dof must be > 0");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

}  // namespace mmbin
