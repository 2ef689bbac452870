#pragma once

#include <span>

#include "mmbin/dense_matrix.hpp"
#include "mmbin/generator.hpp"

namespace mmbin {

/// Stationary law and deviation structure of the background chain, together
/// with the averaged rates of a given intensity/recovery vector pair.
struct ChainStatics {
  Vector pi;            // Qπ = 0, 𝟙ᵀπ = 1
  DenseMatrix Pi;       // π𝟙ᵀ
  DenseMatrix F;        // (Π − Q)⁻¹
  DenseMatrix D;        // F − Π
  Vector lambda;        // per-state default intensity
  Vector mu;            // per-state recovery intensity (zeros if absent)
  double lambda_inf = 0.0;  // λᵀπ
  double mu_inf = 0.0;      // μᵀπ
  double V = 0.0;           // λᵀ(diag{π}Dᵀ + D diag{π})λ
};

struct FundamentalMatrices {
  DenseMatrix F;
  DenseMatrix D;
};

/// Solves Qπ = 0 with one balance row replaced by 𝟙ᵀπ = 1.
Vector stationary_distribution(const Generator& g);

/// F = (Π − Q)⁻¹ and D = F − Π.
FundamentalMatrices deviation_matrix(const Generator& g);

/// diag{π}Dᵀ + D diag{π}; nonnegative definite for an ergodic chain.
DenseMatrix symmetrized_deviation(std::span<const double> pi, const DenseMatrix& D);

/// aᵀ(diag{π}Dᵀ + D diag{π})b.
double ergodic_covariance(std::span<const double> a, std::span<const double> b,
                          const ChainStatics& statics);

/// V = λᵀ(diag{π}Dᵀ + D diag{π})λ. Round-off negatives down to -1e-12 are
/// clipped to 0; anything more negative throws std::domain_error.
double ergodic_variance(std::span<const double> lambda, const ChainStatics& statics);

/// Everything above in one pass. `mu` may be empty (no recovery).
ChainStatics compute_statics(const Generator& g, std::span<const double> lambda,
                             std::span<const double> mu = {});

/// Residuals of the identities QF = FQ = Π − I, 𝟙ᵀF = 𝟙ᵀ, 𝟙ᵀD = 0, Dπ = 0, Qπ = 0.
struct IdentityResiduals {
  double balance = 0.0;        // ‖Qπ‖∞
  double normalization = 0.0;  // |𝟙ᵀπ − 1|
  double qf = 0.0;             // max|QF − (Π − I)|
  double fq = 0.0;             // max|FQ − (Π − I)|
  double f_ones = 0.0;         // ‖𝟙ᵀF − 𝟙ᵀ‖∞
  double ones_d = 0.0;         // ‖𝟙ᵀD‖∞
  double d_pi = 0.0;           // ‖Dπ‖∞
  double max() const;
};

IdentityResiduals identity_residuals(const Generator& g, const ChainStatics& statics);

}  // namespace mmbin
