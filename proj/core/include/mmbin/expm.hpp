#pragma once

#include "mmbin/dense_matrix.hpp"

namespace mmbin {

/// True if off-diagonals are >= 0 and every column sums to <= 0 (within tol),
/// i.e. A is a column-convention generator or sub-generator.
bool is_column_subgenerator(const DenseMatrix& a, double tol = 1e-12);

/// exp(A t) v.
///
/// Column (sub-)generators go through uniformization with rate max|a_ii| + 1,
/// Poisson weights truncated once the total remaining tail is below 1e-12. Long
/// horizons are split so that the per-piece Poisson mean stays moderate.
/// Any other matrix uses a scaled Taylor series. Throws std::overflow_error if
/// the result is not finite.
Vector matrix_exponential_action(const DenseMatrix& a, double t, std::span<const double> v);

/// exp(A t), column by column through matrix_exponential_action.
DenseMatrix matrix_exponential(const DenseMatrix& a, double t);

}  // namespace mmbin
