#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mmbin/dense_matrix.hpp"

namespace mmbin {

/// Raised when elimination meets a pivot below 1e-13 times the largest row norm.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t step, double pivot);
  std::size_t step() const { return step_; }
  double pivot() const { return pivot_; }

 private:
  std::size_t step_;
  double pivot_;
};

/// LU factorisation with partial pivoting, PA = LU.
class LuDecomposition {
 public:
  explicit LuDecomposition(const DenseMatrix& a);

  std::size_t dimension() const { return lu_.rows(); }
  Vector solve(std::span<const double> b) const;
  DenseMatrix inverse() const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

/// Solves Ax = b. Throws SingularMatrixError naming the elimination step.
Vector solve_linear(const DenseMatrix& a, std::span<const double> b);

}  // namespace mmbin
