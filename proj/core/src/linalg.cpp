#include "mmbin/linalg.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace mmbin {

namespace {
constexpr double kPivotThreshold = 1e-13;

std::string singular_message(std::size_t step, double pivot) {
  return "singular matrix: pivot " + std::to_string(pivot) + " at elimination step " +
         std::to_string(step);
}
}  // namespace

SingularMatrixError::SingularMatrixError(std::size_t step, double pivot)
    : std::runtime_error(singular_message(step, pivot)), step_(step), pivot_(pivot) {}

LuDecomposition::LuDecomposition(const DenseMatrix& a) : lu_(a), perm_(a.rows()) {
  if (!a.is_square()) throw std::invalid_argument("LuDecomposition: matrix is not square");
  const std::size_t n = a.rows();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const double scale = a.inf_norm();
  const double threshold = kPivotThreshold * (scale > 0.0 ? scale : 1.0);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    if (best < threshold || scale == 0.0) throw SingularMatrixError(k, best);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
    }
    const double pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / pivot;
      lu_(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Vector LuDecomposition::solve(std::span<const double> b) const {
  const std::size_t n = dimension();
  if (b.size() != n) throw std::invalid_argument("LuDecomposition::solve: dimension mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

DenseMatrix LuDecomposition::inverse() const {
  const std::size_t n = dimension();
  DenseMatrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector col = solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return inv;
}

Vector solve_linear(const DenseMatrix& a, std::span<const double> b) {
  if (!a.is_square()) throw std::invalid_argument("solve_linear: matrix is not square");
  if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: dimension mismatch");
  return LuDecomposition(a).solve(b);
}

}  // namespace mmbin
