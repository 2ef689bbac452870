#include "mmbin/expm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmbin {

namespace {

constexpr double kTailTolerance = 1e-12;
// e^{-400} is still a normal double, so the first Poisson weight never underflows.
constexpr double kMaxPoissonMeanPerPiece = 400.0;

Vector uniformized_piece(const DenseMatrix& a, double rate, double t, Vector v, double tail_budget) {
  const std::size_t n = a.rows();
  const double mean = rate * t;
  // P = I + A / rate, applied as y = v + (A v) / rate.
  auto step = [&](const Vector& x) {
    Vector y = a * x;
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + y[i] / rate;
    return y;
  };

  double weight = std::exp(-mean);
  Vector result(n, 0.0);
  Vector term = std::move(v);
  for (std::size_t k = 0;; ++k) {
    for (std::size_t i = 0; i < n; ++i) result[i] += weight * term[i];
    const double next_ratio = mean / static_cast<double>(k + 1);
    // Tail after index k is bounded by a geometric series once the ratio drops below 1.
    if (next_ratio < 1.0) {
      const double tail = weight * next_ratio / (1.0 - next_ratio);
      if (tail < tail_budget) break;
    }
    weight *= next_ratio;
    term = step(term);
  }
  return result;
}

Vector taylor_piece(const DenseMatrix& a, double t, const Vector& v) {
  const std::size_t n = a.rows();
  Vector result = v;
  Vector term = v;
  for (std::size_t k = 1; k < 400; ++k) {
    term = a * term;
    for (double& x : term) x *= t / static_cast<double>(k);
    for (std::size_t i = 0; i < n; ++i) result[i] += term[i];
    if (inf_norm(term) <= 1e-17 * std::max(1.0, inf_norm(result))) break;
  }
  return result;
}

void require_finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::overflow_error("matrix_exponential_action: overflow");
  }
}

}  // namespace

bool is_column_subgenerator(const DenseMatrix& a, double tol) {
  if (!a.is_square()) return false;
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j && a(i, j) < 0.0) return false;
      sum += a(i, j);
      scale = std::max(scale, std::abs(a(i, j)));
    }
    if (sum > tol * std::max(1.0, scale)) return false;
  }
  return true;
}

Vector matrix_exponential_action(const DenseMatrix& a, double t, std::span<const double> v) {
  if (!a.is_square()) throw std::invalid_argument("matrix_exponential_action: matrix not square");
  if (v.size() != a.rows()) throw std::invalid_argument("matrix_exponential_action: dimension mismatch");
  if (!(t >= 0.0)) throw std::invalid_argument("matrix_exponential_action: t must be >= 0");

  Vector x(v.begin(), v.end());
  if (t == 0.0 || a.max_abs() == 0.0) return x;

  if (is_column_subgenerator(a)) {
    double rate = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) rate = std::max(rate, std::abs(a(i, i)));
    rate += 1.0;
    const auto pieces =
        static_cast<std::size_t>(std::ceil(rate * t / kMaxPoissonMeanPerPiece));
    const std::size_t count = std::max<std::size_t>(pieces, 1);
    const double h = t / static_cast<double>(count);
    // Truncation errors add up across pieces; split the budget between them.
    const double budget = kTailTolerance / static_cast<double>(count);
    for (std::size_t p = 0; p < count; ++p) {
      x = uniformized_piece(a, rate, h, std::move(x), budget);
    }
  } else {
    const double norm = a.inf_norm() * t;
    const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(norm)));
    const double h = t / static_cast<double>(pieces);
    for (std::size_t p = 0; p < pieces; ++p) {
      x = taylor_piece(a, h, x);
      require_finite(x);
    }
  }
  require_finite(x);
  return x;
}

DenseMatrix matrix_exponential(const DenseMatrix& a, double t) {
  const std::size_t n = a.rows();
  DenseMatrix out(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector col = matrix_exponential_action(a, t, e);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = col[i];
    e[j] = 0.0;
  }
  return out;
}

}  // namespace mmbin
