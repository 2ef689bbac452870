#include "mmbin/chain_statics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mmbin/linalg.hpp"

namespace mmbin {

namespace {

void require_dimension(std::span<const double> v, std::size_t d, const char* what) {
  if (v.size() != d) {
    throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(d) +
                                ", got " + std::to_string(v.size()));
  }
}

}  // namespace

Vector stationary_distribution(const Generator& g) {
  const std::size_t d = g.dimension();
  if (d == 1) return {1.0};
  DenseMatrix a = g.matrix();
  for (std::size_t j = 0; j < d; ++j) a(d - 1, j) = 1.0;
  Vector rhs(d, 0.0);
  rhs[d - 1] = 1.0;
  Vector pi;
  try {
    pi = solve_linear(a, rhs);
  } catch (const SingularMatrixError& e) {
    throw std::logic_error(std::string("stationary_distribution: ") + e.what() +
                           " (generator passed validation, so this is an internal error)");
  }
  double total = 0.0;
  for (double& p : pi) {
    p = std::max(p, 0.0);
    total += p;
  }
  for (double& p : pi) p /= total;
  return pi;
}

FundamentalMatrices deviation_matrix(const Generator& g) {
  const Vector pi = stationary_distribution(g);
  const Vector ones(g.dimension(), 1.0);
  const DenseMatrix Pi = DenseMatrix::outer(pi, ones);
  DenseMatrix F;
  try {
    F = LuDecomposition(Pi - g.matrix()).inverse();
  } catch (const SingularMatrixError& e) {
    throw std::logic_error(std::string("deviation_matrix: ") + e.what());
  }
  DenseMatrix D = F - Pi;
  return {std::move(F), std::move(D)};
}

DenseMatrix symmetrized_deviation(std::span<const double> pi, const DenseMatrix& D) {
  const std::size_t d = pi.size();
  DenseMatrix s(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s(i, j) = pi[i] * D(j, i) + D(i, j) * pi[j];
  return s;
}

double ergodic_covariance(std::span<const double> a, std::span<const double> b,
                          const ChainStatics& statics) {
  const std::size_t d = statics.pi.size();
  require_dimension(a, d, "ergodic_covariance");
  require_dimension(b, d, "ergodic_covariance");
  // aᵀ D diag{π} b + aᵀ diag{π} Dᵀ b
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      s += a[i] * (statics.D(i, j) * statics.pi[j] + statics.pi[i] * statics.D(j, i)) * b[j];
  return s;
}

double ergodic_variance(std::span<const double> lambda, const ChainStatics& statics) {
  require_dimension(lambda, statics.pi.size(), "ergodic_variance");
  const double v = ergodic_covariance(lambda, lambda, statics);
  if (v >= 0.0) return v;
  if (v > -1e-12) return 0.0;
  throw std::domain_error("ergodic_variance: negative value " + std::to_string(v));
}

ChainStatics compute_statics(const Generator& g, std::span<const double> lambda,
                             std::span<const double> mu) {
  const std::size_t d = g.dimension();
  require_dimension(lambda, d, "compute_statics (lambda)");
  if (!mu.empty()) require_dimension(mu, d, "compute_statics (mu)");

  ChainStatics s;
  s.pi = stationary_distribution(g);
  s.Pi = DenseMatrix::outer(s.pi, Vector(d, 1.0));
  auto [F, D] = deviation_matrix(g);
  s.F = std::move(F);
  s.D = std::move(D);
  s.lambda.assign(lambda.begin(), lambda.end());
  s.mu = mu.empty() ? Vector(d, 0.0) : Vector(mu.begin(), mu.end());
  s.lambda_inf = dot(s.lambda, s.pi);
  s.mu_inf = dot(s.mu, s.pi);
  s.V = ergodic_variance(s.lambda, s);
  return s;
}

double IdentityResiduals::max() const {
  return std::max({balance, normalization, qf, fq, f_ones, ones_d, d_pi});
}

IdentityResiduals identity_residuals(const Generator& g, const ChainStatics& s) {
  const std::size_t d = g.dimension();
  const DenseMatrix& Q = g.matrix();
  const DenseMatrix target = s.Pi - DenseMatrix::identity(d);
  const Vector ones(d, 1.0);

  IdentityResiduals r;
  r.balance = inf_norm(Q * std::span<const double>(s.pi));
  double total = 0.0;
  for (double p : s.pi) total += p;
  r.normalization = std::abs(total - 1.0);
  r.qf = (Q * s.F - target).max_abs();
  r.fq = (s.F * Q - target).max_abs();
  // Column convention: the row sums identity reads 𝟙ᵀF = 𝟙ᵀ.
  Vector f1 = s.F.transposed() * std::span<const double>(ones);
  for (double& x : f1) x -= 1.0;
  r.f_ones = inf_norm(f1);
  r.ones_d = inf_norm(s.D.transposed() * std::span<const double>(ones));
  r.d_pi = inf_norm(s.D * std::span<const double>(s.pi));
  return r;
}

}  // namespace mmbin
