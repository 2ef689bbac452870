#include "mmbin/generator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

namespace mmbin {

namespace {

constexpr double kColumnSumTolerance = 1e-12;

// Vertices reachable from 0 following edges a→b where weight(a, b) > 0.
template <typename Weight>
std::vector<bool> reachable_from_zero(std::size_t d, Weight weight) {
  std::vector<bool> seen(d, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const std::size_t a = queue.front();
    queue.pop_front();
    for (std::size_t b = 0; b < d; ++b) {
      if (!seen[b] && a != b && weight(a, b) > 0.0) {
        seen[b] = true;
        queue.push_back(b);
      }
    }
  }
  return seen;
}

}  // namespace

double Generator::max_exit_rate() const {
  double best = 0.0;
  for (std::size_t i = 0; i < dimension(); ++i) best = std::max(best, exit_rate(i));
  return best;
}

Generator validate_generator(const DenseMatrix& input, Convention convention) {
  using Kind = GeneratorError::Kind;
  if (!input.is_square()) {
    throw GeneratorError(Kind::not_square, "generator must be square, got " +
                                               std::to_string(input.rows()) + "x" +
                                               std::to_string(input.cols()));
  }
  if (input.rows() == 0) throw GeneratorError(Kind::empty, "generator has dimension 0");

  DenseMatrix q = convention == Convention::row ? input.transposed() : input;
  const std::size_t d = q.rows();
  const double scale = std::max(1.0, q.max_abs());

  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j && q(j, i) < 0.0) {
        throw GeneratorError(Kind::negative_off_diagonal,
                             "negative transition rate " + std::to_string(q(j, i)) + " for " +
                                 std::to_string(i + 1) + "->" + std::to_string(j + 1));
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) sum += q(j, i);
    if (std::abs(sum) > kColumnSumTolerance * scale) {
      throw GeneratorError(Kind::column_sum, "column " + std::to_string(i + 1) + " sums to " +
                                                 std::to_string(sum) + " instead of 0");
    }
  }

  // Forward and backward reachability from state 0 decide strong connectivity.
  const auto forward = reachable_from_zero(d, [&](std::size_t a, std::size_t b) { return q(b, a); });
  const auto backward = reachable_from_zero(d, [&](std::size_t a, std::size_t b) { return q(a, b); });
  for (std::size_t i = 0; i < d; ++i) {
    if (!forward[i] || !backward[i]) {
      throw GeneratorError(Kind::reducible, "generator is reducible: state " +
                                                std::to_string(i + 1) +
                                                " does not communicate with state 1");
    }
  }
  return Generator(std::move(q));
}

}  // namespace mmbin
