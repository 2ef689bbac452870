#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "mmbin/dense_matrix.hpp"

namespace mmbin {

/// Orientation of a rate matrix on input. Column convention: entry (j, i) is
/// the i→j rate and columns sum to zero. Row convention is its transpose.
enum class Convention { column, row };

class GeneratorError : public std::invalid_argument {
 public:
  enum class Kind { not_square, empty, negative_off_diagonal, column_sum, reducible };

  GeneratorError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Validated generator of an irreducible finite Markov chain, stored in
/// column convention.
class Generator {
 public:
  std::size_t dimension() const { return q_.rows(); }
  const DenseMatrix& matrix() const { return q_; }

  /// Rate of the i→j transition (i != j).
  double rate(std::size_t from, std::size_t to) const { return q_(to, from); }
  double exit_rate(std::size_t i) const { return -q_(i, i); }
  double max_exit_rate() const;

 private:
  explicit Generator(DenseMatrix q) : q_(std::move(q)) {}
  friend Generator validate_generator(const DenseMatrix&, Convention);

  DenseMatrix q_;
};

/// Checks off-diagonal signs, zero column sums (to 1e-12 relative to the
/// largest entry) and strong connectivity; row input is transposed.
Generator validate_generator(const DenseMatrix& q, Convention convention = Convention::column);

}  // namespace mmbin
