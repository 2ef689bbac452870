#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmbin/counting.hpp"
#include "mmbin/dense_matrix.hpp"
#include "mmbin/experiment.hpp"
#include "mmbin/limits.hpp"

namespace mmbin {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Comma-separated writer: header first, LF line endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::span<const std::string_view> header);

  void row(std::span<const double> values);
  void row(std::span<const std::string> cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// One row per event or chain jump plus the endpoints:
/// time, N, chain_state (1-based), intensity λᵀZ_t.
void write_path_csv(std::ostream& out, const CountingPath& path, std::span<const double> lambda);

/// time, mean, variance, stddev of the limit law.
void write_curves_csv(std::ostream& out, const LimitLaw& law, std::span<const double> grid,
                      const std::function<double(double)>& mean);

/// time, emp_mean, emp_var, var_se, theory_var, rel_err, ks_stat, ks_p.
void write_summary_csv(std::ostream& out, const McSummary& summary);

/// Matrix without header, one row per line.
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);

/// Single column with a header.
void write_vector_csv(std::ostream& out, std::string_view name, std::span<const double> v);

}  // namespace mmbin
