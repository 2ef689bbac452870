#include "mmbin/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mmbin {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  if (result.ec != std::errc{}) throw std::runtime_error("format_double failed");
  return {buffer, result.ptr};
}

CsvWriter::CsvWriter(std::ostream& out, std::span<const std::string_view> header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) throw std::invalid_argument("CsvWriter: wrong column count");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

void CsvWriter::row(std::span<const std::string> cells) {
  if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: wrong column count");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

void write_path_csv(std::ostream& out, const CountingPath& path, std::span<const double> lambda) {
  constexpr std::string_view header[] = {"time", "N", "chain_state", "intensity"};
  CsvWriter csv(out, header);
  const ChainPath& chain = path.chain;
  std::size_t state = chain.initial_state;
  std::uint64_t count = 0;
  auto emit = [&](double t) {
    const double values[] = {t, static_cast<double>(count), static_cast<double>(state + 1),
                             lambda[state]};
    csv.row(values);
  };
  emit(0.0);
  // Merge event and jump times in order.
  std::size_t e = 0, j = 0;
  while (e < path.event_times.size() || j < chain.jump_times.size()) {
    const bool take_jump =
        j < chain.jump_times.size() &&
        (e == path.event_times.size() || chain.jump_times[j] <= path.event_times[e]);
    if (take_jump) {
      state = chain.states[j];
      emit(chain.jump_times[j++]);
    } else {
      count = path.levels[e];
      emit(path.event_times[e++]);
    }
  }
  emit(chain.horizon);
}

void write_curves_csv(std::ostream& out, const LimitLaw& law, std::span<const double> grid,
                      const std::function<double(double)>& mean) {
  constexpr std::string_view header[] = {"time", "mean", "variance", "stddev"};
  CsvWriter csv(out, header);
  for (double t : grid) {
    const double v = law.variance(t);
    const double values[] = {t, mean(t), v, std::sqrt(v)};
    csv.row(values);
  }
}

void write_summary_csv(std::ostream& out, const McSummary& summary) {
  constexpr std::string_view header[] = {"time",       "emp_mean", "emp_var", "var_se",
                                         "theory_var", "rel_err",  "ks_stat", "ks_p"};
  CsvWriter csv(out, header);
  for (const McRow& r : summary.rows) {
    const double values[] = {r.time,       r.emp_mean, r.emp_var, r.var_se,
                             r.theory_var, r.rel_err,  r.ks_stat, r.ks_p};
    csv.row(values);
  }
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

void write_vector_csv(std::ostream& out, std::string_view name, std::span<const double> v) {
  const std::string_view header[] = {name};
  CsvWriter csv(out, header);
  for (double x : v) {
    const double values[] = {x};
    csv.row(values);
  }
}

}  // namespace mmbin
