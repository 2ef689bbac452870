#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "mmbin/csv.hpp"
#include "test_support.hpp"

namespace mmbin {
namespace {

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  EXPECT_EQ(format_double(NAN), "nan");
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(gen) * std::pow(10.0, k % 40 - 20);
    const std::string s = format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, x);
  }
}

TEST(Csv, PathRowsMergeJumpsAndEvents) {
  CountingPath p;
  p.n = 10;
  p.event_times = {0.3, 0.7};
  p.event_marks = {1, 1};
  p.levels = {1, 2};
  p.chain.horizon = 1.0;
  p.chain.initial_state = 0;
  p.chain.jump_times = {0.5};
  p.chain.states = {1};
  std::ostringstream out;
  write_path_csv(out, p, Vector{0.5, 2.0});
  EXPECT_EQ(out.str(),
            "time,N,chain_state,intensity\n"
            "0,0,1,0.5\n"
            "0.3,1,1,0.5\n"
            "0.5,1,2,2\n"
            "0.7,2,2,2\n"
            "1,2,2,2\n");
}

TEST(Csv, SummaryHeaderAndRowOrder) {
  McSummary s;
  McRow a, b;
  a.time = 1.0;
  b.time = 2.0;
  b.ks_p = NAN;
  s.rows = {a, b};
  std::ostringstream out;
  write_summary_csv(out, s);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "time,emp_mean,emp_var,var_se,theory_var,rel_err,ks_stat,ks_p");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "1,");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "2,");
  EXPECT_NE(line.find("nan"), std::string::npos);
}

TEST(Csv, MatrixAndVector) {
  std::ostringstream m, v;
  write_matrix_csv(m, DenseMatrix{{1, 0.5}, {0, -2}});
  EXPECT_EQ(m.str(), "1,0.5\n0,-2\n");
  write_vector_csv(v, "pi", Vector{0.25, 0.75});
  EXPECT_EQ(v.str(), "pi\n0.25\n0.75\n");
}

}  // namespace
}  // namespace mmbin
