#include "presets.hpp"

#include <cmath>

namespace mmbin::cli {

namespace {

RunSettings reference_run(std::string label, std::uint64_t n, double speed, double horizon) {
  RunSettings s;
  s.label = std::move(label);
  s.q = reference_generator_matrix();
  s.process.n = n;
  s.process.lambda = reference_intensities();
  s.process.chain_speed = speed;
  s.process.horizon = horizon;
  return s;
}

RunSettings figure_path(double alpha) {
  RunSettings s = reference_run("alpha_" + std::to_string(static_cast<long>(alpha)), 1000, alpha, 3.0);
  s.initial = InitialState::fixed(0);
  s.regime = {RegimeKind::iterated_alpha_then_n};
  s.grid = {3.0};
  s.seed = 20230601;
  return s;
}

RunSettings figure_clt(std::uint64_t n) {
  RunSettings s = reference_run("n_" + std::to_string(n), n, static_cast<double>(n), 10.0);
  s.initial = InitialState::fixed(0);
  s.regime = {RegimeKind::joint_beta, 1.0};
  s.replicates = 500;
  s.grid = {1.0, 2.0, 3.0, 5.0};
  s.plot_paths = 100;
  s.plot_points = 201;
  s.seed = 20230603;
  return s;
}

RunSettings joint(std::string label, std::uint64_t n, double beta, std::size_t m,
                  std::vector<double> grid) {
  RunSettings s = reference_run(std::move(label), n, std::pow(static_cast<double>(n), beta),
                                grid.back());
  s.regime = {RegimeKind::joint_beta, beta};
  s.replicates = m;
  s.grid = std::move(grid);
  return s;
}

std::vector<Preset> build() {
  std::vector<Preset> out;
  out.push_back({"fig1", "simulate", "sample paths, n=1000, alpha in {1, 10}, T=3",
                 {figure_path(1.0), figure_path(10.0)}});
  out.push_back({"fig2", "simulate", "sample paths, n=1000, alpha in {100, 10000}, T=3",
                 {figure_path(100.0), figure_path(10000.0)}});
  out.push_back({"fig3", "clt", "centred paths, n=alpha in {10, 100}, T=10",
                 {figure_clt(10), figure_clt(100)}});
  out.push_back({"fig4", "clt", "centred paths, n=alpha in {1000, 10000}, T=10",
                 {figure_clt(1000), figure_clt(10000)}});

  {
    RunSettings s = joint("", 2000, 1.0, 2000, {0.5, 1.0, 2.0, 3.0});
    s.seed = 5;
    out.push_back({"accept-joint", "clt", "joint limit, n=alpha=2000", {s}});
  }
  {
    std::vector<RunSettings> runs;
    for (auto kind : {RegimeKind::iterated_n_then_alpha, RegimeKind::iterated_alpha_then_n}) {
      RunSettings s = reference_run(std::string(to_string(kind)), 1000, 1e4, 3.0);
      s.regime = {kind};
      s.centering = Centering::pathwise;
      s.replicates = 2000;
      s.grid = {1.0, 3.0};
      s.seed = kind == RegimeKind::iterated_n_then_alpha ? 61 : 62;
      runs.push_back(s);
    }
    out.push_back({"accept-iterated", "clt", "iterated limits, alpha=1e4, n=1000, pathwise", runs});
  }
  {
    RunSettings s = joint("", 10000, 0.5, 1000, {1.0, 2.0});
    s.tolerance.rel_tol = 0.15;
    s.seed = 71;
    out.push_back({"accept-beta05", "clt", "chain speed n^0.5, n=1e4", {s}});
  }
  {
    RunSettings s = joint("", 10000, 2.0, 1000, {1.0, 2.0});
    s.tolerance.rel_tol = 0.15;
    s.seed = 72;
    out.push_back({"accept-beta2", "clt", "chain speed n^2, n=1e4", {s}});
  }
  {
    RunSettings s = reference_run("", 10000, 1e4, 3.0);
    s.regime = {RegimeKind::gamma, 1.0, 0.5};
    s.process.gamma = 0.5;
    s.centering = Centering::pathwise;
    s.replicates = 2000;
    s.grid = {1.0, 3.0};
    s.tolerance.rel_tol = 0.10;
    s.seed = 81;
    out.push_back({"accept-gamma", "clt", "intensity n^-0.5 lambda, chain speed n", {s}});
  }
  {
    RunSettings s;
    s.process.n = 5000;
    s.process.lambda = {1.0};
    s.process.mu = {0.5};
    s.process.horizon = 3.0;
    s.regime = {RegimeKind::recovery_non_modulated};
    s.replicates = 2000;
    s.grid = {1.0, 3.0};
    s.tolerance.rel_tol = 0.10;
    s.seed = 91;
    out.push_back({"accept-recovery", "clt", "birth-death, lambda=1, mu=0.5, n=5000", {s}});
  }
  return out;
}

}  // namespace

DenseMatrix reference_generator_matrix() { return {{-5, 1, 5}, {2, -2, 5}, {3, 1, -10}}; }
Vector reference_intensities() { return {0.1, 1.0, 3.0}; }

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const Preset& p : presets())
    if (p.name == name) return p;
  std::string names;
  for (const Preset& p : presets()) names += (names.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + std::string(name) + "' (available: " + names + ")");
}

}  // namespace mmbin::cli
