#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "mmbin/chain_statics.hpp"
#include "mmbin/csv.hpp"
#include "mmbin/experiment.hpp"
#include "mmbin/linalg.hpp"
#include "svg.hpp"

namespace mmbin::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kPlotStreamOffset = 1ULL << 40;
constexpr std::size_t kMaxPlotPoints = 4000;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

std::vector<double> linspace(double a, double b, std::size_t points) {
  std::vector<double> out(points);
  for (std::size_t k = 0; k < points; ++k) {
    out[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  out.back() = b;
  return out;
}

std::vector<Series> band(const std::vector<double>& t, const std::vector<double>& sd, double width,
                         const std::string& color) {
  Series up, down;
  up.x = down.x = t;
  for (double s : sd) {
    up.y.push_back(width * s);
    down.y.push_back(-width * s);
  }
  up.color = down.color = color;
  up.dashed = down.dashed = true;
  up.width = down.width = 2.0;
  return {up, down};
}

}  // namespace

int cmd_chain(const RunSettings& s, const fs::path& dir, bool svg, std::ostream& log) {
  (void)svg;
  const Generator g = s.generator();
  Vector lambda = s.process.lambda;
  if (lambda.empty()) lambda.assign(g.dimension(), 0.0);
  if (lambda.size() != g.dimension()) {
    throw std::invalid_argument("process.lambda has length " + std::to_string(lambda.size()) +
                                ", chain has dimension " + std::to_string(g.dimension()));
  }
  const ChainStatics st = compute_statics(g, lambda, s.process.mu);
  const IdentityResiduals r = identity_residuals(g, st);

  auto pi_out = open_output(dir / "pi.csv");
  write_vector_csv(pi_out, "pi", st.pi);
  auto f_out = open_output(dir / "F.csv");
  write_matrix_csv(f_out, st.F);
  auto d_out = open_output(dir / "D.csv");
  write_matrix_csv(d_out, st.D);

  const std::pair<const char*, double> rows[] = {
      {"Q pi = 0", r.balance},         {"sum pi = 1", r.normalization}, {"QF = Pi - I", r.qf},
      {"FQ = Pi - I", r.fq},           {"1'F = 1'", r.f_ones},          {"1'D = 0", r.ones_d},
      {"D pi = 0", r.d_pi}};
  auto res_out = open_output(dir / "residuals.csv");
  res_out << "identity,residual\n";
  for (const auto& [name, value] : rows) res_out << name << ',' << format_double(value) << '\n';

  auto stat_out = open_output(dir / "statics.csv");
  stat_out << "quantity,value\n"
           << "lambda_inf," << format_double(st.lambda_inf) << '\n'
           << "mu_inf," << format_double(st.mu_inf) << '\n'
           << "V," << format_double(st.V) << '\n';

  log << "pi:";
  for (double p : st.pi) log << ' ' << format_double(p);
  log << "\nlambda_inf = " << format_double(st.lambda_inf) << ", V = " << format_double(st.V)
      << "\nmax identity residual = " << format_double(r.max()) << '\n';
  if (r.max() > 1e-10) {
    log << "identity residual above 1e-10\n";
    return kGateFailure;
  }
  return kOk;
}

int cmd_simulate(const RunSettings& s, const fs::path& dir, bool svg, std::ostream& log) {
  const Generator g = s.generator();
  const CountingSimulator sim(s.process, g);
  if (s.paths == 0) throw std::invalid_argument("output.paths must be at least 1");
  for (std::size_t k = 0; k < s.paths; ++k) {
    RngStream rng(s.seed, k);
    const CountingPath path = sim.sample(s.initial, rng);
    const std::string stem = s.paths == 1 ? "path" : "path_" + std::to_string(k + 1);
    auto out = open_output(dir / (stem + ".csv"));
    write_path_csv(out, path, s.process.lambda);

    const double horizon = s.process.horizon;
    const double mean_intensity =
        accumulated_intensity(path.chain, s.process.lambda, horizon) / horizon;
    log << stem << ": N(T) = " << path.count_at(horizon) << " of " << s.process.n << ", "
        << path.chain.jump_count() << " chain jumps, time-averaged intensity "
        << format_double(mean_intensity) << '\n';

    if (svg) {
      const auto times = linspace(0.0, horizon, kMaxPlotPoints);
      Series intensity;
      intensity.color = "#d62728";
      for (double t : times) {
        intensity.x.push_back(t);
        intensity.y.push_back(s.process.lambda[path.chain.state_at(t)]);
      }
      std::vector<double> et{0.0}, fraction{0.0};
      const auto n = static_cast<double>(s.process.n);
      const std::size_t stride = std::max<std::size_t>(1, path.event_times.size() / kMaxPlotPoints);
      for (std::size_t e = 0; e < path.event_times.size(); e += stride) {
        et.push_back(path.event_times[e]);
        fraction.push_back(path.levels[e] / n);
      }
      Series count = step_series(et, fraction, horizon);
      const std::string speed = format_double(s.process.chain_speed);
      auto out_svg = open_output(dir / (stem + ".svg"));
      write_svg(out_svg, {{"fraction of defaults, n=" + std::to_string(s.process.n) +
                               ", chain speed " + speed,
                           "t", "N_t / n", {count}},
                          {"intensity of the background chain", "t", "lambda(Z_t)", {intensity}}});
    }
  }
  return kOk;
}

int cmd_clt(const RunSettings& s, const fs::path& dir, bool svg, std::ostream& log) {
  const ExperimentConfig config = s.experiment();
  config.validate();
  const McSummary summary = run_experiment(config);
  {
    auto out = open_output(dir / "summary.csv");
    write_summary_csv(out, summary);
  }
  const double rel_tol = config.relative_tolerance();
  const GateReport gate =
      variance_gate(summary, rel_tol, config.tolerance.mean_sigmas, config.tolerance.theory_floor);
  log << "engine: " << to_string(summary.engine) << ", replicates: " << summary.replicates << '\n';
  for (const std::string& m : gate.messages) log << "  " << m << '\n';
  for (const McRow& row : summary.rows) {
    if (!row.degenerate) {
      log << "  t=" << row.time << ": KS p = " << format_double(row.ks_p)
          << (row.ks_p < config.tolerance.ks_alpha ? " (below alpha)" : "") << '\n';
    }
  }

  // Centred sample paths on a fine grid, drawn from streams disjoint from the replicates.
  std::vector<double> times;
  std::vector<std::vector<double>> paths;
  if (s.plot_paths > 0) {
    ExperimentConfig plot = config;
    plot.grid = linspace(0.0, s.process.horizon, s.plot_points);
    for (std::size_t k = 0; k < s.plot_paths; ++k) {
      paths.push_back(run_replicate(plot, kPlotStreamOffset + k));
    }
    times = plot.grid;
  }
  const LimitLaw law =
      make_limit_law(s.regime, compute_statics(config.generator, s.process.lambda, s.process.mu));
  std::vector<double> sd;
  for (double t : times) sd.push_back(std::sqrt(law.variance(t)));
  {
    auto out = open_output(dir / "paths.csv");
    out << "time,theory_sd";
    for (std::size_t k = 0; k < paths.size(); ++k) out << ",path_" << k + 1;
    out << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
      out << format_double(times[i]) << ',' << format_double(sd[i]);
      for (const auto& p : paths) out << ',' << format_double(p[i]);
      out << '\n';
    }
  }
  if (svg) {
    Panel panel{"centred and scaled paths, n=" + std::to_string(s.process.n) + ", regime " +
                    std::string(to_string(s.regime.kind)) + ", theory +/- 2 sd",
                "t", "scaled deviation", {}};
    for (const auto& p : paths) {
      Series series;
      series.x = times;
      series.y = p;
      series.opacity = 0.35;
      panel.series.push_back(series);
    }
    for (Series& b : band(times, sd, 2.0, "#d62728")) panel.series.push_back(std::move(b));
    auto out = open_output(dir / "paths.svg");
    write_svg(out, {panel});
  }

  if (gate.skipped) {
    log << "degenerate distribution (all theory variances are zero): gate skipped\n";
    return kOk;
  }
  log << "variance gate (rel_tol " << format_double(rel_tol) << "): "
      << (gate.passed ? "PASS" : "FAIL") << '\n';
  return gate.passed ? kOk : kGateFailure;
}

int cmd_curves(const RunSettings& s, const fs::path& dir, bool svg, std::ostream& log) {
  const Generator g = s.generator();
  s.process.validate(g.dimension());
  const ChainStatics st = compute_statics(g, s.process.lambda, s.process.mu);
  const LimitLaw law = make_limit_law(s.regime, st);
  const auto grid = linspace(0.0, s.process.horizon, s.curve_points);
  auto mean = [&](double t) { return centering_curve(s.regime, st, t); };
  {
    auto out = open_output(dir / "curves.csv");
    write_curves_csv(out, law, grid, mean);
  }
  log << "regime " << to_string(s.regime.kind) << ": lambda_inf = " << format_double(st.lambda_inf)
      << ", V = " << format_double(st.V) << ", drift = " << format_double(law.drift) << '\n';
  if (svg) {
    Series m, v;
    m.x = v.x = grid;
    for (double t : grid) {
      m.y.push_back(mean(t));
      v.y.push_back(law.variance(t));
    }
    v.color = "#d62728";
    auto out = open_output(dir / "curves.svg");
    write_svg(out, {{"centring curve", "t", "rho_t", {m}},
                    {"limit variance, regime " + std::string(to_string(s.regime.kind)), "t",
                     "variance", {v}}});
  }
  return kOk;
}

void prepare_output_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw OutputExistsError("'" + dir.string() + "' is not a directory");
    if (!force && !fs::is_empty(dir)) {
      throw OutputExistsError("output directory '" + dir.string() +
                              "' is not empty; pass --force to overwrite");
    }
  }
  fs::create_directories(dir);
}

int run_command(const std::string& command, std::vector<RunSettings> runs,
                const CommandOptions& options, std::ostream& log, std::ostream& err) {
  using Handler = int (*)(const RunSettings&, const fs::path&, bool, std::ostream&);
  Handler handler = nullptr;
  if (command == "chain") handler = cmd_chain;
  if (command == "simulate") handler = cmd_simulate;
  if (command == "clt") handler = cmd_clt;
  if (command == "curves") handler = cmd_curves;
  if (!handler) {
    err << "unknown command '" << command << "'\n";
    return kUsage;
  }
  try {
    prepare_output_dir(options.out_dir, options.force);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  int worst = kOk;
  for (RunSettings& run : runs) {
    if (options.seed) run.seed = *options.seed;
    if (options.threads) run.threads = *options.threads;
    const fs::path dir = runs.size() > 1 ? options.out_dir / run.label : options.out_dir;
    if (runs.size() > 1) log << "== " << run.label << '\n';
    try {
      fs::create_directories(dir);
      {
        auto manifest = open_output(dir / "manifest.yaml");
        manifest << to_manifest(run, command);
      }
      worst = std::max(worst, handler(run, dir, options.svg, log));
    } catch (const SingularMatrixError& e) {
      err << "internal error: " << e.what() << '\n';
      return kValidation;
    } catch (const std::invalid_argument& e) {
      err << "validation error: " << e.what() << '\n';
      return kValidation;
    } catch (const std::logic_error& e) {
      err << "validation error: " << e.what() << '\n';
      return kValidation;
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return kValidation;
    }
  }
  return worst;
}

}  // namespace mmbin::cli
