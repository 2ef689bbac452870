#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "mmbin/csv.hpp"

namespace mmbin::cli {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    std::ostringstream out;
    out << source_;
    const YAML::Mark mark = node.Mark();
    if (mark.line >= 0) out << ':' << mark.line + 1;
    out << ": " << msg;
    throw ConfigError(out.str());
  }

  void require_map(const YAML::Node& node, const std::string& section) const {
    if (!node.IsMap()) fail(node, "'" + section + "' must be a mapping");
  }

  void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed,
                  const std::string& section) const {
    require_map(node, section);
    for (const auto& entry : node) {
      const auto key = entry.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        fail(entry.first, "unknown key '" + key + "' in " + section + " (expected one of: " + list + ")");
      }
    }
  }

  template <class T>
  T as(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(node, "cannot read " + what + " from '" + node.Scalar() + "'");
    }
  }

  double number(const YAML::Node& node, const std::string& what) const {
    const auto x = as<double>(node, what);
    if (!std::isfinite(x)) fail(node, what + " must be finite");
    return x;
  }

  std::uint64_t count(const YAML::Node& node, const std::string& what) const {
    const auto text = as<std::string>(node, what);
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
      fail(node, what + " must be a non-negative integer, got '" + text + "'");
    }
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
      fail(node, what + " is out of range");
    }
  }

  Vector vector(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node, what + " must be a list");
    Vector out;
    for (const auto& item : node) out.push_back(number(item, what + " entry"));
    return out;
  }

  DenseMatrix matrix(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence() || node.size() == 0) fail(node, what + " must be a non-empty list of rows");
    std::vector<double> entries;
    const std::size_t rows = node.size();
    std::size_t cols = 0;
    for (const auto& row : node) {
      const Vector r = vector(row, what + " row");
      if (cols == 0) cols = r.size();
      if (r.size() != cols || cols == 0) fail(row, what + " rows must have equal, nonzero length");
      entries.insert(entries.end(), r.begin(), r.end());
    }
    return DenseMatrix(rows, cols, std::move(entries));
  }

  template <class F>
  auto convert(const YAML::Node& node, const std::string& what, F&& parse) const {
    const auto text = as<std::string>(node, what);
    try {
      return parse(text);
    } catch (const std::invalid_argument& e) {
      fail(node, e.what());
    }
  }

 private:
  std::string source_;
};

bool is_joint(RegimeKind kind) {
  return kind == RegimeKind::joint_beta || kind == RegimeKind::recovery_joint;
}

}  // namespace

ExperimentConfig RunSettings::experiment() const {
  return ExperimentConfig{.spec = process,
                          .regime = regime,
                          .generator = generator(),
                          .replicates = replicates,
                          .grid = grid,
                          .master_seed = seed,
                          .centering = centering,
                          .initial = initial,
                          .engine = engine,
                          .tolerance = tolerance,
                          .threads = threads};
}

RunSettings parse_config(const std::string& text, const std::string& source) {
  const Reader rd(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream out;
    out << source << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(out.str());
  }
  RunSettings s;
  if (root.IsNull()) return s;
  rd.check_keys(root,
                {"version", "command", "label", "seed", "threads", "generator", "process", "regime",
                 "experiment", "output"},
                "top level");

  if (auto n = root["label"]) s.label = rd.as<std::string>(n, "label");
  if (auto n = root["seed"]) s.seed = rd.count(n, "seed");
  if (auto n = root["threads"]) s.threads = rd.count(n, "threads");

  if (auto g = root["generator"]) {
    rd.check_keys(g, {"convention", "matrix"}, "generator");
    if (auto c = g["convention"]) {
      s.convention = rd.convert(c, "generator.convention", [](const std::string& v) {
        if (v == "column") return Convention::column;
        if (v == "row") return Convention::row;
        throw std::invalid_argument("generator.convention must be 'column' or 'row'");
      });
    }
    if (!g["matrix"]) rd.fail(g, "generator.matrix is required");
    s.q = rd.matrix(g["matrix"], "generator.matrix");
  }

  if (auto r = root["regime"]) {
    rd.check_keys(r, {"kind", "beta", "gamma"}, "regime");
    if (auto k = r["kind"]) s.regime.kind = rd.convert(k, "regime.kind", regime_kind_from_string);
    if (auto b = r["beta"]) s.regime.beta = rd.number(b, "regime.beta");
    if (auto c = r["gamma"]) s.regime.gamma = rd.number(c, "regime.gamma");
  }

  bool speed_given = false;
  bool gamma_given = false;
  if (auto p = root["process"]) {
    rd.check_keys(p, {"n", "lambda", "mu", "chain_speed", "gamma", "horizon", "initial_state"},
                  "process");
    if (auto n = p["n"]) s.process.n = rd.count(n, "process.n");
    if (auto l = p["lambda"]) s.process.lambda = rd.vector(l, "process.lambda");
    if (auto m = p["mu"]) s.process.mu = rd.vector(m, "process.mu");
    if (auto c = p["chain_speed"]) {
      s.process.chain_speed = rd.number(c, "process.chain_speed");
      speed_given = true;
    }
    if (auto c = p["gamma"]) {
      s.process.gamma = rd.number(c, "process.gamma");
      gamma_given = true;
    }
    if (auto h = p["horizon"]) s.process.horizon = rd.number(h, "process.horizon");
    if (auto i = p["initial_state"]) {
      if (i.IsScalar() && i.Scalar() == "stationary") {
        s.initial = InitialState::stationary();
      } else {
        const std::uint64_t state = rd.count(i, "process.initial_state");
        if (state < 1 || state > s.q.rows()) {
          rd.fail(i, "process.initial_state must be 'stationary' or a state in 1.." +
                         std::to_string(s.q.rows()));
        }
        s.initial = InitialState::fixed(state - 1);
      }
    }
  }
  if (!speed_given && is_joint(s.regime.kind)) {
    s.process.chain_speed = std::pow(static_cast<double>(s.process.n), s.regime.beta);
  }
  if (!gamma_given) s.process.gamma = s.regime.intensity_exponent();

  if (auto e = root["experiment"]) {
    rd.check_keys(e,
                  {"replicates", "grid", "centering", "engine", "ks_alpha", "rel_tol",
                   "mean_sigmas"},
                  "experiment");
    if (auto m = e["replicates"]) s.replicates = rd.count(m, "experiment.replicates");
    if (auto g = e["grid"]) s.grid = rd.vector(g, "experiment.grid");
    if (auto c = e["centering"]) s.centering = rd.convert(c, "experiment.centering", centering_from_string);
    if (auto c = e["engine"]) s.engine = rd.convert(c, "experiment.engine", engine_from_string);
    if (auto a = e["ks_alpha"]) s.tolerance.ks_alpha = rd.number(a, "experiment.ks_alpha");
    if (auto r = e["rel_tol"]) s.tolerance.rel_tol = rd.number(r, "experiment.rel_tol");
    if (auto m = e["mean_sigmas"]) s.tolerance.mean_sigmas = rd.number(m, "experiment.mean_sigmas");
  }
  if (s.grid.empty()) s.grid = {s.process.horizon};

  if (auto o = root["output"]) {
    rd.check_keys(o, {"paths", "plot_paths", "plot_points", "curve_points"}, "output");
    if (auto v = o["paths"]) s.paths = rd.count(v, "output.paths");
    if (auto v = o["plot_paths"]) s.plot_paths = rd.count(v, "output.plot_paths");
    if (auto v = o["plot_points"]) s.plot_points = rd.count(v, "output.plot_points");
    if (auto v = o["curve_points"]) s.curve_points = rd.count(v, "output.curve_points");
  }
  if (s.plot_points < 2) throw ConfigError(source + ": output.plot_points must be at least 2");
  if (s.curve_points < 2) throw ConfigError(source + ": output.curve_points must be at least 2");
  return s;
}

RunSettings load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string to_manifest(const RunSettings& s, const std::string& command) {
  YAML::Emitter out;
  auto num = [](double x) { return format_double(x); };
  auto seq = [&](const Vector& v) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double x : v) out << num(x);
    out << YAML::EndSeq;
  };
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << MMBIN_VERSION;
  out << YAML::Key << "command" << YAML::Value << command;
  if (!s.label.empty()) out << YAML::Key << "label" << YAML::Value << s.label;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "threads" << YAML::Value << s.threads;

  out << YAML::Key << "generator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "convention" << YAML::Value
      << (s.convention == Convention::column ? "column" : "row");
  out << YAML::Key << "matrix" << YAML::Value << YAML::BeginSeq;
  for (std::size_t i = 0; i < s.q.rows(); ++i) {
    const auto row = s.q.row(i);
    seq(Vector(row.begin(), row.end()));
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "process" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n" << YAML::Value << s.process.n;
  out << YAML::Key << "lambda" << YAML::Value;
  seq(s.process.lambda);
  if (!s.process.mu.empty()) {
    out << YAML::Key << "mu" << YAML::Value;
    seq(s.process.mu);
  }
  out << YAML::Key << "chain_speed" << YAML::Value << num(s.process.chain_speed);
  out << YAML::Key << "gamma" << YAML::Value << num(s.process.gamma);
  out << YAML::Key << "horizon" << YAML::Value << num(s.process.horizon);
  out << YAML::Key << "initial_state" << YAML::Value;
  if (s.initial.state) {
    out << *s.initial.state + 1;
  } else {
    out << "stationary";
  }
  out << YAML::EndMap;

  out << YAML::Key << "regime" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(s.regime.kind));
  out << YAML::Key << "beta" << YAML::Value << num(s.regime.beta);
  out << YAML::Key << "gamma" << YAML::Value << num(s.regime.gamma);
  out << YAML::EndMap;

  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "replicates" << YAML::Value << s.replicates;
  out << YAML::Key << "grid" << YAML::Value;
  seq(s.grid);
  out << YAML::Key << "centering" << YAML::Value << std::string(to_string(s.centering));
  out << YAML::Key << "engine" << YAML::Value << std::string(to_string(s.engine));
  out << YAML::Key << "ks_alpha" << YAML::Value << num(s.tolerance.ks_alpha);
  if (s.tolerance.rel_tol) out << YAML::Key << "rel_tol" << YAML::Value << num(*s.tolerance.rel_tol);
  out << YAML::Key << "mean_sigmas" << YAML::Value << num(s.tolerance.mean_sigmas);
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "paths" << YAML::Value << s.paths;
  out << YAML::Key << "plot_paths" << YAML::Value << s.plot_paths;
  out << YAML::Key << "plot_points" << YAML::Value << s.plot_points;
  out << YAML::Key << "curve_points" << YAML::Value << s.curve_points;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace mmbin::cli
