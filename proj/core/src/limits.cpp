#include "mmbin/limits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace mmbin {

namespace {

constexpr std::array<std::pair<RegimeKind, std::string_view>, 7> kRegimeNames = {{
    {RegimeKind::non_modulated, "non_modulated"},
    {RegimeKind::iterated_n_then_alpha, "iterated_n_then_alpha"},
    {RegimeKind::iterated_alpha_then_n, "iterated_alpha_then_n"},
    {RegimeKind::joint_beta, "joint_beta"},
    {RegimeKind::gamma, "gamma"},
    {RegimeKind::recovery_non_modulated, "recovery_non_modulated"},
    {RegimeKind::recovery_joint, "recovery_joint"},
}};

// c0 + c1 e^{−as} + c2 e^{−2as}
struct ExpPoly {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double value(double s, double a) const {
    const double e = std::exp(-a * s);
    return c0 + e * (c1 + c2 * e);
  }

  // ∫₀ᵗ value(s) ds
  double integral(double t, double a) const {
    if (a == 0.0) return (c0 + c1 + c2) * t;
    return c0 * t - c1 * std::expm1(-a * t) / a - c2 * std::expm1(-2.0 * a * t) / (2.0 * a);
  }

  // e^{−2at} ∫₀ᵗ e^{2as} value(s) ds, the variance of the OU-type limit.
  double ou_variance(double t, double a) const {
    if (t <= 0.0) return 0.0;
    if (a == 0.0) return (c0 + c1 + c2) * t;
    const double v = -c0 * std::expm1(-2.0 * a * t) / (2.0 * a) -
                     c1 * std::exp(-a * t) * std::expm1(-a * t) / a +
                     c2 * t * std::exp(-2.0 * a * t);
    return std::max(v, 0.0);
  }
};

MartingaleComponent component(std::string label, ExpPoly poly, double a) {
  return {std::move(label), [poly, a](double t) { return poly.integral(t, a); },
          [poly, a](double t) { return poly.ou_variance(t, a); }};
}

LimitLaw law_from(double a, ExpPoly total, std::vector<MartingaleComponent> components) {
  LimitLaw law;
  law.drift = a;
  law.diffusion_squared = [total, a](double t) { return total.value(t, a); };
  law.variance = [total, a](double t) { return total.ou_variance(t, a); };
  law.components = std::move(components);
  return law;
}

bool includes_chain_noise(double beta) { return beta <= 1.0; }
bool includes_count_noise(double beta) { return beta >= 1.0; }

}  // namespace

std::string_view to_string(RegimeKind kind) {
  for (const auto& [k, name] : kRegimeNames)
    if (k == kind) return name;
  return "unknown";
}

RegimeKind regime_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kRegimeNames)
    if (n == name) return k;
  throw std::invalid_argument("unknown regime '" + std::string(name) + "'");
}

void Regime::validate() const {
  if ((kind == RegimeKind::joint_beta || kind == RegimeKind::recovery_joint) &&
      !(beta > 0.0 && std::isfinite(beta))) {
    throw std::invalid_argument("regime: beta must be > 0");
  }
  if (kind == RegimeKind::gamma && !(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("regime: gamma must lie in (0, 1)");
  }
}

double scaling_exponent(const Regime& regime) {
  regime.validate();
  switch (regime.kind) {
    case RegimeKind::joint_beta:
    case RegimeKind::recovery_joint:
      return -0.5 * (1.0 + std::max(1.0 - regime.beta, 0.0));
    case RegimeKind::gamma:
      return 0.5 * (regime.gamma - 1.0);
    default:
      return -0.5;
  }
}

double centering_curve(const Regime& regime, const ChainStatics& statics, double t) {
  regime.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("centering_curve: t must be >= 0");
  switch (regime.kind) {
    case RegimeKind::gamma:
      return 0.0;
    case RegimeKind::recovery_non_modulated:
    case RegimeKind::recovery_joint: {
      const double a = statics.lambda_inf + statics.mu_inf;
      return a > 0.0 ? recovery_mean_ode(statics.lambda_inf, statics.mu_inf, t) : 0.0;
    }
    default:
      return -std::expm1(-statics.lambda_inf * t);
  }
}

double pathwise_centering(const ChainPath& path, std::span<const double> lambda, std::uint64_t n,
                          double gamma, double t) {
  const double scale = gamma == 0.0 ? 1.0 : std::pow(static_cast<double>(n), -gamma);
  return -std::expm1(-scale * accumulated_intensity(path, lambda, t));
}

LimitLaw make_limit_law(const Regime& regime, const ChainStatics& statics) {
  regime.validate();
  const double lam = statics.lambda_inf;
  const double mu = statics.mu_inf;
  switch (regime.kind) {
    case RegimeKind::non_modulated:
    case RegimeKind::iterated_n_then_alpha:
    case RegimeKind::iterated_alpha_then_n: {
      const ExpPoly b{0.0, lam, 0.0};
      return law_from(lam, b, {component("B", b, lam)});
    }
    case RegimeKind::joint_beta: {
      const ExpPoly g{0.0, 0.0, includes_chain_noise(regime.beta) ? statics.V : 0.0};
      const ExpPoly b{0.0, includes_count_noise(regime.beta) ? lam : 0.0, 0.0};
      std::vector<MartingaleComponent> parts;
      if (includes_chain_noise(regime.beta)) {
        parts.push_back(component("G", g, lam));
        const double v = statics.V;
        // G = ∫ e^{−λ∞s} dG^H with ⟨G^H⟩_t = Vt.
        parts.push_back({"G^H", [v](double t) { return v * t; },
                         [g, lam](double t) { return g.ou_variance(t, lam); }});
      }
      if (includes_count_noise(regime.beta)) parts.push_back(component("B", b, lam));
      return law_from(lam, {0.0, b.c1, g.c2}, std::move(parts));
    }
    case RegimeKind::gamma: {
      const ExpPoly w{lam, 0.0, 0.0};
      return law_from(0.0, w, {component("W", w, 0.0)});
    }
    case RegimeKind::recovery_non_modulated: {
      const double a = lam + mu;
      if (a == 0.0) return law_from(0.0, {}, {component("B", {}, 0.0)});
      // σ(s)² = λ − (λ − μ)ρ_s with ρ_s = (λ/a)(1 − e^{−as})
      const ExpPoly sigma{lam - (lam - mu) * lam / a, (lam - mu) * lam / a, 0.0};
      return law_from(a, sigma, {component("B", sigma, a)});
    }
    case RegimeKind::recovery_joint: {
      const double a = lam + mu;
      if (a == 0.0) return law_from(0.0, {}, {});
      const double r = lam / a;
      // 1 − ρ_s = p0 + p1 E and ρ_s = q0 + q1 E with E = e^{−as}
      const double p0 = 1.0 - r, p1 = r, q0 = r, q1 = -r;
      const double sll = ergodic_covariance(statics.lambda, statics.lambda, statics);
      const double slm = ergodic_covariance(statics.lambda, statics.mu, statics);
      const double smm = ergodic_covariance(statics.mu, statics.mu, statics);
      // σ₁² = Φ_s S Φ_sᵀ with Φ_s = (1 − ρ_s)λᵀ − ρ_s μᵀ
      const ExpPoly sigma1{
          p0 * p0 * sll - 2.0 * q0 * p0 * slm + q0 * q0 * smm,
          2.0 * p0 * p1 * sll - 2.0 * (q0 * p1 + q1 * p0) * slm + 2.0 * q0 * q1 * smm,
          p1 * p1 * sll - 2.0 * q1 * p1 * slm + q1 * q1 * smm};
      // σ₂² = λ∞(1 − ρ_s) + μ∞ρ_s
      const ExpPoly sigma2{lam * p0 + mu * q0, lam * p1 + mu * q1, 0.0};
      ExpPoly total;
      std::vector<MartingaleComponent> parts;
      if (includes_chain_noise(regime.beta)) {
        total = {total.c0 + sigma1.c0, total.c1 + sigma1.c1, total.c2 + sigma1.c2};
        parts.push_back(component("B1", sigma1, a));
      }
      if (includes_count_noise(regime.beta)) {
        total = {total.c0 + sigma2.c0, total.c1 + sigma2.c1, total.c2 + sigma2.c2};
        parts.push_back(component("B2", sigma2, a));
      }
      return law_from(a, total, std::move(parts));
    }
  }
  throw std::logic_error("make_limit_law: unhandled regime");
}

double limit_variance_curve(const Regime& regime, const ChainStatics& statics, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("limit_variance_curve: t must be >= 0");
  return make_limit_law(regime, statics).variance(t);
}

double conditional_limit_variance(const ChainPath& path, std::span<const double> lambda, double t) {
  const double e = std::exp(-accumulated_intensity(path, lambda, t));
  return std::max(e - e * e, 0.0);
}

std::vector<double> sample_limit_process(const LimitLaw& law, std::span<const double> grid,
                                         RngStream& rng) {
  std::vector<double> out;
  out.reserve(grid.size());
  double x = 0.0;
  double t = 0.0;
  double var_t = 0.0;
  for (double next : grid) {
    if (!(next >= t)) throw std::invalid_argument("sample_limit_process: grid must be increasing from 0");
    const double h = next - t;
    const double decay = std::exp(-law.drift * h);
    const double var_next = law.variance(next);
    // Var X_{t+h} = e^{−2ah} Var X_t + (transition variance)
    const double step_var = std::max(var_next - decay * decay * var_t, 0.0);
    x = decay * x + std::sqrt(step_var) * rng.normal();
    out.push_back(x);
    t = next;
    var_t = var_next;
  }
  return out;
}

std::vector<double> sample_conditional_limit_process(const ChainPath& path,
                                                     std::span<const double> lambda,
                                                     std::span<const double> grid, RngStream& rng) {
  std::vector<double> out;
  out.reserve(grid.size());
  double x = 0.0;
  double t = 0.0;
  double big_lambda = 0.0;
  double var_t = 0.0;
  for (double next : grid) {
    if (!(next >= t)) {
      throw std::invalid_argument("sample_conditional_limit_process: grid must be increasing");
    }
    const double next_lambda = accumulated_intensity(path, lambda, next);
    const double decay = std::exp(-(next_lambda - big_lambda));
    const double e = std::exp(-next_lambda);
    const double var_next = e - e * e;
    const double step_var = std::max(var_next - decay * decay * var_t, 0.0);
    x = decay * x + std::sqrt(step_var) * rng.normal();
    out.push_back(x);
    t = next;
    big_lambda = next_lambda;
    var_t = var_next;
  }
  return out;
}

std::string_view to_string(Centering centering) {
  return centering == Centering::deterministic ? "deterministic" : "pathwise";
}

Centering centering_from_string(std::string_view name) {
  if (name == "deterministic") return Centering::deterministic;
  if (name == "pathwise") return Centering::pathwise;
  throw std::invalid_argument("unknown centering '" + std::string(name) + "'");
}

double scaled_deviation(std::uint64_t n, double count, double rho, double exponent) {
  const auto nn = static_cast<double>(n);
  return std::pow(nn, exponent) * (count - nn * rho);
}

std::vector<double> center_and_scale(const CountingPath& path, const Regime& regime,
                                     const ChainStatics& statics, std::span<const double> grid,
                                     Centering centering) {
  const double exponent = scaling_exponent(regime);
  if (centering == Centering::pathwise && std::any_of(statics.mu.begin(), statics.mu.end(),
                                                      [](double m) { return m != 0.0; })) {
    throw UnsupportedRegimeError("center_and_scale: pathwise centring is undefined with recovery");
  }
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const double rho = centering == Centering::deterministic
                           ? centering_curve(regime, statics, t)
                           : pathwise_centering(path.chain, statics.lambda, path.n,
                                                regime.intensity_exponent(), t);
    out.push_back(scaled_deviation(path.n, static_cast<double>(path.count_at(t)), rho, exponent));
  }
  return out;
}

double Decomposition::max_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < total.size(); ++i) {
    worst = std::max(worst, std::abs(total[i] - (k_hat[i] + h_hat[i])));
  }
  return worst;
}

Decomposition decompose(const CountingPath& path, const ChainStatics& statics,
                        std::span<const double> grid) {
  Decomposition out;
  const auto n = static_cast<double>(path.n);
  const double root = std::sqrt(n);
  for (double t : grid) {
    const double count = static_cast<double>(path.count_at(t));
    const double rho = -std::expm1(-statics.lambda_inf * t);
    const double rho_path = pathwise_centering(path.chain, statics.lambda, path.n, 0.0, t);
    out.total.push_back((count - n * rho) / root);
    out.k_hat.push_back((count - n * rho_path) / root);
    out.h_hat.push_back(root * (rho_path - rho));
  }
  return out;
}

}  // namespace mmbin
