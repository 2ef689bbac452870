#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmbin/chain_path.hpp"
#include "mmbin/chain_statics.hpp"
#include "mmbin/counting.hpp"
#include "mmbin/rng.hpp"

namespace mmbin {

enum class RegimeKind {
  non_modulated,           // constant intensity, n → ∞
  iterated_n_then_alpha,   // n → ∞, then chain speed → ∞
  iterated_alpha_then_n,   // chain speed → ∞, then n → ∞
  joint_beta,              // chain speed n^β, joint limit
  gamma,                   // intensity n^{-γ}λ, 0 < γ < 1
  recovery_non_modulated,  // birth–death with constant λ, μ
  recovery_joint,          // birth–death with chain speed n^β
};

std::string_view to_string(RegimeKind kind);
/// Accepts the snake_case names above; throws std::invalid_argument otherwise.
RegimeKind regime_kind_from_string(std::string_view name);

struct Regime {
  RegimeKind kind = RegimeKind::non_modulated;
  double beta = 1.0;   // joint_beta, recovery_joint
  double gamma = 0.0;  // gamma regime only

  void validate() const;
  /// γ entering the intensity scaling (0 outside the gamma regime).
  double intensity_exponent() const { return kind == RegimeKind::gamma ? gamma : 0.0; }
};

/// e such that the centred process is multiplied by n^e.
double scaling_exponent(const Regime& regime);

/// Deterministic centring ρ_t. The gamma regime only has a pathwise centring
/// and returns 0 here.
double centering_curve(const Regime& regime, const ChainStatics& statics, double t);

/// 1 − exp(−n^{-γ}Λ_t) along the realised chain path.
double pathwise_centering(const ChainPath& path, std::span<const double> lambda, std::uint64_t n,
                          double gamma, double t);

/// A Gaussian martingale driving the limit, with its bracket ⟨·⟩_t and its
/// contribution to Var(N̂_t). In the joint regime "G^H" is listed next to "G"
/// as the Brownian motion behind the Ĥ limit; it describes the same variance
/// as "G", so only the other components add up to the total.
struct MartingaleComponent {
  std::string label;
  std::function<double(double)> bracket;
  std::function<double(double)> variance;
};

/// Limit law of the scaled process: dX = −a X dt + σ(t) dW, X_0 = 0.
struct LimitLaw {
  double drift = 0.0;
  std::function<double(double)> diffusion_squared;  // σ(t)²
  std::function<double(double)> variance;           // Var X_t
  std::vector<MartingaleComponent> components;

  double variance_curve(double t) const { return variance(t); }
};

LimitLaw make_limit_law(const Regime& regime, const ChainStatics& statics);

double limit_variance_curve(const Regime& regime, const ChainStatics& statics, double t);

/// Variance of the limit given the chain path: e^{−Λ_t} − e^{−2Λ_t}.
double conditional_limit_variance(const ChainPath& path, std::span<const double> lambda, double t);

/// Exact Gaussian transitions of the limit SDE on an increasing grid starting
/// at or after 0.
std::vector<double> sample_limit_process(const LimitLaw& law, std::span<const double> grid,
                                         RngStream& rng);

/// Exact transitions of dX = −λ(Z_t)X dt + dB with ⟨B⟩_t = 1 − e^{−Λ_t},
/// conditionally on a chain path.
std::vector<double> sample_conditional_limit_process(const ChainPath& path,
                                                     std::span<const double> lambda,
                                                     std::span<const double> grid, RngStream& rng);

enum class Centering { deterministic, pathwise };

std::string_view to_string(Centering centering);
Centering centering_from_string(std::string_view name);

/// n^e (N_t − n ρ_t).
double scaled_deviation(std::uint64_t n, double count, double rho, double exponent);

/// Scaled, centred counting process on a grid.
std::vector<double> center_and_scale(const CountingPath& path, const Regime& regime,
                                     const ChainStatics& statics, std::span<const double> grid,
                                     Centering centering);

/// N̂ = n^{-1/2}(N − nρ) split as K̂ = n^{-1/2}(N − nρⁿ) plus Ĥ = n^{1/2}(ρⁿ − ρ).
struct Decomposition {
  std::vector<double> total;
  std::vector<double> k_hat;
  std::vector<double> h_hat;
  double max_residual() const;
};

Decomposition decompose(const CountingPath& path, const ChainStatics& statics,
                        std::span<const double> grid);

}  // namespace mmbin
