#pragma once

#include <optional>
#include <string>

#include "regret_floor/estimator.hpp"
#include "regret_floor/rng.hpp"

namespace regret_floor {

enum class PolicyKind { stochastic, greedy };

/// Query rule x_t = xstar_hat + noise(stderr^p). Greedy injects nothing.
struct PolicyConfig {
  PolicyKind kind = PolicyKind::stochastic;
  double p = 2.0;
  /// Variance injected around the last known estimate while no fit exists.
  double fallback_variance = 1.0;
  NoiseDistribution injection = NoiseDistribution::gaussian;

  static PolicyConfig stochastic(double p);
  static PolicyConfig greedy();

  void validate() const;
  /// "greedy" or the exponent formatted with %g.
  std::string label() const;
};

/// Parses "greedy" or a positive exponent.
PolicyConfig parse_policy_label(const std::string& token);

/// Variance of the injected query noise for a given standard error.
/// Argument of noise() is read as a variance for every p.
double injected_variance(const PolicyConfig& config, double stderr_xstar) noexcept;

/// Next query. With an estimate: greedy returns xstar_hat and draws nothing;
/// stochastic draws once. Without one: fallback_center plus one draw of
/// fallback_variance, for either kind.
double next_query(const PolicyConfig& config, const std::optional<Estimate>& estimate,
                  double fallback_center, Rng& rng);

}  // namespace regret_floor
