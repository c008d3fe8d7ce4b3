#include "regret_floor/policy.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "regret_floor/errors.hpp"

namespace regret_floor {

PolicyConfig PolicyConfig::stochastic(double p) {
  PolicyConfig c;
  c.kind = PolicyKind::stochastic;
  c.p = p;
  return c;
}

PolicyConfig PolicyConfig::greedy() {
  PolicyConfig c;
  c.kind = PolicyKind::greedy;
  return c;
}

void PolicyConfig::validate() const {
  if (kind == PolicyKind::stochastic && !(p > 0.0 && std::isfinite(p)))
    throw ConfigError("p", "exploration exponent must be positive and finite");
  if (!(fallback_variance > 0.0) || !std::isfinite(fallback_variance))
    throw ConfigError("fallback_variance", "must be positive and finite");
}

std::string PolicyConfig::label() const {
  if (kind == PolicyKind::greedy) return "greedy";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

PolicyConfig parse_policy_label(const std::string& token) {
  if (token == "greedy") return PolicyConfig::greedy();
  char* end = nullptr;
  const double p = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size())
    throw ConfigError("p_list", "expected 'greedy' or a number, got '" + token + "'");
  PolicyConfig c = PolicyConfig::stochastic(p);
  c.validate();
  return c;
}

double injected_variance(const PolicyConfig& config, double stderr_xstar) noexcept {
  if (config.kind == PolicyKind::greedy) return 0.0;
  if (config.p == 2.0) return stderr_xstar * stderr_xstar;
  return std::pow(stderr_xstar, config.p);
}

double next_query(const PolicyConfig& config, const std::optional<Estimate>& estimate,
                  double fallback_center, Rng& rng) {
  if (!estimate)
    return fallback_center + draw_zero_mean(config.injection, config.fallback_variance, rng);
  if (config.kind == PolicyKind::greedy) return estimate->xstar_hat;
  return estimate->xstar_hat +
         draw_zero_mean(config.injection, injected_variance(config, estimate->stderr_xstar), rng);
}

}  // namespace regret_floor
