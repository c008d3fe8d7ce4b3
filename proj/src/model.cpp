#include "regret_floor/model.hpp"

#include <cmath>

#include "regret_floor/errors.hpp"

namespace regret_floor {

void ObjectiveParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidCurvature(a);
  if (!std::isfinite(b)) throw ConfigError("b", "must be finite");
  if (!std::isfinite(c)) throw ConfigError("c", "must be finite");
}

double evaluate(const ObjectiveParams& params, double x) noexcept {
  return (-params.a * x + params.b) * x + params.c;
}

Optimum optimum(const ObjectiveParams& params) {
  if (!(params.a > 0.0)) throw InvalidCurvature(params.a);
  return {params.b / (2.0 * params.a), params.c + params.b * params.b / (4.0 * params.a)};
}

double regret_at(const ObjectiveParams& params, double x) noexcept {
  const double d = x - params.b / (2.0 * params.a);
  return params.a * d * d;
}

void NoiseSpec::validate() const {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
    throw ConfigError("sigma2", "noise variance must be finite and >= 0");
}

MeasurementOracle::MeasurementOracle(ObjectiveParams params, NoiseSpec noise, std::uint64_t seed)
    : params_(params), noise_(noise), rng_(seed) {}

double MeasurementOracle::measure(double x) {
  return evaluate(params_, x) + draw_zero_mean(noise_.distribution, noise_.sigma2, rng_);
}

}  // namespace regret_floor
