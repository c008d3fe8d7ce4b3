#include "regret_floor/bounds.hpp"

#include <cmath>
#include <numbers>

#include "regret_floor/errors.hpp"

namespace regret_floor {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt8 = 2.0 * std::numbers::sqrt2;
}  // namespace

void BoundInputs::validate() const {
  if (!(a > 0.0)) throw InvalidCurvature(a);
  if (!(sigma >= 0.0)) throw ConfigError("sigma", "must be >= 0");
  if (!(t >= 1.0)) throw ConfigError("t", "must be >= 1");
}

double sq_err_lower_bound(double a, double sigma, double t) noexcept {
  return sigma / (kSqrt8 * a) / std::sqrt(t);
}

double inst_regret_lower_bound(double sigma, double t) noexcept {
  return sigma / kSqrt8 / std::sqrt(t);
}

double total_regret_lower_bound(double sigma, double t) noexcept {
  return sigma / kSqrt2 * std::sqrt(t);
}

AsymptoticConstants asymptotic_constants(double a, double sigma) noexcept {
  return {-0.25, sigma / (kSqrt8 * a)};
}

OptimalAsymptotics optimal_asymptotics(double a, double sigma, double t) noexcept {
  return {kSqrt2 * sigma / a / std::sqrt(t), sigma * std::sqrt(8.0 * t)};
}

}  // namespace regret_floor
