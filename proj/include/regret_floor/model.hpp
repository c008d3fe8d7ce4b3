#pragma once

#include <cstdint>

#include "regret_floor/rng.hpp"

namespace regret_floor {

/// f(x) = -a x^2 + b x + c with a > 0.
struct ObjectiveParams {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;

  /// Throws InvalidCurvature unless a > 0 and finite.
  void validate() const;
};

struct Optimum {
  double location;  // x* = b / 2a
  double value;     // f(x*) = c + b^2 / 4a
};

double evaluate(const ObjectiveParams& params, double x) noexcept;

Optimum optimum(const ObjectiveParams& params);

/// Instantaneous regret f(x*) - f(x), computed as a (x - x*)^2 to avoid the
/// cancellation of subtracting two nearly equal function values.
double regret_at(const ObjectiveParams& params, double x) noexcept;

struct NoiseSpec {
  double sigma2 = 1.0;
  NoiseDistribution distribution = NoiseDistribution::gaussian;

  void validate() const;
};

/// Answers noisy queries of a fixed quadratic. Owns its random stream; one
/// oracle per worker.
class MeasurementOracle {
 public:
  MeasurementOracle(ObjectiveParams params, NoiseSpec noise, std::uint64_t seed);

  /// evaluate(params, x) plus one noise draw.
  double measure(double x);

  const ObjectiveParams& params() const noexcept { return params_; }
  const NoiseSpec& noise() const noexcept { return noise_; }

 private:
  ObjectiveParams params_;
  NoiseSpec noise_;
  Rng rng_;
};

}  // namespace regret_floor
