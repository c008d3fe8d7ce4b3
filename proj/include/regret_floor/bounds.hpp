#pragma once

namespace regret_floor {

// Closed-form lower bounds and the asymptotics of the p = 2 stochastic
// policy. `t` is the number of measurements made before the query, t >= 1.

struct BoundInputs {
  double a = 1.0;
  double sigma = 1.0;  // standard deviation, not variance
  double t = 1.0;

  void validate() const;
};

struct AsymptoticConstants {
  double r;   // exponent of the query deviation; squared error goes as t^{2r}
  double k2;  // sigma / (sqrt(8) a)
};

/// sigma / (sqrt(8) a) * t^{-1/2}
double sq_err_lower_bound(double a, double sigma, double t) noexcept;
inline double sq_err_lower_bound(const BoundInputs& in) noexcept {
  return sq_err_lower_bound(in.a, in.sigma, in.t);
}

/// sigma / sqrt(8) * t^{-1/2}; curvature cancels.
double inst_regret_lower_bound(double sigma, double t) noexcept;

/// sigma / sqrt(2) * t^{1/2}
double total_regret_lower_bound(double sigma, double t) noexcept;

AsymptoticConstants asymptotic_constants(double a, double sigma) noexcept;

struct OptimalAsymptotics {
  double sq_err;  // sqrt(2) sigma / a * t^{-1/2}
  double regret;  // sigma sqrt(8 t)
};

OptimalAsymptotics optimal_asymptotics(double a, double sigma, double t) noexcept;
inline OptimalAsymptotics optimal_asymptotics(const BoundInputs& in) noexcept {
  return optimal_asymptotics(in.a, in.sigma, in.t);
}

}  // namespace regret_floor
