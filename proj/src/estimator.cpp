#include "regret_floor/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "regret_floor/errors.hpp"

namespace regret_floor {

void RegressionState::absorb_transformed(double x, double z) noexcept {
  ++n_;
  const double inv_n = 1.0 / static_cast<double>(n_);
  const double dx = x - mean_x_;
  const double dz = z - mean_z_;
  mean_x_ += dx * inv_n;
  mean_z_ += dz * inv_n;
  // Co-moment updates use the old deviation times the new one.
  sxx_ += dx * (x - mean_x_);
  sxz_ += dx * (z - mean_z_);
  szz_ += dz * (z - mean_z_);
}

namespace {

enum class FitStatus { ok, no_leverage, insufficient_data };

FitStatus check(const RegressionState& s, SigmaMode mode) noexcept {
  const std::uint64_t min_n = mode == SigmaMode::residual ? 3 : 2;
  if (s.n() < min_n) return FitStatus::insufficient_data;
  if (!(s.sxx() > kLeverageFloor)) return FitStatus::no_leverage;
  return FitStatus::ok;
}

double residual_unchecked(const RegressionState& s) noexcept {
  const double rss = s.szz() - s.sxz() * s.sxz() / s.sxx();
  return std::max(rss / static_cast<double>(s.n() - 2), kSigma2Floor);
}

Estimate fit_unchecked(const RegressionState& s, double a, SigmaMode mode,
                       double known_sigma2) noexcept {
  Estimate e;
  e.n = s.n();
  e.b_hat = s.sxz() / s.sxx();
  e.c_hat = s.mean_z() - e.b_hat * s.mean_x();
  e.xstar_hat = e.b_hat / (2.0 * a);
  e.sigma2_used = mode == SigmaMode::known ? known_sigma2 : residual_unchecked(s);
  e.var_b = e.sigma2_used / s.sxx();
  e.var_xstar = e.var_b / (4.0 * a * a);
  e.stderr_xstar = std::sqrt(e.var_xstar);
  return e;
}

}  // namespace

Estimate fit(const RegressionState& state, double a, SigmaMode mode, double known_sigma2) {
  switch (check(state, mode)) {
    case FitStatus::insufficient_data:
      throw FitError(FitErrc::insufficient_data,
                     "need at least " + std::to_string(mode == SigmaMode::residual ? 3 : 2) +
                         " measurements, have " + std::to_string(state.n()));
    case FitStatus::no_leverage:
      throw FitError(FitErrc::no_leverage, "queries are coincident; slope is not identifiable");
    case FitStatus::ok:
      break;
  }
  return fit_unchecked(state, a, mode, known_sigma2);
}

std::optional<Estimate> try_fit(const RegressionState& state, double a, SigmaMode mode,
                                double known_sigma2) noexcept {
  if (check(state, mode) != FitStatus::ok) return std::nullopt;
  return fit_unchecked(state, a, mode, known_sigma2);
}

double residual_sigma2(const RegressionState& state) {
  if (state.n() < 3)
    throw FitError(FitErrc::insufficient_data, "residual variance needs at least 3 measurements");
  if (!(state.sxx() > kLeverageFloor))
    throw FitError(FitErrc::no_leverage, "queries are coincident; residual is undefined");
  return residual_unchecked(state);
}

double leverage_about(std::span<const double> queries, double center) noexcept {
  double sum = 0.0;
  for (double x : queries) sum += (x - center) * (x - center);
  return sum;
}

}  // namespace regret_floor
