#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace regret_floor {

/// S_xx at or below this is treated as zero leverage.
inline constexpr double kLeverageFloor = 1e-12;
/// Lower clamp for the residual-based noise variance.
inline constexpr double kSigma2Floor = 1e-12;

enum class SigmaMode {
  known,     // use the configured measurement-noise variance
  residual,  // estimate it from the line-fit residuals
};

/// Sufficient statistics of the line fit z = b x + c, where z = y + a x^2
/// removes the known curvature from each measurement y. Updates are centered
/// (Welford-style co-moments), O(1) per point.
class RegressionState {
 public:
  /// Folds in measurement y taken at x under known curvature a.
  void absorb(double x, double y, double a) noexcept { absorb_transformed(x, y + a * x * x); }
  void absorb_transformed(double x, double z) noexcept;

  std::uint64_t n() const noexcept { return n_; }
  double mean_x() const noexcept { return mean_x_; }
  double mean_z() const noexcept { return mean_z_; }
  double sxx() const noexcept { return sxx_; }
  double sxz() const noexcept { return sxz_; }
  double szz() const noexcept { return szz_; }

 private:
  std::uint64_t n_ = 0;
  double mean_x_ = 0.0;
  double mean_z_ = 0.0;
  double sxx_ = 0.0;
  double sxz_ = 0.0;
  double szz_ = 0.0;
};

struct Estimate {
  double b_hat;
  double c_hat;
  double xstar_hat;     // b_hat / 2a
  double var_b;         // sigma2_used / S_xx
  double var_xstar;     // var_b / 4a^2
  double stderr_xstar;  // sqrt(var_xstar)
  double sigma2_used;
  std::uint64_t n;
};

/// Unbiased estimate of the optimum. Throws FitError(no_leverage) when
/// S_xx <= kLeverageFloor and FitError(insufficient_data) when n < 2
/// (n < 3 in residual mode). `known_sigma2` is ignored in residual mode.
Estimate fit(const RegressionState& state, double a, SigmaMode mode, double known_sigma2);

/// As fit(), but reports failure as nullopt. Used on the per-step path.
std::optional<Estimate> try_fit(const RegressionState& state, double a, SigmaMode mode,
                                double known_sigma2) noexcept;

/// (S_zz - S_xz^2 / S_xx) / (n - 2), clamped below by kSigma2Floor.
double residual_sigma2(const RegressionState& state);

/// Sum of (x - center)^2.
double leverage_about(std::span<const double> queries, double center) noexcept;

}  // namespace regret_floor
