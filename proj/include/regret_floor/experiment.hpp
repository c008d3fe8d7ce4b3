#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regret_floor/estimator.hpp"
#include "regret_floor/model.hpp"
#include "regret_floor/policy.hpp"

namespace regret_floor {

/// Every t in [1, dense_until], then t grows geometrically; the horizon is
/// always included.
struct CheckpointSchedule {
  std::uint64_t dense_until = 1000;
  double geometric_ratio = 1.02;

  void validate() const;
  std::vector<std::uint64_t> points(std::uint64_t horizon) const;
};

struct ExperimentConfig {
  ObjectiveParams objective;
  NoiseSpec noise;
  PolicyConfig policy;
  SigmaMode sigma_mode = SigmaMode::known;
  std::vector<double> init_queries{-1.0, 1.0};
  std::uint64_t horizon = 10000;  // number of measured queries T
  CheckpointSchedule schedule;
  std::uint64_t master_seed = 20260101;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// State at time t, i.e. after t measurements. `x` is the query x_t chosen
/// from those t measurements and `total_regret` is R_t, the regret of the t
/// queries already made (x_t itself is not yet included).
struct Checkpoint {
  std::uint64_t t;
  double x;
  double xstar_hat;     // NaN while no fit exists
  double stderr_xstar;  // NaN while no fit exists
  double sq_err;        // (x_t - x*)^2
  double inst_regret;   // a (x_t - x*)^2
  double total_regret;  // R_t
  double leverage;      // S_xx after t measurements
};

struct RunTrace {
  std::uint64_t run_index = 0;
  std::vector<Checkpoint> checkpoints;
  double final_total_regret = 0.0;  // R_T
  /// Every measured query x_0 .. x_{T-1}; filled only on request.
  std::vector<double> query_log;
};

struct AggregateRow {
  std::uint64_t t;
  double mean_sq_err;
  double std_sq_err;
  double mean_regret;
  double std_regret;
  double bound_sq_err;
  double bound_regret;
  double asym_sq_err;
  double asym_regret;
};

struct Aggregate {
  std::vector<AggregateRow> checkpoints;
  std::uint64_t n_runs = 0;
};

/// One run. Streams are derived from (master_seed, run_index) only.
RunTrace run_single(const ExperimentConfig& config, std::uint64_t run_index,
                    bool keep_query_log = false);

/// Runs 0 .. n_runs-1 with OpenMP. `threads` == 0 lets the runtime choose.
/// Output does not depend on the thread count.
std::vector<RunTrace> run_traces(const ExperimentConfig& config, std::uint64_t n_runs,
                                 int threads = 0);

/// Serial reference for run_traces.
std::vector<RunTrace> run_traces_serial(const ExperimentConfig& config, std::uint64_t n_runs);

/// Mean and sample standard deviation (n - 1) per checkpoint, accumulated in
/// run_index order, with bound curves attached.
Aggregate aggregate_traces(const ExperimentConfig& config, std::span<const RunTrace> traces);

Aggregate run_montecarlo(const ExperimentConfig& config, std::uint64_t n_runs, int threads = 0);

struct SweepRow {
  std::string label;  // "greedy" or the exponent
  PolicyConfig policy;
  double mean_total_regret;
  double std_total_regret;
  std::uint64_t n_runs;
};

/// One ensemble per policy, all with the same per-run seeds.
std::vector<SweepRow> sweep_p(const ExperimentConfig& base, std::span<const PolicyConfig> policies,
                              std::uint64_t n_runs, int threads = 0);

enum class Series { sq_err, regret };

struct FitWindow {
  double t_min;
  double t_max;
};

/// Upper two decades of the horizon: [horizon / 100, horizon].
FitWindow default_window(std::uint64_t horizon) noexcept;

struct ExponentFit {
  double r_hat;
  double k_hat;
  FitWindow window;
  double residual_rms;  // of log(value)
  std::uint64_t n_points;
};

/// OLS of log(value) on log(t) over points with t inside the window.
/// Throws ExponentFitError(empty_window) for fewer than 5 points and
/// ExponentFitError(non_positive_value) if any value in the window is <= 0.
ExponentFit fit_exponent(std::span<const double> t, std::span<const double> values,
                         FitWindow window);
ExponentFit fit_exponent(const Aggregate& aggregate, Series series, FitWindow window);

}  // namespace regret_floor
