#include "regret_floor/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "regret_floor/bounds.hpp"
#include "regret_floor/errors.hpp"

namespace regret_floor {

void CheckpointSchedule::validate() const {
  if (!(geometric_ratio > 1.0) || !std::isfinite(geometric_ratio))
    throw ConfigError("geometric_ratio", "must be > 1");
}

std::vector<std::uint64_t> CheckpointSchedule::points(std::uint64_t horizon) const {
  std::vector<std::uint64_t> out;
  std::uint64_t t = 1;
  for (; t <= horizon && t <= dense_until; ++t) out.push_back(t);
  if (!out.empty()) t = out.back();
  while (t < horizon) {
    const auto grown = static_cast<std::uint64_t>(std::ceil(static_cast<double>(t) * geometric_ratio));
    t = std::min(horizon, std::max(t + 1, grown));
    out.push_back(t);
  }
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

void ExperimentConfig::validate() const {
  objective.validate();
  noise.validate();
  policy.validate();
  schedule.validate();
  if (init_queries.size() < 2)
    throw ConfigError("init_queries", "need at least two initial queries");
  for (double x : init_queries)
    if (!std::isfinite(x)) throw ConfigError("init_queries", "values must be finite");
  const auto [lo, hi] = std::minmax_element(init_queries.begin(), init_queries.end());
  if (!(*hi - *lo > 0.0))
    throw ConfigError("init_queries", "need at least two distinct values");
  if (horizon < init_queries.size())
    throw ConfigError("horizon", "must be at least the number of initial queries");
}

RunTrace run_single(const ExperimentConfig& config, std::uint64_t run_index, bool keep_query_log) {
  config.validate();
  const ObjectiveParams& f = config.objective;
  const double a = f.a;
  const double xstar = optimum(f).location;
  const std::uint64_t horizon = config.horizon;
  const std::uint64_t n_init = config.init_queries.size();
  const std::vector<std::uint64_t> marks = config.schedule.points(horizon);

  MeasurementOracle oracle(f, config.noise,
                           derive_seed(config.master_seed, run_index, Stream::measurement));
  Rng policy_rng(derive_seed(config.master_seed, run_index, Stream::policy));

  RunTrace trace;
  trace.run_index = run_index;
  trace.checkpoints.reserve(marks.size());
  if (keep_query_log) trace.query_log.reserve(horizon);

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  RegressionState state;
  double total = 0.0;
  double last_center = 0.0;
  std::size_t next_mark = 0;

  // t = number of measurements absorbed so far. x_T is proposed but not measured
  // so the final checkpoint carries both R_T and the query error at T.
  for (std::uint64_t t = 0; t <= horizon; ++t) {
    const std::optional<Estimate> est = try_fit(state, a, config.sigma_mode, config.noise.sigma2);
    if (est) last_center = est->xstar_hat;
    const double x = t < n_init ? config.init_queries[t]
                                : next_query(config.policy, est, last_center, policy_rng);
    const double d = x - xstar;
    const double sq = d * d;
    const double inst = a * sq;

    if (next_mark < marks.size() && marks[next_mark] == t) {
      trace.checkpoints.push_back({t, x, est ? est->xstar_hat : nan, est ? est->stderr_xstar : nan,
                                   sq, inst, total, state.sxx()});
      ++next_mark;
    }
    if (t == horizon) break;

    state.absorb(x, oracle.measure(x), a);
    total += inst;
    if (keep_query_log) trace.query_log.push_back(x);
  }
  trace.final_total_regret = total;
  return trace;
}

std::vector<RunTrace> run_traces(const ExperimentConfig& config, std::uint64_t n_runs, int threads) {
  config.validate();
  std::vector<RunTrace> out(n_runs);
  const int workers = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(n_runs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_single(config, static_cast<std::uint64_t>(i));
  }
  return out;
}

std::vector<RunTrace> run_traces_serial(const ExperimentConfig& config, std::uint64_t n_runs) {
  std::vector<RunTrace> out;
  out.reserve(n_runs);
  for (std::uint64_t i = 0; i < n_runs; ++i) out.push_back(run_single(config, i));
  return out;
}

namespace {

struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) noexcept {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  // Sample standard deviation; 0 for a single run.
  double sd() const noexcept { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0; }
};

}  // namespace

Aggregate aggregate_traces(const ExperimentConfig& config, std::span<const RunTrace> traces) {
  Aggregate agg;
  agg.n_runs = traces.size();
  if (traces.empty()) return agg;
  const std::size_t rows = traces.front().checkpoints.size();
  for (const RunTrace& tr : traces)
    if (tr.checkpoints.size() != rows)
      throw std::invalid_argument("traces have different checkpoint schedules");

  const double a = config.objective.a;
  const double sigma = std::sqrt(config.noise.sigma2);
  agg.checkpoints.reserve(rows);
  for (std::size_t k = 0; k < rows; ++k) {
    Moments sq, reg;
    for (const RunTrace& tr : traces) {
      sq.add(tr.checkpoints[k].sq_err);
      reg.add(tr.checkpoints[k].total_regret);
    }
    const std::uint64_t t = traces.front().checkpoints[k].t;
    const auto td = static_cast<double>(t);
    const OptimalAsymptotics asym = optimal_asymptotics(a, sigma, td);
    agg.checkpoints.push_back({t, sq.mean, sq.sd(), reg.mean, reg.sd(),
                               sq_err_lower_bound(a, sigma, td), total_regret_lower_bound(sigma, td),
                               asym.sq_err, asym.regret});
  }
  return agg;
}

Aggregate run_montecarlo(const ExperimentConfig& config, std::uint64_t n_runs, int threads) {
  if (n_runs < 1) throw ConfigError("n_runs", "must be >= 1");
  const std::vector<RunTrace> traces = run_traces(config, n_runs, threads);
  return aggregate_traces(config, traces);
}

std::vector<SweepRow> sweep_p(const ExperimentConfig& base, std::span<const PolicyConfig> policies,
                              std::uint64_t n_runs, int threads) {
  if (policies.empty()) throw ConfigError("p_list", "must not be empty");
  if (n_runs < 1) throw ConfigError("n_runs", "must be >= 1");
  std::vector<SweepRow> rows;
  rows.reserve(policies.size());
  for (const PolicyConfig& policy : policies) {
    ExperimentConfig cfg = base;
    cfg.policy = policy;
    cfg.policy.fallback_variance = base.policy.fallback_variance;
    cfg.policy.injection = base.policy.injection;
    // Only the final regret is needed.
    cfg.schedule.dense_until = 0;
    cfg.schedule.geometric_ratio = 2.0;
    const std::vector<RunTrace> traces = run_traces(cfg, n_runs, threads);
    Moments m;
    for (const RunTrace& tr : traces) m.add(tr.final_total_regret);
    rows.push_back({cfg.policy.label(), cfg.policy, m.mean, m.sd(), n_runs});
  }
  return rows;
}

FitWindow default_window(std::uint64_t horizon) noexcept {
  const auto h = static_cast<double>(horizon);
  return {h / 100.0, h};
}

ExponentFit fit_exponent(std::span<const double> t, std::span<const double> values,
                         FitWindow window) {
  if (t.size() != values.size()) throw std::invalid_argument("t and values differ in length");
  RegressionState loglog;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.t_min || t[i] > window.t_max) continue;
    if (!(values[i] > 0.0))
      throw ExponentFitError(ExponentFitErrc::non_positive_value,
                             "value at t=" + std::to_string(t[i]) + " is not positive");
    loglog.absorb_transformed(std::log(t[i]), std::log(values[i]));
  }
  if (loglog.n() < 5 || !(loglog.sxx() > 0.0))
    throw ExponentFitError(ExponentFitErrc::empty_window,
                           "fewer than 5 distinct checkpoints inside the fit window");
  ExponentFit out;
  out.r_hat = loglog.sxz() / loglog.sxx();
  out.k_hat = std::exp(loglog.mean_z() - out.r_hat * loglog.mean_x());
  out.window = window;
  double rss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.t_min || t[i] > window.t_max) continue;
    const double r = std::log(values[i]) - std::log(out.k_hat) - out.r_hat * std::log(t[i]);
    rss += r * r;
  }
  out.residual_rms = std::sqrt(rss / static_cast<double>(loglog.n()));
  out.n_points = loglog.n();
  return out;
}

ExponentFit fit_exponent(const Aggregate& aggregate, Series series, FitWindow window) {
  std::vector<double> t, v;
  t.reserve(aggregate.checkpoints.size());
  v.reserve(aggregate.checkpoints.size());
  for (const AggregateRow& row : aggregate.checkpoints) {
    t.push_back(static_cast<double>(row.t));
    v.push_back(series == Series::sq_err ? row.mean_sq_err : row.mean_regret);
  }
  return fit_exponent(t, v, window);
}

}  // namespace regret_floor
