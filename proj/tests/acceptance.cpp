// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "regret_floor/bounds.hpp"
#include "regret_floor/cli.hpp"
#include "regret_floor/estimator.hpp"
#include "regret_floor/experiment.hpp"
#include "regret_floor/model.hpp"

using namespace regret_floor;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig reference_config(std::uint64_t horizon, PolicyConfig policy) {
  ExperimentConfig c;  // sigma2 = a = 1, b = c = 0, init {-1, +1}
  c.horizon = horizon;
  c.policy = policy;
  return c;
}

Outcome estimator_exactness() {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const ObjectiveParams f{1.0, 0.0, 0.0};
  std::vector<double> x, z;
  while (x.size() < 100) {
    const double v = u(gen);
    if (std::find(x.begin(), x.end(), v) == x.end()) x.push_back(v);
  }
  RegressionState s;
  for (double xi : x) {
    const double y = evaluate(f, xi);
    s.absorb(xi, y, f.a);
    z.push_back(y + f.a * xi * xi);
  }
  const Estimate e = fit(s, f.a, SigmaMode::known, 1.0);
  const oracle::BatchFit batch = oracle::batch_fit(x, z);
  const double batch_xstar = static_cast<double>(batch.slope) / (2.0 * f.a);
  const double worst = std::max({std::fabs(e.b_hat), std::fabs(e.c_hat), std::fabs(e.xstar_hat),
                                 std::fabs(static_cast<double>(batch.slope)),
                                 std::fabs(static_cast<double>(batch.intercept)), std::fabs(batch_xstar)});
  return {worst <= 1e-9, fmt("max |b|,|c|,|x*| over incremental+batch = %.3g (tol 1e-9)", worst)};
}

Outcome cramer_rao() {
  const ObjectiveParams f{1.0, 0.0, 0.0};
  MeasurementOracle o(f, {1.0, NoiseDistribution::gaussian}, 2718);
  std::vector<double> b(10'000);
  for (double& bi : b) {
    RegressionState s;
    for (double x : {-1.0, 0.0, 1.0}) s.absorb(x, o.measure(x), f.a);
    bi = fit(s, f.a, SigmaMode::known, 1.0).b_hat;
  }
  const double var = oracle::sample_stats(b).var;
  return {std::fabs(var - 0.5) <= 0.05, fmt("var(b_hat) = %.4f, target 0.5 +- 10%%", var)};
}

Outcome leverage_inequality() {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> len(1, 200);
  int violations = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> q(len(gen));
    for (double& v : q) v = u(gen);
    RegressionState s;
    for (double v : q) s.absorb_transformed(v, 0.0);
    if (s.sxx() > leverage_about(q, u(gen)) + 1e-9) ++violations;
  }
  return {violations == 0, fmt("%d violations in 1000 sets", violations)};
}

Outcome floor_compliance() {
  std::string detail;
  bool ok = true;
  for (double p : {0.8, 2.0, 3.6}) {
    const Aggregate agg = run_montecarlo(reference_config(10'000, PolicyConfig::stochastic(p)), 100);
    double min_sq = INFINITY, min_rg = INFINITY;
    for (const AggregateRow& r : agg.checkpoints) {
      if (r.t < 100) continue;
      min_sq = std::min(min_sq, r.mean_sq_err / r.bound_sq_err);
      min_rg = std::min(min_rg, r.mean_regret / r.bound_regret);
    }
    ok = ok && min_sq >= 0.9 && min_rg >= 0.9;
    detail += fmt("p=%g min ratio sq=%.3f regret=%.3f; ", p, min_sq, min_rg);
  }
  return {ok, detail + "(need >= 0.9)"};
}

Outcome optimal_asymptotics_check() {
  const Aggregate agg = run_montecarlo(reference_config(100'000, PolicyConfig::stochastic(2.0)), 100);
  const ExponentFit sq = fit_exponent(agg, Series::sq_err, {1e3, 1e5});
  const ExponentFit rg = fit_exponent(agg, Series::regret, {1e3, 1e5});
  const AggregateRow& last = agg.checkpoints.back();
  const double ratio = last.mean_regret / optimal_asymptotics(1.0, 1.0, static_cast<double>(last.t)).regret;
  const bool ok = sq.r_hat >= -0.65 && sq.r_hat <= -0.35 && rg.r_hat >= 0.35 && rg.r_hat <= 0.65 &&
                  ratio >= 0.5 && ratio <= 2.0;
  return {ok, fmt("sq_err exponent %.3f in [-0.65,-0.35]; regret exponent %.3f in [0.35,0.65]; "
                  "R_t/(sigma sqrt(8t)) at t=1e5 = %.3f in [0.5,2]",
                  sq.r_hat, rg.r_hat, ratio)};
}

Outcome sweep_orderings() {
  const std::vector<PolicyConfig> ps{PolicyConfig::greedy(), PolicyConfig::stochastic(0.8),
                                     PolicyConfig::stochastic(2.0), PolicyConfig::stochastic(3.6)};
  const auto rows = sweep_p(reference_config(1'000'000, PolicyConfig::stochastic(2.0)), ps, 100);
  const double greedy = rows[0].mean_total_regret, p08 = rows[1].mean_total_regret,
               p2 = rows[2].mean_total_regret, p36 = rows[3].mean_total_regret;
  const bool greedy_max = greedy > p08 && greedy > p2 && greedy > p36;
  const bool greedy_5x = greedy >= 5.0 * p2;
  const bool low_p_worse = p08 > p2;
  const double target = std::sqrt(8.0 * 1e6);
  const bool near_asym = p2 >= target / 2.0 && p2 <= 2.0 * target;
  return {greedy_max && greedy_5x && low_p_worse && near_asym,
          fmt("means greedy=%.1f p0.8=%.1f p2=%.1f p3.6=%.1f | greedy max:%s, >=5x p2:%s, "
              "p0.8>p2:%s, p2 in [%.1f,%.1f]:%s",
              greedy, p08, p2, p36, greedy_max ? "yes" : "NO", greedy_5x ? "yes" : "NO",
              low_p_worse ? "yes" : "NO", target / 2, 2 * target, near_asym ? "yes" : "NO")};
}

Outcome greedy_pathology() {
  const auto greedy = run_traces(reference_config(10'000, PolicyConfig::greedy()), 100);
  const auto p2 = run_traces(reference_config(10'000, PolicyConfig::stochastic(2.0)), 100);
  const ExperimentConfig gc = reference_config(10'000, PolicyConfig::greedy());
  const ExponentFit f = fit_exponent(aggregate_traces(gc, greedy), Series::regret, {1e3, 1e4});
  double p2_err = 0.0;
  for (const RunTrace& tr : p2) p2_err += std::fabs(tr.checkpoints.back().xstar_hat);
  p2_err /= static_cast<double>(p2.size());
  int far = 0;
  for (const RunTrace& tr : greedy)
    if (std::fabs(tr.checkpoints.back().xstar_hat) > 10.0 * p2_err) ++far;
  const bool ok = f.r_hat >= 0.85 && f.r_hat <= 1.15 && far >= 95;
  return {ok, fmt("greedy regret exponent %.3f in [0.85,1.15]; %d/100 runs with |x*_hat - x*| > "
                  "10 x %.4f (need >= 95)",
                  f.r_hat, far, p2_err)};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("regret_floor_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const int max_workers = std::max(4, omp_get_num_procs());
  auto run = [&](int threads, const std::string& sub) {
    std::ostringstream out, err;
    return cli::run({"montecarlo", "--horizon", "10000", "--runs", "100", "--seed", "77", "--threads",
                     std::to_string(threads), "--out", (root / sub).string()},
                    out, err);
  };
  const int c1 = run(1, "one"), cn = run(max_workers, "many");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string a = slurp(root / "one" / "aggregate.csv"), b = slurp(root / "many" / "aggregate.csv");
  fs::remove_all(root);
  const bool ok = c1 == 0 && cn == 0 && !a.empty() && a == b;
  return {ok, fmt("aggregate.csv %zu bytes, 1 vs %d workers %s", a.size(), max_workers,
                  a == b ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "estimator exactness", 1.0, estimator_exactness},
      {2, "Cramer-Rao attainment", 5.0, cramer_rao},
      {3, "leverage inequality", 1.0, leverage_inequality},
      {4, "lower-bound compliance", 60.0, floor_compliance},
      {5, "p=2 asymptotics", 120.0, optimal_asymptotics_check},
      {6, "p sweep orderings", 600.0, sweep_orderings},
      {7, "greedy pathology", 60.0, greedy_pathology},
      {8, "determinism across workers", 60.0, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] %d. %s: %s; %.2fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.time_limit_s, in_time ? "" : " OVER TIME");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
