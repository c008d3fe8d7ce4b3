#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "regret_floor/errors.hpp"
#include "regret_floor/estimator.hpp"
#include "regret_floor/model.hpp"

using namespace regret_floor;

namespace {

RegressionState absorb_all(const std::vector<double>& x, const std::vector<double>& z) {
  RegressionState s;
  for (std::size_t i = 0; i < x.size(); ++i) s.absorb_transformed(x[i], z[i]);
  return s;
}

FitErrc fit_error_code(const RegressionState& s, SigmaMode mode) {
  try {
    fit(s, 1.0, mode, 1.0);
  } catch (const FitError& e) {
    return e.code();
  }
  FAIL("fit did not throw");
  return FitErrc::no_leverage;
}

}  // namespace

TEST_CASE("absorb: hand-computed sums") {
  SUBCASE("noiseless symmetric pair") {
    RegressionState s;
    for (double x : {-1.0, 1.0}) s.absorb(x, -x * x, 1.0);
    CHECK(s.sxx() == 2.0);
    CHECK(s.sxz() == 0.0);
    CHECK(s.mean_z() == 0.0);
  }
  SUBCASE("exact line") {
    const RegressionState s = absorb_all({0, 1, 2}, {1, 3, 5});
    CHECK(s.n() == 3);
    CHECK(s.mean_x() == 1.0);
    CHECK(s.sxx() == 2.0);
    CHECK(s.sxz() == 4.0);
    CHECK(s.szz() == 8.0);
  }
}

TEST_CASE("absorb: order does not matter and matches the two-pass batch") {
  std::mt19937_64 gen(123);
  std::normal_distribution<double> nx(0.3, 2.0), nz(1.0, 4.0);
  std::vector<double> x(1000), z(1000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = nx(gen);
    z[i] = nz(gen) + 0.5 * x[i];
  }
  const RegressionState forward = absorb_all(x, z);

  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), gen);
  RegressionState shuffled;
  for (std::size_t i : idx) shuffled.absorb_transformed(x[i], z[i]);

  const oracle::BatchFit batch = oracle::batch_fit(x, z);
  CHECK(oracle::rel_err(forward.sxx(), shuffled.sxx()) < 1e-9);
  CHECK(oracle::rel_err(forward.sxx(), static_cast<double>(batch.sxx)) < 1e-9);
  CHECK(oracle::rel_err(forward.sxz(), static_cast<double>(batch.sxz)) < 1e-9);
  CHECK(oracle::rel_err(forward.szz(), static_cast<double>(batch.szz)) < 1e-9);
  CHECK(oracle::rel_err(forward.mean_x(), static_cast<double>(batch.mean_x)) < 1e-9);
}

TEST_CASE("absorb: incremental equals batch at 10^6 nearly coincident queries") {
  // Queries clustered tightly away from the origin: the case raw power sums get wrong.
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> jitter(0.0, 1e-3), noise(0.0, 1.0);
  const std::size_t n = 1'000'000;
  std::vector<double> x(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 50.0 + jitter(gen);
    z[i] = 3.0 * x[i] + 2.0 + noise(gen);
  }
  const RegressionState s = absorb_all(x, z);
  const oracle::BatchFit batch = oracle::batch_fit(x, z);
  CHECK(oracle::rel_err(s.mean_x(), static_cast<double>(batch.mean_x)) < 1e-9);
  CHECK(oracle::rel_err(s.sxx(), static_cast<double>(batch.sxx)) < 1e-9);
  CHECK(oracle::rel_err(s.sxz(), static_cast<double>(batch.sxz)) < 1e-9);
  const Estimate e = fit(s, 1.0, SigmaMode::known, 1.0);
  CHECK(oracle::rel_err(e.b_hat, static_cast<double>(batch.slope)) < 1e-9);
}

TEST_CASE("regression state: Cauchy-Schwarz and non-negativity over random data") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> len(2, 60);
  for (int rep = 0; rep < 500; ++rep) {
    RegressionState s;
    const int n = len(gen);
    const double slope = u(gen);
    for (int i = 0; i < n; ++i) {
      const double x = u(gen);
      s.absorb_transformed(x, slope * x + (rep % 2 ? u(gen) : 0.0));
      CHECK(s.sxx() >= 0.0);
      CHECK(s.szz() >= 0.0);
      CHECK(s.sxz() * s.sxz() <= s.sxx() * s.szz() * (1.0 + 1e-9) + 1e-300);
    }
  }
}

TEST_CASE("fit: exact line with known sigma") {
  const RegressionState s = absorb_all({0, 1, 2}, {1, 3, 5});
  const Estimate e = fit(s, 1.0, SigmaMode::known, 4.0);
  CHECK(e.b_hat == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(e.c_hat == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.xstar_hat == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.var_b == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(e.var_xstar == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.stderr_xstar == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(e.sigma2_used == 4.0);
  CHECK(e.n == 3);
}

TEST_CASE("fit: symmetric noiseless design gives the optimum exactly") {
  RegressionState s;
  const ObjectiveParams f{1, 0, 0};
  for (double x : {-1.0, 1.0}) s.absorb(x, evaluate(f, x), f.a);
  CHECK(fit(s, 1.0, SigmaMode::known, 1.0).xstar_hat == 0.0);
}

TEST_CASE("fit: chain identities are exact") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ua(0.2, 4.0);
  for (int rep = 0; rep < 200; ++rep) {
    RegressionState s;
    for (int i = 0; i < 10; ++i) s.absorb_transformed(u(gen), u(gen));
    const double a = ua(gen);
    const Estimate e = fit(s, a, rep % 2 ? SigmaMode::known : SigmaMode::residual, 1.7);
    CHECK(e.xstar_hat == e.b_hat / (2.0 * a));
    CHECK(e.var_xstar == e.var_b / (4.0 * a * a));
    CHECK(e.stderr_xstar == std::sqrt(e.var_xstar));
  }
}

TEST_CASE("fit: error paths") {
  RegressionState one;
  one.absorb_transformed(1.0, 2.0);
  CHECK(fit_error_code(one, SigmaMode::known) == FitErrc::insufficient_data);
  CHECK_FALSE(try_fit(one, 1.0, SigmaMode::known, 1.0).has_value());

  RegressionState coincident;
  for (int i = 0; i < 5; ++i) coincident.absorb_transformed(0.25, 1.0 * i);
  CHECK(fit_error_code(coincident, SigmaMode::known) == FitErrc::no_leverage);
  CHECK_FALSE(try_fit(coincident, 1.0, SigmaMode::known, 1.0).has_value());

  RegressionState two = absorb_all({0, 1}, {0, 1});
  CHECK(try_fit(two, 1.0, SigmaMode::known, 1.0).has_value());
  CHECK(fit_error_code(two, SigmaMode::residual) == FitErrc::insufficient_data);
}

TEST_CASE("fit: Monte Carlo replications attain the Cramer-Rao variance without bias") {
  // Design {-1, 0, 1}: S_xx = 2, so var(b_hat) = sigma^2 / 2.
  const ObjectiveParams f{1.0, 0.7, -0.4};
  const std::vector<double> design{-1.0, 0.0, 1.0};
  constexpr int kReps = 10'000;
  std::vector<double> b(kReps);
  MeasurementOracle oracle(f, {1.0, NoiseDistribution::gaussian}, 31337);
  for (int r = 0; r < kReps; ++r) {
    RegressionState s;
    for (double x : design) s.absorb(x, oracle.measure(x), f.a);
    b[r] = fit(s, f.a, SigmaMode::known, 1.0).b_hat;
  }
  const oracle::Stats st = oracle::sample_stats(b);
  CHECK(std::fabs(st.var - 0.5) <= 0.05);
  CHECK(std::fabs(st.mean - f.b) <= 4.0 * std::sqrt(0.5 / kReps));
}

TEST_CASE("residual_sigma2") {
  SUBCASE("exact line clamps to the floor") {
    const RegressionState s = absorb_all({0, 1, 2, 3, 4}, {1, 3, 5, 7, 9});
    CHECK(residual_sigma2(s) == kSigma2Floor);
  }
  SUBCASE("consistent for the generating variance") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    RegressionState s;
    for (int i = 0; i < 100'000; ++i) {
      const double x = ux(gen);
      s.absorb_transformed(x, 1.5 * x - 0.5 + noise(gen));
    }
    CHECK(std::fabs(residual_sigma2(s) - 1.0) <= 0.02);
  }
  SUBCASE("needs three points") {
    const RegressionState s = absorb_all({0, 1}, {0, 1});
    CHECK_THROWS_AS(residual_sigma2(s), FitError);
  }
  SUBCASE("residual mode reports the estimate it used") {
    const RegressionState s = absorb_all({0, 1, 2, 3}, {0.1, 0.9, 2.2, 2.8});
    const Estimate e = fit(s, 2.0, SigmaMode::residual, 123.0);
    CHECK(e.sigma2_used == residual_sigma2(s));
  }
}

TEST_CASE("leverage_about") {
  const std::vector<double> pair{-1.0, 1.0};
  CHECK(leverage_about(pair, 0.0) == 2.0);
  CHECK(leverage_about(pair, 0.5) > leverage_about(pair, 0.0));
}

TEST_CASE("leverage about the sample mean is minimal over all centers") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> len(1, 100);

  // One fixed set of 100 queries against 50 centers, then random sets.
  std::vector<double> q(100);
  for (double& v : q) v = u(gen);
  long double mean = 0;
  for (double v : q) mean += v;
  mean /= q.size();
  const double at_mean = leverage_about(q, static_cast<double>(mean));
  CHECK(oracle::rel_err(at_mean, static_cast<double>(oracle::brute_leverage(q, mean))) < 1e-12);
  for (int c = 0; c < 50; ++c) CHECK(at_mean <= leverage_about(q, u(gen)) + 1e-9);

  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> xs(len(gen));
    for (double& v : xs) v = u(gen);
    RegressionState s;
    for (double v : xs) s.absorb_transformed(v, 0.0);
    const double center = u(gen);
    CHECK(s.sxx() <= leverage_about(xs, center) + 1e-9);
  }
}
