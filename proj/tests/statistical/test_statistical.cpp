// Copyright 2026 The abc-rates Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Monte Carlo invariants of the sampler against the closed-form oracles.
// These run tens of millions of proposals; all tolerances are 3 standard
// errors (or wider) at fixed seeds.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "abcr/analysis.hpp"
#include "abcr/toy_gaussian.hpp"

namespace {

const std::vector<double> kSStar = {1.0, 1.0};

unsigned workers() {
  return std::max(2u, std::thread::hardware_concurrency());
}

}  // namespace

TEST_CASE("marginal summary covariance matches [[2,1],[1,2]]") {
  const auto model = abcr::toy::toy_model();
  abcr::Rng rng(1001);
  const int n = 1'000'000;
  double s11 = 0.0, s22 = 0.0, s12 = 0.0, m1 = 0.0, m2 = 0.0;
  double theta[1], data[2], summary[2];
  for (int i = 0; i < n; ++i) {
    model.prior_sample(rng, theta);
    model.simulate(theta, rng, data);
    model.summary(data, summary);
    m1 += summary[0];
    m2 += summary[1];
    s11 += summary[0] * summary[0];
    s22 += summary[1] * summary[1];
    s12 += summary[0] * summary[1];
  }
  m1 /= n;
  m2 /= n;
  const double c11 = s11 / n - m1 * m1;
  const double c22 = s22 / n - m2 * m2;
  const double c12 = s12 / n - m1 * m2;
  // Var(s_i^2) = 2 Sigma_ii^2; Var(s_1 s_2) = Sigma_11 Sigma_22 + Sigma_12^2.
  const double se_diag = std::sqrt(8.0 / n);
  const double se_off = std::sqrt(5.0 / n);
  REQUIRE(std::abs(c11 - 2.0) <= 3.0 * se_diag);
  REQUIRE(std::abs(c22 - 2.0) <= 3.0 * se_diag);
  REQUIRE(std::abs(c12 - 1.0) <= 3.0 * se_off);
}

TEST_CASE("empirical acceptance rate and ball mean match the quadrature") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  const auto h = abcr::toy::make_indicator({-0.5, 0.5});
  const std::uint64_t n_hat = 1'000'000;
  for (double delta : {0.1, 0.3, 0.5, 1.0}) {
    const auto oracle = abcr::toy::ball_moments(kSStar, delta, {});
    abcr::AbcConfig cfg;
    cfg.s_star = kSStar;
    cfg.delta = delta;
    cfg.mode = abcr::FixedProposals{n_hat, 0.0};
    cfg.seed = abcr::derive_replicate_seed(2002, static_cast<std::uint64_t>(delta * 1000));
    const auto run = abcr::abc_rejection(model, norm, cfg);

    const double p_hat = static_cast<double>(run.n_accepted) / n_hat;
    const double se_p = std::sqrt(oracle.p_delta * (1.0 - oracle.p_delta) / n_hat);
    INFO("delta = " << delta);
    REQUIRE(std::abs(p_hat - oracle.p_delta) <= 3.0 * se_p);

    const double y_hat = abcr::posterior_estimate(run, h, 0.0);
    const double se_y =
        std::sqrt(oracle.sigma2_delta / static_cast<double>(run.n_accepted));
    REQUIRE(std::abs(y_hat - oracle.y_delta) <= 3.0 * se_y);
  }
}

TEST_CASE("proposal counts follow the sum-of-geometrics mean") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  const int n = 100;
  const int runs = 200;
  const double p = abcr::toy::ball_moments(kSStar, 0.1, {}).p_delta;

  const auto counts = abcr::run_replicates(
      static_cast<std::size_t>(runs), workers(), [&](std::size_t r) {
        abcr::AbcConfig cfg;
        cfg.s_star = kSStar;
        cfg.delta = 0.1;
        cfg.mode = abcr::FixedAccepted{n};
        cfg.seed = abcr::derive_replicate_seed(3003, r);
        return static_cast<double>(
            abcr::abc_rejection(model, norm, cfg).n_proposals);
      });
  const double mean_n = abcr::mean(counts);
  const double se = std::sqrt(n * (1.0 - p)) / p / std::sqrt(runs);
  REQUIRE(std::abs(mean_n - n / p) <= 3.0 * se);
}

TEST_CASE("expected cost of a fixed-acceptance run is a + b n / p") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  const abcr::CostModel cm{25.0, 2.0};
  const int n = 100;
  const int runs = 200;
  const double p = abcr::toy::ball_moments(kSStar, 0.3, {}).p_delta;

  const auto costs = abcr::run_replicates(
      static_cast<std::size_t>(runs), workers(), [&](std::size_t r) {
        abcr::AbcConfig cfg;
        cfg.s_star = kSStar;
        cfg.delta = 0.3;
        cfg.mode = abcr::FixedAccepted{n};
        cfg.seed = abcr::derive_replicate_seed(3113, r);
        return abcr::run_cost(abcr::abc_rejection(model, norm, cfg), cm);
      });
  const double expected = cm.a + cm.b * n / p;
  const double se = cm.b * std::sqrt(n * (1.0 - p)) / p / std::sqrt(runs);
  REQUIRE(std::abs(abcr::mean(costs) - expected) <= 3.0 * se);
}

TEST_CASE("estimates obey the law of large numbers at fixed tolerance") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  const auto h = abcr::toy::make_indicator({-0.5, 0.5});
  const auto oracle = abcr::toy::ball_moments(kSStar, 0.5, {});
  const int trials = 100;

  double previous_mean_abs = 1.0;
  for (int n : {100, 1000, 10000}) {
    const auto deviations = abcr::run_replicates(
        static_cast<std::size_t>(trials), workers(), [&](std::size_t r) {
          abcr::AbcConfig cfg;
          cfg.s_star = kSStar;
          cfg.delta = 0.5;
          cfg.mode = abcr::FixedAccepted{n};
          cfg.seed = abcr::derive_replicate_seed(4004 + n, r);
          const double estimate = abcr::posterior_estimate(
              abcr::abc_rejection(model, norm, cfg), h, 0.0);
          return std::abs(estimate - oracle.y_delta);
        });
    const double mean_abs = abcr::mean(deviations);
    REQUIRE(mean_abs < previous_mean_abs);
    previous_mean_abs = mean_abs;

    if (n == 10000) {
      const double bound = 4.0 * std::sqrt(oracle.sigma2_delta / n);
      const int within = static_cast<int>(std::count_if(
          deviations.begin(), deviations.end(),
          [&](double dev) { return dev <= bound; }));
      REQUIRE(within >= 95);
    }
  }
}

TEST_CASE("variance law and mse of the estimator at small delta") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  const auto h = abcr::toy::make_indicator({-0.5, 0.5});
  const double y = abcr::toy::posterior_interval_probability(kSStar, {});
  const auto oracle = abcr::toy::ball_moments(kSStar, 0.05, {});
  const int n = 200;
  const int k = 2000;

  const auto estimates = abcr::run_replicates(
      static_cast<std::size_t>(k), workers(), [&](std::size_t r) {
        abcr::AbcConfig cfg;
        cfg.s_star = kSStar;
        cfg.delta = 0.05;
        cfg.mode = abcr::FixedAccepted{n};
        cfg.seed = abcr::derive_replicate_seed(5005, r);
        return abcr::posterior_estimate(abcr::abc_rejection(model, norm, cfg),
                                        h, 0.0);
      });

  // n Var(Y) tends to Var(h | S = s*) = 0.2317 as delta shrinks.
  const double scaled_var = n * abcr::sample_variance(estimates);
  const double se_var = scaled_var * std::sqrt(2.0 / (k - 1));
  REQUIRE(std::abs(scaled_var - 0.2317) <= 3.0 * se_var);

  // And the mse matches sigma^2/n + (y_delta - y)^2 from the quadrature.
  std::vector<double> sq(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    sq[i] = (estimates[i] - y) * (estimates[i] - y);
  }
  const double mse = abcr::mean(sq);
  const double mse_oracle = oracle.sigma2_delta / n +
                            (oracle.y_delta - y) * (oracle.y_delta - y);
  REQUIRE(std::abs(mse - mse_oracle) <= 3.0 * abcr::standard_error(sq));
}

TEST_CASE("bias sweep means match the quadrature oracle") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  const auto h = abcr::toy::make_indicator({-0.5, 0.5});
  const double y = abcr::toy::posterior_interval_probability(kSStar, {});
  const double c = abcr::toy::bias_constant(kSStar, {});

  const auto rows = abcr::bias_sweep(model, norm, kSStar, h, {0.4, 0.6}, 500,
                                     5000, y, 6007, workers());
  for (const auto& row : rows) {
    const auto oracle = abcr::toy::ball_moments(kSStar, row.delta, {});
    INFO("delta = " << row.delta);
    REQUIRE(std::abs(row.mean_bias - (oracle.y_delta - y)) <=
            3.0 * row.std_error);
    const double parabola = c * row.delta * row.delta;
    REQUIRE(std::abs(row.mean_bias - parabola) <=
            std::max(3.0 * row.std_error, 0.15 * parabola));
  }
}

TEST_CASE("mse times n stabilizes under the n^{-1/4} schedule") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  const auto h = abcr::toy::make_indicator({-0.5, 0.5});
  const double y = abcr::toy::posterior_interval_probability(kSStar, {});
  const double c = abcr::toy::bias_constant(kSStar, {});
  const double var_limit = y * (1.0 - y);
  const double oracle = var_limit + c * c;  // D = 1

  const struct {
    int n;
    int k;
  } cases[] = {{100, 1500}, {1000, 800}};
  for (const auto& config : cases) {
    const double delta = std::pow(config.n, -0.25);
    const auto point = abcr::mse_point(model, norm, kSStar, h, delta, config.n,
                                       config.k, y, 7007, workers());
    INFO("n = " << config.n);
    REQUIRE(std::abs(point.mse * config.n - oracle) <= 0.25 * oracle);
  }
}

TEST_CASE("larger replicate counts tighten the estimated gradient") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  const auto h = abcr::toy::make_indicator({-0.5, 0.5});
  const double y = abcr::toy::posterior_interval_probability(kSStar, {});
  abcr::RateOptions options;
  options.threads = workers();
  options.d_opt_hint = 3.245;
  options.grid_points = 10;
  const std::vector<double> costs = {50, 100, 200, 400};

  const auto spread_for = [&](int k) {
    std::vector<double> gradients;
    for (int repetition = 0; repetition < 10; ++repetition) {
      const auto scan = abcr::rate_experiment(
          model, norm, kSStar, h, y, costs, {}, k,
          abcr::derive_replicate_seed(8808, static_cast<std::uint64_t>(
                                                 100 * k + repetition)),
          options);
      gradients.push_back(scan.mse_star_fit.gradient);
    }
    return std::sqrt(abcr::sample_variance(gradients));
  };

  REQUIRE(spread_for(80) < spread_for(40));
}
