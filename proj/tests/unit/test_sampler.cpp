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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <vector>

#include "abcr/sampler.hpp"
#include "abcr/toy_gaussian.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

abcr::AbcConfig toy_config(double delta, std::uint64_t seed) {
  abcr::AbcConfig cfg;
  cfg.s_star = {1.0, 1.0};
  cfg.delta = delta;
  cfg.seed = seed;
  return cfg;
}

abcr::AbcRun manual_run(std::vector<double> accepted) {
  abcr::AbcRun run;
  run.p = 1;
  run.n_accepted = accepted.size();
  run.n_proposals = accepted.size();
  run.accepted = std::move(accepted);
  return run;
}

}  // namespace

TEST_CASE("infinite tolerance accepts every proposal") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);

  auto cfg = toy_config(kInf, 11);
  cfg.mode = abcr::FixedAccepted{10};
  const auto run = abcr::abc_rejection(model, norm, cfg);
  REQUIRE(run.n_accepted == 10);
  REQUIRE(run.n_proposals == 10);

  cfg.mode = abcr::FixedProposals{25, 0.0};
  const auto run2 = abcr::abc_rejection(model, norm, cfg);
  REQUIRE(run2.n_accepted == 25);
  REQUIRE(run2.n_proposals == 25);
}

TEST_CASE("fixed-acceptance mode returns exactly n samples within tolerance") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  auto cfg = toy_config(0.5, 123);
  cfg.mode = abcr::FixedAccepted{200};
  const auto run = abcr::abc_rejection(model, norm, cfg);

  REQUIRE(run.n_accepted == 200);
  REQUIRE(run.n_proposals >= 200);
  REQUIRE(run.accepted.size() == 200);
  REQUIRE(run.accepted_distances.size() == 200);
  for (double distance : run.accepted_distances) {
    REQUIRE(distance <= run.delta);
  }
  REQUIRE(std::is_sorted(run.accepted_indices.begin(),
                         run.accepted_indices.end()));
  REQUIRE(run.accepted_indices.back() == run.n_proposals - 1);
}

TEST_CASE("fixed-proposal mode draws exactly N_hat proposals") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  auto cfg = toy_config(0.3, 77);
  cfg.mode = abcr::FixedProposals{5000, 0.0};
  const auto run = abcr::abc_rejection(model, norm, cfg);
  REQUIRE(run.n_proposals == 5000);
  REQUIRE(run.n_accepted <= run.n_proposals);
  REQUIRE(run.n_accepted > 0);
  for (double distance : run.accepted_distances) {
    REQUIRE(distance <= 0.3);
  }
}

TEST_CASE("runs are pure functions of the configuration") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  auto cfg = toy_config(0.4, 31415);
  cfg.mode = abcr::FixedAccepted{50};
  const auto run1 = abcr::abc_rejection(model, norm, cfg);
  const auto run2 = abcr::abc_rejection(model, norm, cfg);
  REQUIRE(run1.accepted == run2.accepted);
  REQUIRE(run1.accepted_distances == run2.accepted_distances);
  REQUIRE(run1.accepted_indices == run2.accepted_indices);
  REQUIRE(run1.n_proposals == run2.n_proposals);
}

TEST_CASE("proposal cap turns a hopeless run into an error") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  auto cfg = toy_config(1e-6, 5);
  cfg.mode = abcr::FixedAccepted{10, 10'000};
  REQUIRE_THROWS_AS(abcr::abc_rejection(model, norm, cfg),
                    abcr::ProposalCapExceededError);
}

TEST_CASE("norm equivalence: A-norm equals Euclidean on whitened summaries") {
  const auto model = abcr::toy::toy_model();
  abcr::Rng rng(808);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd m(2, 2);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) m(i, j) = rng.normal();
    }
    const Eigen::MatrixXd a =
        m.transpose() * m + 0.05 * Eigen::MatrixXd::Identity(2, 2);
    const auto norm = abcr::whitening_transform(a);

    // The same model with the summary replaced by s -> W S(x).
    abcr::ModelSpec whitened = model;
    whitened.summary = [&norm, base = model.summary](
                           std::span<const double> data,
                           std::span<double> out) {
      double raw[2];
      base(data, std::span<double>(raw, 2));
      norm.apply(std::span<const double>(raw, 2), out);
    };

    auto cfg = toy_config(0.7, 1000 + trial);
    cfg.mode = abcr::FixedProposals{2000, 0.0};
    const auto run_a = abcr::abc_rejection(model, norm, cfg);

    abcr::AbcConfig cfg_w = cfg;
    norm.apply(cfg.s_star, cfg_w.s_star);
    const auto run_euclid = abcr::abc_rejection(
        whitened, abcr::AcceptanceNorm::identity(2), cfg_w);

    REQUIRE(run_a.accepted_indices == run_euclid.accepted_indices);
    REQUIRE(run_a.accepted == run_euclid.accepted);
    REQUIRE(run_a.accepted_distances == run_euclid.accepted_distances);
  }
}

TEST_CASE("acceptance sets are nested in the tolerance") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);
  auto small = toy_config(0.3, 4242);
  small.mode = abcr::FixedProposals{3000, 0.0};
  auto large = small;
  large.delta = 0.8;

  const auto run_small = abcr::abc_rejection(model, norm, small);
  const auto run_large = abcr::abc_rejection(model, norm, large);
  REQUIRE(std::includes(run_large.accepted_indices.begin(),
                        run_large.accepted_indices.end(),
                        run_small.accepted_indices.begin(),
                        run_small.accepted_indices.end()));
}

TEST_CASE("posterior_estimate averages h over accepted samples") {
  const auto run = manual_run({0.2, 0.6, 0.4});
  REQUIRE(abcr::posterior_estimate(run, abcr::constant_one(), 0.0) == 1.0);
  const auto indicator = abcr::toy::make_indicator({-0.5, 0.5});
  REQUIRE(abcr::posterior_estimate(run, indicator, 0.0) ==
          Catch::Approx(2.0 / 3.0).margin(1e-15));
}

TEST_CASE("posterior_estimate falls back when nothing is accepted") {
  abcr::AbcRun run;
  run.p = 1;
  run.n_proposals = 1000;
  REQUIRE(abcr::posterior_estimate(run, abcr::constant_one(), 0.3829) ==
          0.3829);
}

TEST_CASE("run_cost is affine in the proposal count") {
  auto run = manual_run({});
  run.n_proposals = 5000;
  REQUIRE(abcr::run_cost(run, {0.0, 1.0}) == 5000.0);
  run.n_proposals = 100;
  REQUIRE(abcr::run_cost(run, {10.0, 2.0}) == 210.0);
}

TEST_CASE("configuration errors are diagnosed") {
  const auto model = abcr::toy::toy_model();
  const auto norm = abcr::AcceptanceNorm::identity(2);

  auto bad_star = toy_config(0.5, 1);
  bad_star.s_star = {1.0, 1.0, 1.0};
  bad_star.mode = abcr::FixedAccepted{10};
  REQUIRE_THROWS_AS(abcr::abc_rejection(model, norm, bad_star),
                    abcr::DimensionMismatchError);

  auto bad_delta = toy_config(-0.5, 1);
  bad_delta.mode = abcr::FixedAccepted{10};
  REQUIRE_THROWS_AS(abcr::abc_rejection(model, norm, bad_delta),
                    abcr::InvalidArgumentError);

  auto bad_norm = toy_config(0.5, 1);
  bad_norm.mode = abcr::FixedAccepted{10};
  REQUIRE_THROWS_AS(
      abcr::abc_rejection(model, abcr::AcceptanceNorm::identity(3), bad_norm),
      abcr::DimensionMismatchError);

  auto bad_n = toy_config(0.5, 1);
  bad_n.mode = abcr::FixedAccepted{0};
  REQUIRE_THROWS_AS(abcr::abc_rejection(model, norm, bad_n),
                    abcr::InvalidArgumentError);
}
