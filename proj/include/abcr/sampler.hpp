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

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "abcr/errors.hpp"
#include "abcr/model.hpp"
#include "abcr/whitening.hpp"

namespace abcr {

/// Stop after exactly `n` acceptances; the number of proposals is random.
/// `max_proposals` turns a vanishing acceptance probability into a
/// diagnosable error instead of an unbounded loop.
struct FixedAccepted {
  int n = 0;
  std::uint64_t max_proposals = 100'000'000ull;
};

/// Stop after exactly `n_hat` proposals; the number of acceptances is random.
/// `fallback_c` is the estimate reported when nothing is accepted.
struct FixedProposals {
  std::uint64_t n_hat = 0;
  double fallback_c = 0.0;
};

struct AbcConfig {
  std::vector<double> s_star;  ///< observed summary, length q
  double delta = 0.0;          ///< tolerance; +infinity accepts everything
  std::variant<FixedAccepted, FixedProposals> mode = FixedAccepted{};
  std::uint64_t seed = 0;
};

/// Output of one ABC execution.  `accepted` stores the accepted parameter
/// vectors flattened row-major (n_accepted x p); per accepted proposal the
/// whitened distance to s* and the proposal ordinal are recorded as well.
struct AbcRun {
  int p = 0;
  std::vector<double> accepted;
  std::vector<double> accepted_distances;
  std::vector<std::uint64_t> accepted_indices;
  std::size_t n_accepted = 0;
  std::uint64_t n_proposals = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;

  std::span<const double> parameter(std::size_t i) const {
    return {accepted.data() + i * static_cast<std::size_t>(p),
            static_cast<std::size_t>(p)};
  }
};

/// Affine cost model: one run costs a + b * n_proposals.
struct CostModel {
  double a = 0.0;
  double b = 1.0;
};

namespace detail {

inline void validate_config(const ModelSpec& model, const AcceptanceNorm& norm,
                            const AbcConfig& cfg) {
  if (model.p < 1 || model.d < 1 || model.q < 1) {
    throw InvalidArgumentError("abc_rejection: model dimensions must be positive");
  }
  if (!model.prior_sample || !model.simulate || !model.summary) {
    throw InvalidArgumentError("abc_rejection: model procedures must be set");
  }
  if (norm.q() != model.q) {
    throw DimensionMismatchError("abc_rejection: norm is " +
                                 std::to_string(norm.q()) + "x" +
                                 std::to_string(norm.q()) + " but q = " +
                                 std::to_string(model.q));
  }
  if (static_cast<int>(cfg.s_star.size()) != model.q) {
    throw DimensionMismatchError("abc_rejection: s_star has length " +
                                 std::to_string(cfg.s_star.size()) +
                                 " but q = " + std::to_string(model.q));
  }
  if (std::isnan(cfg.delta) || cfg.delta <= 0.0) {
    throw InvalidArgumentError("abc_rejection: delta must be positive");
  }
  if (const auto* fa = std::get_if<FixedAccepted>(&cfg.mode)) {
    if (fa->n < 1) {
      throw InvalidArgumentError("abc_rejection: n must be >= 1");
    }
    if (fa->max_proposals < 1) {
      throw InvalidArgumentError("abc_rejection: max_proposals must be >= 1");
    }
  } else if (std::get<FixedProposals>(cfg.mode).n_hat < 1) {
    throw InvalidArgumentError("abc_rejection: N_hat must be >= 1");
  }
}

}  // namespace detail

/// Basic ABC rejection sampling: propose from the prior, simulate data,
/// summarize, and accept when the whitened summary lies within delta of the
/// whitened observation (non-strict comparison, so boundary ties accept).
///
/// The distance is evaluated as || W s - W s* ||_2 with W s* computed once up
/// front; running with the pre-whitened summary map s -> W S(x) under the
/// identity norm therefore reproduces the exact same floating-point
/// distances and acceptance decisions.
///
/// The result is a pure function of (model, norm, cfg), including the seed.
inline AbcRun abc_rejection(const ModelSpec& model, const AcceptanceNorm& norm,
                            const AbcConfig& cfg) {
  detail::validate_config(model, norm, cfg);

  const int p = model.p;
  const int d = model.d;
  const int q = model.q;

  std::vector<double> theta(static_cast<std::size_t>(p));
  std::vector<double> data(static_cast<std::size_t>(d));
  std::vector<double> summ(static_cast<std::size_t>(q));
  std::vector<double> white(static_cast<std::size_t>(q));
  std::vector<double> target(static_cast<std::size_t>(q));
  norm.apply(cfg.s_star, target);

  AbcRun run;
  run.p = p;
  run.delta = cfg.delta;
  run.seed = cfg.seed;

  Rng rng(cfg.seed);

  const auto propose_distance = [&]() -> double {
    model.prior_sample(rng, theta);
    model.simulate(theta, rng, data);
    model.summary(data, summ);
    norm.apply(summ, white);
    double ss = 0.0;
    for (int i = 0; i < q; ++i) {
      const double diff = white[static_cast<std::size_t>(i)] -
                          target[static_cast<std::size_t>(i)];
      ss += diff * diff;
    }
    return std::sqrt(ss);
  };

  const auto record_accept = [&](double distance) {
    run.accepted.insert(run.accepted.end(), theta.begin(), theta.end());
    run.accepted_distances.push_back(distance);
    run.accepted_indices.push_back(run.n_proposals - 1);
    ++run.n_accepted;
  };

  if (const auto* fa = std::get_if<FixedAccepted>(&cfg.mode)) {
    const std::size_t want = static_cast<std::size_t>(fa->n);
    run.accepted.reserve(want * static_cast<std::size_t>(p));
    while (run.n_accepted < want) {
      if (run.n_proposals >= fa->max_proposals) {
        throw ProposalCapExceededError(
            "abc_rejection: " + std::to_string(run.n_proposals) +
            " proposals yielded only " + std::to_string(run.n_accepted) +
            " acceptances (delta too small or vanishing summary density?)");
      }
      ++run.n_proposals;
      const double distance = propose_distance();
      if (distance <= cfg.delta) record_accept(distance);
    }
  } else {
    const auto& fp = std::get<FixedProposals>(cfg.mode);
    for (std::uint64_t i = 0; i < fp.n_hat; ++i) {
      ++run.n_proposals;
      const double distance = propose_distance();
      if (distance <= cfg.delta) record_accept(distance);
    }
  }
  return run;
}

/// Monte Carlo estimate (1/n) sum h(theta_j) over the accepted samples;
/// returns fallback_c when nothing was accepted.  Total function.
inline double posterior_estimate(const AbcRun& run, const TestFunction& h,
                                 double fallback_c) {
  if (run.n_accepted == 0) return fallback_c;
  double sum = 0.0;
  for (std::size_t i = 0; i < run.n_accepted; ++i) {
    sum += h(run.parameter(i));
  }
  return sum / static_cast<double>(run.n_accepted);
}

inline double run_cost(const AbcRun& run, const CostModel& cm) {
  return cm.a + cm.b * static_cast<double>(run.n_proposals);
}

}  // namespace abcr
