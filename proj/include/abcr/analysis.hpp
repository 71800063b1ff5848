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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "abcr/errors.hpp"
#include "abcr/parallel.hpp"
#include "abcr/sampler.hpp"

namespace abcr {

// ---------------------------------------------------------------------------
// Small statistics helpers.  Standard errors use the sample (n-1) convention;
// the population (divide-by-n) variance is what makes the exact MSE
// decomposition mse = var + mean_bias^2 hold on a finite sample.
// ---------------------------------------------------------------------------

inline double mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

inline double population_variance(std::span<const double> xs) {
  const double m = mean(xs);
  double sum = 0.0;
  for (double x : xs) sum += (x - m) * (x - m);
  return sum / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
  const double m = mean(xs);
  double sum = 0.0;
  for (double x : xs) sum += (x - m) * (x - m);
  return sum / static_cast<double>(xs.size() - 1);
}

inline double standard_error(std::span<const double> xs) {
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

// ---------------------------------------------------------------------------
// Result types
// ---------------------------------------------------------------------------

struct BiasSweepRow {
  double delta = 0.0;
  double mean_bias = 0.0;
  double std_error = 0.0;
  int k = 0;
  int n = 0;
  double mean_proposals = 0.0;
};

struct MsePoint {
  double mse = 0.0;
  double se = 0.0;
  double mean_proposals = 0.0;
};

/// Least-squares fit of MSE(delta) = a delta^{-q} + b delta^4 together with
/// the implied optimal tolerance.  delta_star and mse_star are only
/// meaningful when both coefficients are positive.
struct MseFit {
  int q = 0;
  double a = 0.0;
  double b = 0.0;
  double delta_star = std::numeric_limits<double>::quiet_NaN();
  double mse_star = std::numeric_limits<double>::quiet_NaN();
  double rss = 0.0;
  bool coefficients_positive = false;
};

/// Log-log regression x = A cost^B: `gradient` is B, `intercept` is log A.
struct PowerLawFit {
  double gradient = 0.0;
  double intercept = 0.0;
  double gradient_se = 0.0;
  int n_points = 0;
};

/// Multipliers relative to a pilot run.
struct ScalingAdvice {
  double n_factor = 1.0;
  double delta_factor = 1.0;
  double cost_factor = 1.0;
  double error_factor = 1.0;
};

struct ErrorFactor {
  double alpha = 1.0;
};
struct BudgetFactor {
  double beta = 1.0;
};

namespace detail {

inline std::uint64_t chain_seed(std::uint64_t base, std::uint64_t a) {
  return derive_replicate_seed(base, a);
}
inline std::uint64_t chain_seed(std::uint64_t base, std::uint64_t a,
                                std::uint64_t b) {
  return derive_replicate_seed(derive_replicate_seed(base, a), b);
}
inline std::uint64_t chain_seed(std::uint64_t base, std::uint64_t a,
                                std::uint64_t b, std::uint64_t c) {
  return derive_replicate_seed(chain_seed(base, a, b), c);
}

struct ReplicateOutcome {
  double estimate = 0.0;
  double proposals = 0.0;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Monte Carlo sweeps
// ---------------------------------------------------------------------------

/// For each tolerance, runs k fixed-acceptance estimates (n samples each)
/// with seeds derived from (base_seed, delta index, replicate index) and
/// reports the mean and standard error of Y - y_exact.  Rows come back
/// sorted by delta.
inline std::vector<BiasSweepRow> bias_sweep(
    const ModelSpec& model, const AcceptanceNorm& norm,
    std::span<const double> s_star, const TestFunction& h,
    std::vector<double> deltas, int n, int k, double y_exact,
    std::uint64_t base_seed, unsigned threads = 1) {
  if (k < 2) throw InvalidArgumentError("bias_sweep: k must be >= 2");
  if (n < 1) throw InvalidArgumentError("bias_sweep: n must be >= 1");
  if (deltas.empty()) throw InvalidArgumentError("bias_sweep: empty delta grid");
  std::sort(deltas.begin(), deltas.end());

  std::vector<BiasSweepRow> rows;
  rows.reserve(deltas.size());
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const double delta = deltas[di];
    auto outcomes = run_replicates(
        static_cast<std::size_t>(k), threads,
        [&](std::size_t r) -> detail::ReplicateOutcome {
          AbcConfig cfg;
          cfg.s_star.assign(s_star.begin(), s_star.end());
          cfg.delta = delta;
          cfg.mode = FixedAccepted{n};
          cfg.seed = detail::chain_seed(base_seed, di, r);
          const AbcRun run = abc_rejection(model, norm, cfg);
          return {posterior_estimate(run, h, 0.0) - y_exact,
                  static_cast<double>(run.n_proposals)};
        });

    std::vector<double> devs(outcomes.size());
    std::vector<double> props(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      devs[i] = outcomes[i].estimate;
      props[i] = outcomes[i].proposals;
    }
    BiasSweepRow row;
    row.delta = delta;
    row.mean_bias = mean(devs);
    row.std_error = standard_error(devs);
    row.k = k;
    row.n = n;
    row.mean_proposals = mean(props);
    rows.push_back(row);
  }
  return rows;
}

/// Mean over k replicates of (Y - y_exact)^2, with the standard error of
/// that mean.  Replicate r uses seed derive_replicate_seed(base_seed, r).
inline MsePoint mse_point(const ModelSpec& model, const AcceptanceNorm& norm,
                          std::span<const double> s_star, const TestFunction& h,
                          double delta, int n, int k, double y_exact,
                          std::uint64_t base_seed, unsigned threads = 1) {
  if (k < 2) throw InvalidArgumentError("mse_point: k must be >= 2");
  auto outcomes = run_replicates(
      static_cast<std::size_t>(k), threads,
      [&](std::size_t r) -> detail::ReplicateOutcome {
        AbcConfig cfg;
        cfg.s_star.assign(s_star.begin(), s_star.end());
        cfg.delta = delta;
        cfg.mode = FixedAccepted{n};
        cfg.seed = detail::chain_seed(base_seed, r);
        const AbcRun run = abc_rejection(model, norm, cfg);
        const double dev = posterior_estimate(run, h, 0.0) - y_exact;
        return {dev * dev, static_cast<double>(run.n_proposals)};
      });

  std::vector<double> sq(outcomes.size());
  std::vector<double> props(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    sq[i] = outcomes[i].estimate;
    props[i] = outcomes[i].proposals;
  }
  return {mean(sq), standard_error(sq), mean(props)};
}

// ---------------------------------------------------------------------------
// Schedules and fits
// ---------------------------------------------------------------------------

/// Sample sizes n(delta) = round(kappa * delta^q), which hold the expected
/// cost n delta^{-q} constant across the grid (up to rounding).
inline std::vector<int> constant_cost_schedule(const std::vector<double>& deltas,
                                               double kappa, int q) {
  if (!(kappa > 0.0)) {
    throw InvalidArgumentError("constant_cost_schedule: kappa must be positive");
  }
  std::vector<int> ns;
  ns.reserve(deltas.size());
  for (double delta : deltas) {
    const long long n = std::llround(kappa * std::pow(delta, q));
    if (n < 1) {
      throw ScheduleUnderflowError(
          "constant_cost_schedule: n(" + std::to_string(delta) +
          ") rounds to " + std::to_string(n) + " < 1");
    }
    ns.push_back(static_cast<int>(n));
  }
  return ns;
}

/// Unique minimizer (q a / (4 b))^{1/(q+4)} of a delta^{-q} + b delta^4.
inline double optimal_delta(double a, double b, int q) {
  if (!(a > 0.0) || !(b > 0.0) || q < 1) {
    throw InvalidCoefficientsError(
        "optimal_delta: requires a > 0, b > 0 and q >= 1");
  }
  return std::pow(q * a / (4.0 * b), 1.0 / (q + 4));
}

/// Ordinary least squares for MSE(delta) = a delta^{-q} + b delta^4; the
/// model is linear in (a, b).  A fit whose coefficients are not both
/// positive is returned with coefficients_positive = false and NaN optima.
inline MseFit fit_mse_curve(const std::vector<std::pair<double, double>>& points,
                            int q) {
  if (points.size() < 3) {
    throw InvalidArgumentError("fit_mse_curve: needs at least 3 points");
  }
  double suu = 0.0, suv = 0.0, svv = 0.0, suy = 0.0, svy = 0.0;
  for (const auto& [delta, mse] : points) {
    if (!(delta > 0.0)) {
      throw InvalidArgumentError("fit_mse_curve: deltas must be positive");
    }
    const double u = std::pow(delta, -q);
    const double v = std::pow(delta, 4);
    suu += u * u;
    suv += u * v;
    svv += v * v;
    suy += u * mse;
    svy += v * mse;
  }
  const double det = suu * svv - suv * suv;
  if (!(det > 1e-14 * suu * svv)) {
    throw SingularDesignError(
        "fit_mse_curve: collinear basis (fewer than 2 distinct deltas?)");
  }

  MseFit fit;
  fit.q = q;
  fit.a = (svv * suy - suv * svy) / det;
  fit.b = (suu * svy - suv * suy) / det;
  for (const auto& [delta, mse] : points) {
    const double resid =
        mse - fit.a * std::pow(delta, -q) - fit.b * std::pow(delta, 4);
    fit.rss += resid * resid;
  }
  fit.coefficients_positive = fit.a > 0.0 && fit.b > 0.0;
  if (fit.coefficients_positive) {
    fit.delta_star = optimal_delta(fit.a, fit.b, q);
    fit.mse_star = fit.a * std::pow(fit.delta_star, -q) +
                   fit.b * std::pow(fit.delta_star, 4);
  }
  return fit;
}

/// OLS of log y on log x.  gradient_se is the usual slope standard error.
inline PowerLawFit loglog_fit(const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw InvalidArgumentError("loglog_fit: xs and ys differ in length");
  }
  const std::size_t n = xs.size();
  if (n < 3) throw InvalidArgumentError("loglog_fit: needs at least 3 points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw NonPositiveInputError("loglog_fit: inputs must be positive");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = mean(lx);
  const double my = mean(ly);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw SingularDesignError("loglog_fit: all x values coincide");
  }

  PowerLawFit fit;
  fit.n_points = static_cast<int>(n);
  fit.gradient = sxy / sxx;
  fit.intercept = my - fit.gradient * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double resid = ly[i] - fit.intercept - fit.gradient * lx[i];
    rss += resid * resid;
  }
  fit.gradient_se = std::sqrt(std::max(rss, 0.0) /
                              (static_cast<double>(n) - 2.0) / sxx);
  return fit;
}

// ---------------------------------------------------------------------------
// Rate-law experiments
// ---------------------------------------------------------------------------

struct RateLevel {
  double cost = 0.0;
  std::vector<double> deltas;
  std::vector<int> ns;
  std::vector<MsePoint> points;
  MseFit fit;
  bool excluded = false;
};

struct RateScan {
  std::vector<RateLevel> levels;
  PowerLawFit delta_star_fit;
  PowerLawFit mse_star_fit;
};

struct RateOptions {
  int grid_points = 12;
  double grid_span = 4.0;   ///< ratio between largest and smallest grid delta
  double d_opt_hint = 0.0;  ///< schedule constant seeding the first grid; 0 = pilot heuristic
  std::uint64_t pilot_proposals = 20'000;
  unsigned threads = 1;
};

namespace detail {

inline constexpr std::uint64_t kPilotTag = 0x70696C6F74ull;

/// Geometric grid of `count` points whose extremes differ by factor `span`.
inline std::vector<double> geometric_grid(double center, double span,
                                          int count) {
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double lo = center / std::sqrt(span);
  const double ratio = std::pow(span, 1.0 / (count - 1));
  double value = lo;
  for (int i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] = value;
    value *= ratio;
  }
  return grid;
}

/// Grid center for cost level kappa: the self-consistent solution of
/// delta = D n^{-1/4} and n = kappa delta^q.
inline double schedule_center(double d_constant, double kappa, int q) {
  return std::pow(d_constant * std::pow(kappa, -0.25), 4.0 / (q + 4));
}

}  // namespace detail

/// Experiment sweeping cost levels: at each level, estimates the MSE over a
/// tolerance grid under a constant-cost schedule, fits the MSE curve,
/// extracts (delta_star, mse_star), and finally fits both power laws against
/// cost.  The expected exponents are -1/(q+4) for delta_star and -4/(q+4)
/// for the optimal MSE.
///
/// When `delta_grids` is empty, each level gets a geometric grid centred on
/// the previous level's delta_star (the first level is centred via
/// d_opt_hint when given, else via a pilot acceptance-rate heuristic).
/// Levels whose fitted coefficients are not both positive are excluded from
/// the power-law regression; fewer than 3 surviving levels is an error.
inline RateScan rate_experiment(const ModelSpec& model,
                                const AcceptanceNorm& norm,
                                std::span<const double> s_star,
                                const TestFunction& h, double y_exact,
                                const std::vector<double>& cost_grid,
                                const std::vector<std::vector<double>>& delta_grids,
                                int k, std::uint64_t base_seed,
                                const RateOptions& options = {}) {
  if (cost_grid.size() < 3) {
    throw InvalidArgumentError("rate_experiment: needs at least 3 cost levels");
  }
  if (!delta_grids.empty() && delta_grids.size() != cost_grid.size()) {
    throw InvalidArgumentError(
        "rate_experiment: delta_grids must match cost_grid in length");
  }
  if (options.grid_points < 3) {
    throw InvalidArgumentError("rate_experiment: grid_points must be >= 3");
  }
  const int q = model.q;

  double center = 0.0;
  if (delta_grids.empty()) {
    if (options.d_opt_hint > 0.0) {
      center = detail::schedule_center(options.d_opt_hint, cost_grid.front(), q);
    } else {
      // Pilot heuristic: estimate the acceptance probability at delta = 1 and
      // place the first centre where the rate would be roughly 5%.
      AbcConfig cfg;
      cfg.s_star.assign(s_star.begin(), s_star.end());
      cfg.delta = 1.0;
      cfg.mode = FixedProposals{options.pilot_proposals, 0.0};
      cfg.seed = detail::chain_seed(base_seed, detail::kPilotTag);
      const AbcRun pilot = abc_rejection(model, norm, cfg);
      if (pilot.n_accepted == 0) {
        throw PilotFailedError("rate_experiment: pilot run accepted nothing");
      }
      const double p_ref = static_cast<double>(pilot.n_accepted) /
                           static_cast<double>(pilot.n_proposals);
      center = std::pow(0.05 / p_ref, 1.0 / q);
    }
  }

  RateScan scan;
  scan.levels.reserve(cost_grid.size());
  for (std::size_t li = 0; li < cost_grid.size(); ++li) {
    RateLevel level;
    level.cost = cost_grid[li];
    level.deltas = delta_grids.empty()
                       ? detail::geometric_grid(center, options.grid_span,
                                                options.grid_points)
                       : delta_grids[li];
    level.ns = constant_cost_schedule(level.deltas, level.cost, q);

    std::vector<std::pair<double, double>> curve;
    curve.reserve(level.deltas.size());
    for (std::size_t di = 0; di < level.deltas.size(); ++di) {
      const MsePoint point = mse_point(
          model, norm, s_star, h, level.deltas[di], level.ns[di], k, y_exact,
          detail::chain_seed(base_seed, li, di), options.threads);
      level.points.push_back(point);
      curve.emplace_back(level.deltas[di], point.mse);
    }
    level.fit = fit_mse_curve(curve, q);
    level.excluded = !level.fit.coefficients_positive;
    if (!level.excluded && delta_grids.empty()) {
      center = level.fit.delta_star;
    }
    scan.levels.push_back(std::move(level));
  }

  std::vector<double> costs, delta_stars, mse_stars;
  for (const RateLevel& level : scan.levels) {
    if (level.excluded) continue;
    costs.push_back(level.cost);
    delta_stars.push_back(level.fit.delta_star);
    mse_stars.push_back(level.fit.mse_star);
  }
  if (costs.size() < 3) {
    throw InsufficientLevelsError(
        "rate_experiment: only " + std::to_string(costs.size()) +
        " cost levels produced valid fits");
  }
  scan.delta_star_fit = loglog_fit(costs, delta_stars);
  scan.mse_star_fit = loglog_fit(costs, mse_stars);
  return scan;
}

/// One point of a tolerance-schedule scan: at nominal cost C the sample size
/// solves n = (C D^q)^{1/(1+q r)} and the tolerance is delta = D n^{-r}.
struct SchedulePoint {
  double cost_nominal = 0.0;
  int n = 0;
  double delta = 0.0;
  MsePoint point;
};

struct ScheduleScan {
  std::vector<SchedulePoint> points;
  PowerLawFit fit;
};

/// Measures the MSE-vs-cost exponent realised by the tolerance schedule
/// delta_n = D n^{-r} across a grid of nominal cost levels.  Used to compare
/// the optimal r = 1/4 schedule against deliberately mis-tuned ones.
inline ScheduleScan schedule_mse_scan(const ModelSpec& model,
                                      const AcceptanceNorm& norm,
                                      std::span<const double> s_star,
                                      const TestFunction& h, double y_exact,
                                      double schedule_exponent,
                                      double schedule_constant,
                                      const std::vector<double>& cost_grid,
                                      int k, std::uint64_t base_seed,
                                      unsigned threads = 1) {
  if (cost_grid.size() < 3) {
    throw InvalidArgumentError("schedule_mse_scan: needs at least 3 cost levels");
  }
  if (!(schedule_exponent > 0.0) || !(schedule_constant > 0.0)) {
    throw InvalidArgumentError(
        "schedule_mse_scan: schedule exponent and constant must be positive");
  }
  const int q = model.q;
  ScheduleScan scan;
  std::vector<double> xs, ys;
  for (std::size_t li = 0; li < cost_grid.size(); ++li) {
    SchedulePoint sp;
    const double dq = std::pow(schedule_constant, q);
    sp.n = static_cast<int>(std::max<long long>(
        1, std::llround(std::pow(cost_grid[li] * dq,
                                 1.0 / (1.0 + q * schedule_exponent)))));
    sp.delta = schedule_constant * std::pow(sp.n, -schedule_exponent);
    sp.cost_nominal = sp.n * std::pow(sp.delta, -q);
    sp.point = mse_point(model, norm, s_star, h, sp.delta, sp.n, k, y_exact,
                         detail::chain_seed(base_seed, li), threads);
    xs.push_back(sp.cost_nominal);
    ys.push_back(sp.point.mse);
    scan.points.push_back(sp);
  }
  scan.fit = loglog_fit(xs, ys);
  return scan;
}

// ---------------------------------------------------------------------------
// Fixed-n versus fixed-N comparison
// ---------------------------------------------------------------------------

struct ModeComparisonOptions {
  double p_delta = 0.0;  ///< acceptance probability; <= 0 triggers a pilot estimate
  std::uint64_t pilot_proposals = 200'000;
  unsigned threads = 1;
};

struct ModeComparison {
  double p_delta = 0.0;
  std::uint64_t n_hat = 0;
  int n_fixed = 0;
  double mse_fixed_proposals = 0.0;
  double mse_fixed_accepted = 0.0;
  double ratio = 1.0;
  double mean_proposals_accepted_mode = 0.0;
};

/// Compares the fixed-proposal estimator (N_hat = round(n_target / p),
/// fallback constant when nothing accepts) against the fixed-acceptance
/// estimator with n = floor(N_hat p), over k replicates each.  Replicates of
/// the two estimators are paired on a common seed, which sharply reduces the
/// variance of the MSE ratio without biasing either estimate.  The 0/0 case
/// (a constant test function) is defined as ratio 1.
inline ModeComparison fixed_mode_comparison(
    const ModelSpec& model, const AcceptanceNorm& norm,
    std::span<const double> s_star, const TestFunction& h, double y_exact,
    double delta, int n_target, int k, double fallback_c,
    std::uint64_t base_seed, const ModeComparisonOptions& options = {}) {
  if (k < 100) {
    throw InvalidArgumentError("fixed_mode_comparison: k must be >= 100");
  }
  if (n_target < 1) {
    throw InvalidArgumentError("fixed_mode_comparison: n_target must be >= 1");
  }

  ModeComparison result;
  if (options.p_delta > 0.0) {
    result.p_delta = options.p_delta;
  } else {
    AbcConfig cfg;
    cfg.s_star.assign(s_star.begin(), s_star.end());
    cfg.delta = delta;
    cfg.mode = FixedProposals{options.pilot_proposals, fallback_c};
    cfg.seed = detail::chain_seed(base_seed, detail::kPilotTag);
    const AbcRun pilot = abc_rejection(model, norm, cfg);
    if (pilot.n_accepted == 0) {
      throw PilotFailedError(
          "fixed_mode_comparison: pilot run accepted no samples");
    }
    result.p_delta = static_cast<double>(pilot.n_accepted) /
                     static_cast<double>(pilot.n_proposals);
  }

  result.n_hat = static_cast<std::uint64_t>(
      std::llround(n_target / result.p_delta));
  result.n_fixed = static_cast<int>(
      std::floor(static_cast<double>(result.n_hat) * result.p_delta));
  if (result.n_hat < 1 || result.n_fixed < 1) {
    throw InvalidArgumentError(
        "fixed_mode_comparison: derived sample sizes are below 1");
  }

  struct PairedSq {
    double fixed_proposals = 0.0;
    double fixed_accepted = 0.0;
    double proposals_accepted_mode = 0.0;
  };
  auto outcomes = run_replicates(
      static_cast<std::size_t>(k), options.threads,
      [&](std::size_t r) -> PairedSq {
        const std::uint64_t seed = detail::chain_seed(base_seed, r);
        AbcConfig cfg;
        cfg.s_star.assign(s_star.begin(), s_star.end());
        cfg.delta = delta;
        cfg.seed = seed;

        cfg.mode = FixedProposals{result.n_hat, fallback_c};
        const double y_hat =
            posterior_estimate(abc_rejection(model, norm, cfg), h, fallback_c);

        cfg.mode = FixedAccepted{result.n_fixed};
        const AbcRun run_fix = abc_rejection(model, norm, cfg);
        const double y_fix = posterior_estimate(run_fix, h, fallback_c);

        return {(y_hat - y_exact) * (y_hat - y_exact),
                (y_fix - y_exact) * (y_fix - y_exact),
                static_cast<double>(run_fix.n_proposals)};
      });

  double sum_hat = 0.0, sum_fix = 0.0, sum_proposals = 0.0;
  for (const PairedSq& o : outcomes) {
    sum_hat += o.fixed_proposals;
    sum_fix += o.fixed_accepted;
    sum_proposals += o.proposals_accepted_mode;
  }
  result.mse_fixed_proposals = sum_hat / static_cast<double>(k);
  result.mse_fixed_accepted = sum_fix / static_cast<double>(k);
  result.mean_proposals_accepted_mode = sum_proposals / static_cast<double>(k);
  if (result.mse_fixed_accepted == 0.0) {
    result.ratio = result.mse_fixed_proposals == 0.0
                       ? 1.0
                       : std::numeric_limits<double>::infinity();
  } else {
    result.ratio = result.mse_fixed_proposals / result.mse_fixed_accepted;
  }
  return result;
}

inline double fixed_mode_mse_ratio(const ModelSpec& model,
                                   const AcceptanceNorm& norm,
                                   std::span<const double> s_star,
                                   const TestFunction& h, double y_exact,
                                   double delta, int n_target, int k,
                                   double fallback_c, std::uint64_t base_seed,
                                   const ModeComparisonOptions& options = {}) {
  return fixed_mode_comparison(model, norm, s_star, h, y_exact, delta,
                               n_target, k, fallback_c, base_seed, options)
      .ratio;
}

// ---------------------------------------------------------------------------
// Pilot-run scaling rules
// ---------------------------------------------------------------------------

/// Scaling rules for growing a pilot run.  ErrorFactor(alpha): to divide the
/// RMSE by alpha, multiply n by alpha^2, divide delta by sqrt(alpha), and
/// expect cost to grow by alpha^{(q+4)/2}.  BudgetFactor(beta): spending
/// beta times the budget multiplies n by beta^{4/(q+4)}, divides delta by
/// beta^{1/(q+4)}, and divides the RMSE by beta^{2/(q+4)}.
inline ScalingAdvice scaling_advisor(
    int q, const std::variant<ErrorFactor, BudgetFactor>& target) {
  if (q < 1) throw InvalidArgumentError("scaling_advisor: q must be >= 1");
  ScalingAdvice advice;
  if (const auto* error_target = std::get_if<ErrorFactor>(&target)) {
    const double alpha = error_target->alpha;
    if (!(alpha > 0.0)) {
      throw InvalidArgumentError("scaling_advisor: alpha must be positive");
    }
    advice.n_factor = alpha * alpha;
    advice.delta_factor = std::pow(alpha, -0.5);
    advice.cost_factor = std::pow(alpha, (q + 4) / 2.0);
    advice.error_factor = 1.0 / alpha;
  } else {
    const double beta = std::get<BudgetFactor>(target).beta;
    if (!(beta > 0.0)) {
      throw InvalidArgumentError("scaling_advisor: beta must be positive");
    }
    advice.n_factor = std::pow(beta, 4.0 / (q + 4));
    advice.delta_factor = std::pow(beta, -1.0 / (q + 4));
    advice.cost_factor = beta;
    advice.error_factor = std::pow(beta, -2.0 / (q + 4));
  }
  return advice;
}

}  // namespace abcr
