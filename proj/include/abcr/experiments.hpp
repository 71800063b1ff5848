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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "abcr/analysis.hpp"
#include "abcr/toy_gaussian.hpp"

namespace abcr::experiments {

inline constexpr const char* kVersion = "abc-rates 0.1.0";

enum class Kind { BiasSweep, MseSweep, RateScan, ModeCompare, Tune, Sample };

inline const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::BiasSweep: return "bias-sweep";
    case Kind::MseSweep: return "mse-sweep";
    case Kind::RateScan: return "rate-scan";
    case Kind::ModeCompare: return "mode-compare";
    case Kind::Tune: return "tune";
    case Kind::Sample: return "sample";
  }
  return "?";
}

inline std::optional<Kind> kind_from_name(const std::string& name) {
  for (Kind kind : {Kind::BiasSweep, Kind::MseSweep, Kind::RateScan,
                    Kind::ModeCompare, Kind::Tune, Kind::Sample}) {
    if (name == kind_name(kind)) return kind;
  }
  return std::nullopt;
}

/// Test function selector: the indicator of [lo, hi], or h == 1.
struct HSpec {
  bool one = false;
  double lo = -0.5;
  double hi = 0.5;
};

struct ExperimentConfig {
  Kind kind = Kind::BiasSweep;
  std::string model = "toy";
  std::vector<double> s_star = {1.0, 1.0};
  HSpec h;

  std::vector<double> deltas;      // bias-sweep; optional for mse-sweep
  double delta = 0.0;              // mode-compare, sample
  int n = 0;                       // bias-sweep, sample
  int k = 0;                       // replicate count
  std::uint64_t n_hat = 0;         // sample (fixed-proposals mode)
  double kappa = 0.0;              // mse-sweep cost level
  std::vector<double> cost_grid;   // rate-scan
  std::vector<double> n_targets;   // mode-compare
  double fallback_c = 0.0;
  int q = 0;                       // tune
  double alpha = 0.0;              // tune (error factor)
  double beta = 0.0;               // tune (budget factor)

  std::uint64_t seed = 1;
  unsigned threads = 1;
  CostModel cost_model;
  std::string out_dir = "out";
  bool dry_run = false;
};

// ---------------------------------------------------------------------------
// JSON round trip
// ---------------------------------------------------------------------------

namespace detail {

inline double parse_tolerance(const nlohmann::json& value,
                              const std::string& field) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
  }
  throw InvalidArgumentError("config: field '" + field +
                             "' must be a number or \"inf\"");
}

inline nlohmann::json tolerance_to_json(double value) {
  if (std::isinf(value)) return "inf";
  return value;
}

}  // namespace detail

inline void apply_defaults(ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case Kind::BiasSweep:
      if (cfg.n == 0) cfg.n = 500;
      if (cfg.k == 0) cfg.k = 5000;
      break;
    case Kind::MseSweep:
      if (cfg.kappa == 0.0) cfg.kappa = 1000.0;
      if (cfg.k == 0) cfg.k = 500;
      break;
    case Kind::RateScan:
      if (cfg.cost_grid.empty()) cfg.cost_grid = {300, 950, 3000, 9500, 30000};
      if (cfg.k == 0) cfg.k = 300;
      break;
    case Kind::ModeCompare:
      if (cfg.delta == 0.0) cfg.delta = 0.5;
      if (cfg.n_targets.empty()) cfg.n_targets = {200, 1000};
      if (cfg.k == 0) cfg.k = 2000;
      break;
    case Kind::Tune:
      if (cfg.q == 0) cfg.q = 2;
      break;
    case Kind::Sample:
      if (cfg.n == 0 && cfg.n_hat == 0) cfg.n = 100;
      break;
  }
}

/// Overlays the fields present in `j` onto `cfg`.  Unknown keys are an
/// error; missing keys keep their current values.
inline void merge_json(ExperimentConfig& cfg, const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      const auto kind = kind_from_name(value.get<std::string>());
      if (!kind) {
        throw InvalidArgumentError("config: unknown experiment '" +
                                   value.get<std::string>() + "'");
      }
      cfg.kind = *kind;
    } else if (key == "model") {
      cfg.model = value.get<std::string>();
    } else if (key == "s_star") {
      cfg.s_star = value.get<std::vector<double>>();
    } else if (key == "h") {
      if (value.is_string() && value.get<std::string>() == "one") {
        cfg.h = HSpec{true, 0.0, 0.0};
      } else if (value.is_object()) {
        cfg.h = HSpec{false, value.at("lo").get<double>(),
                      value.at("hi").get<double>()};
      } else {
        throw InvalidArgumentError(
            "config: field 'h' must be \"one\" or {lo, hi}");
      }
    } else if (key == "deltas") {
      cfg.deltas = value.get<std::vector<double>>();
    } else if (key == "delta") {
      cfg.delta = detail::parse_tolerance(value, "delta");
    } else if (key == "n") {
      cfg.n = value.get<int>();
    } else if (key == "k") {
      cfg.k = value.get<int>();
    } else if (key == "n_hat") {
      cfg.n_hat = value.get<std::uint64_t>();
    } else if (key == "kappa") {
      cfg.kappa = value.get<double>();
    } else if (key == "cost_grid") {
      cfg.cost_grid = value.get<std::vector<double>>();
    } else if (key == "n_targets") {
      cfg.n_targets = value.get<std::vector<double>>();
    } else if (key == "fallback_c") {
      cfg.fallback_c = value.get<double>();
    } else if (key == "q") {
      cfg.q = value.get<int>();
    } else if (key == "alpha") {
      cfg.alpha = value.get<double>();
    } else if (key == "beta") {
      cfg.beta = value.get<double>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "threads") {
      cfg.threads = value.get<unsigned>();
    } else if (key == "cost_model") {
      cfg.cost_model.a = value.at("a").get<double>();
      cfg.cost_model.b = value.at("b").get<double>();
    } else if (key == "out") {
      cfg.out_dir = value.get<std::string>();
    } else if (key == "dry_run") {
      cfg.dry_run = value.get<bool>();
    } else {
      throw InvalidArgumentError("config: unknown key '" + key + "'");
    }
  }
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = kind_name(cfg.kind);
  j["model"] = cfg.model;
  j["s_star"] = cfg.s_star;
  if (cfg.h.one) {
    j["h"] = "one";
  } else {
    j["h"] = {{"lo", cfg.h.lo}, {"hi", cfg.h.hi}};
  }
  if (!cfg.deltas.empty()) j["deltas"] = cfg.deltas;
  if (cfg.delta != 0.0) j["delta"] = detail::tolerance_to_json(cfg.delta);
  if (cfg.n != 0) j["n"] = cfg.n;
  if (cfg.k != 0) j["k"] = cfg.k;
  if (cfg.n_hat != 0) j["n_hat"] = cfg.n_hat;
  if (cfg.kappa != 0.0) j["kappa"] = cfg.kappa;
  if (!cfg.cost_grid.empty()) j["cost_grid"] = cfg.cost_grid;
  if (!cfg.n_targets.empty()) j["n_targets"] = cfg.n_targets;
  if (cfg.fallback_c != 0.0) j["fallback_c"] = cfg.fallback_c;
  if (cfg.q != 0) j["q"] = cfg.q;
  if (cfg.alpha != 0.0) j["alpha"] = cfg.alpha;
  if (cfg.beta != 0.0) j["beta"] = cfg.beta;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["cost_model"] = {{"a", cfg.cost_model.a}, {"b", cfg.cost_model.b}};
  j["out"] = cfg.out_dir;
  j["dry_run"] = cfg.dry_run;
  return j;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Returns every violation found (empty list means valid).  Pure function.
inline std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> violations;
  const auto require = [&](bool ok, const std::string& message) {
    if (!ok) violations.push_back(message);
  };

  require(cfg.model == "toy", "model: only the built-in 'toy' model is available");
  require(cfg.s_star.size() == 2, "s_star: toy model needs exactly 2 components");
  for (double s : cfg.s_star) {
    require(std::isfinite(s), "s_star: components must be finite");
  }
  require(cfg.threads >= 1, "threads: must be a positive integer");
  require(!cfg.h.one ? cfg.h.lo < cfg.h.hi : true, "h: lo must be below hi");
  require(cfg.cost_model.a >= 0.0, "cost_model.a: must be nonnegative");
  require(cfg.cost_model.b > 0.0, "cost_model.b: must be positive");
  require(!cfg.out_dir.empty(), "out: output directory must be nonempty");

  const auto positive_finite = [&](const std::vector<double>& values,
                                   const std::string& field) {
    for (double v : values) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        violations.push_back(field + ": entries must be positive and finite");
        return;
      }
    }
  };

  switch (cfg.kind) {
    case Kind::BiasSweep:
      require(!cfg.deltas.empty(), "deltas: required for bias-sweep");
      positive_finite(cfg.deltas, "deltas");
      require(cfg.n >= 1, "n: must be >= 1");
      require(cfg.k >= 2, "k: must be >= 2");
      break;
    case Kind::MseSweep:
      positive_finite(cfg.deltas, "deltas");
      require(cfg.kappa > 0.0, "kappa: must be positive");
      require(cfg.k >= 2, "k: must be >= 2");
      break;
    case Kind::RateScan:
      require(cfg.cost_grid.size() >= 3, "cost_grid: needs at least 3 levels");
      positive_finite(cfg.cost_grid, "cost_grid");
      require(cfg.k >= 2, "k: must be >= 2");
      require(!cfg.h.one, "h: rate-scan needs a non-constant test function");
      break;
    case Kind::ModeCompare:
      require(cfg.delta > 0.0 && std::isfinite(cfg.delta),
              "delta: must be positive and finite");
      require(!cfg.n_targets.empty(), "n_targets: required for mode-compare");
      for (double t : cfg.n_targets) {
        require(t >= 1.0, "n_targets: entries must be >= 1");
      }
      require(cfg.k >= 100, "k: mode-compare needs k >= 100");
      break;
    case Kind::Tune:
      require(cfg.q >= 1, "q: must be >= 1");
      require((cfg.alpha > 0.0) != (cfg.beta > 0.0),
              "alpha/beta: exactly one target factor must be given");
      break;
    case Kind::Sample:
      require(cfg.delta > 0.0, "delta: must be positive");
      require((cfg.n >= 1) != (cfg.n_hat >= 1),
              "n/n_hat: exactly one stopping rule must be given");
      break;
  }
  return violations;
}

// ---------------------------------------------------------------------------
// Result table and serialization
// ---------------------------------------------------------------------------

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  ResultTable table;
  std::vector<ResultTable> extra_tables;
  nlohmann::json config_echo;
  std::string markdown;
  double wall_seconds = 0.0;
  std::uint64_t total_proposals = 0;
  std::vector<std::filesystem::path> files_written;
};

namespace detail {

/// 17 significant digits: round-trip exact for 64-bit doubles.
inline std::string format_full(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

inline std::string format_short(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

inline std::string to_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_full(row[c]);
    }
    out += '\n';
  }
  return out;
}

inline void append_markdown_table(std::string& md, const ResultTable& table) {
  md += '|';
  for (const auto& col : table.columns) md += ' ' + col + " |";
  md += "\n|";
  for (std::size_t c = 0; c < table.columns.size(); ++c) md += "---|";
  md += '\n';
  for (const auto& row : table.rows) {
    md += '|';
    for (double v : row) md += ' ' + format_short(v) + " |";
    md += '\n';
  }
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("io_error", "cannot open " + path.string() + " for writing");
  }
  out << contents;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiment dispatch
// ---------------------------------------------------------------------------

namespace detail {

struct ToyContext {
  ModelSpec model;
  AcceptanceNorm norm;
  std::vector<double> s_star;
  toy::IndicatorTest test;
  TestFunction h;
  bool h_is_one = false;
  double y_exact = 0.0;
};

inline ToyContext make_toy_context(const ExperimentConfig& cfg) {
  ToyContext ctx;
  ctx.model = toy::toy_model();
  ctx.norm = AcceptanceNorm::identity(2);
  ctx.s_star = cfg.s_star;
  ctx.h_is_one = cfg.h.one;
  if (cfg.h.one) {
    ctx.h = constant_one();
    ctx.y_exact = 1.0;
  } else {
    ctx.test = toy::IndicatorTest{cfg.h.lo, cfg.h.hi};
    ctx.h = toy::make_indicator(ctx.test);
    ctx.y_exact = toy::posterior_interval_probability(ctx.s_star, ctx.test);
  }
  return ctx;
}

inline std::vector<double> auto_mse_grid(const ToyContext& ctx, double kappa) {
  const double d_hint =
      ctx.h_is_one ? 1.0 : toy::d_opt(ctx.s_star, ctx.test);
  const double center = abcr::detail::schedule_center(d_hint, kappa, 2);
  return abcr::detail::geometric_grid(center, 4.0, 12);
}

inline ExperimentResult run_bias_sweep(const ExperimentConfig& cfg) {
  ToyContext ctx = make_toy_context(cfg);
  const double bias_coeff =
      ctx.h_is_one ? 0.0 : toy::bias_constant(ctx.s_star, ctx.test);
  const auto rows =
      bias_sweep(ctx.model, ctx.norm, ctx.s_star, ctx.h, cfg.deltas, cfg.n,
                 cfg.k, ctx.y_exact, cfg.seed, cfg.threads);

  ExperimentResult result;
  result.table.name = kind_name(cfg.kind);
  result.table.columns = {"delta", "mean_bias", "std_error", "theory_bias"};
  for (const BiasSweepRow& row : rows) {
    result.table.rows.push_back({row.delta, row.mean_bias, row.std_error,
                                 bias_coeff * row.delta * row.delta});
    result.total_proposals += static_cast<std::uint64_t>(
        std::llround(row.mean_proposals * row.k));
  }
  return result;
}

inline ExperimentResult run_mse_sweep(const ExperimentConfig& cfg) {
  ToyContext ctx = make_toy_context(cfg);
  const std::vector<double> grid =
      cfg.deltas.empty() ? auto_mse_grid(ctx, cfg.kappa) : cfg.deltas;
  const std::vector<int> ns = constant_cost_schedule(grid, cfg.kappa, 2);

  ExperimentResult result;
  result.table.name = kind_name(cfg.kind);
  result.table.columns = {"delta", "n", "mse", "se"};
  std::vector<std::pair<double, double>> curve;
  for (std::size_t di = 0; di < grid.size(); ++di) {
    const MsePoint point =
        mse_point(ctx.model, ctx.norm, ctx.s_star, ctx.h, grid[di], ns[di],
                  cfg.k, ctx.y_exact, abcr::detail::chain_seed(cfg.seed, di), cfg.threads);
    result.table.rows.push_back(
        {grid[di], static_cast<double>(ns[di]), point.mse, point.se});
    curve.emplace_back(grid[di], point.mse);
    result.total_proposals += static_cast<std::uint64_t>(
        std::llround(point.mean_proposals * cfg.k));
  }

  const MseFit fit = fit_mse_curve(curve, 2);
  std::string& md = result.markdown;
  md += "## Fitted curve mse(delta) = a delta^-2 + b delta^4\n\n";
  md += "- a = " + format_short(fit.a) + "\n";
  md += "- b = " + format_short(fit.b) + "\n";
  md += "- rss = " + format_short(fit.rss) + "\n";
  if (fit.coefficients_positive) {
    md += "- delta_star = " + format_short(fit.delta_star) + "\n";
    md += "- mse_star = " + format_short(fit.mse_star) + "\n";
  } else {
    md += "- fit coefficients not both positive; no optimum extracted\n";
  }
  md += "\n";
  return result;
}

inline ExperimentResult run_rate_scan(const ExperimentConfig& cfg) {
  ToyContext ctx = make_toy_context(cfg);
  RateOptions options;
  options.threads = cfg.threads;
  options.d_opt_hint = toy::d_opt(ctx.s_star, ctx.test);
  const RateScan scan =
      rate_experiment(ctx.model, ctx.norm, ctx.s_star, ctx.h, ctx.y_exact,
                      cfg.cost_grid, {}, cfg.k, cfg.seed, options);

  ExperimentResult result;
  result.table.name = kind_name(cfg.kind);
  result.table.columns = {"cost", "delta_star", "mse_star", "a", "b", "excluded"};
  ResultTable points;
  points.name = "points";
  points.columns = {"cost", "delta", "n", "mse", "se"};
  for (const RateLevel& level : scan.levels) {
    result.table.rows.push_back({level.cost, level.fit.delta_star,
                                 level.fit.mse_star, level.fit.a, level.fit.b,
                                 level.excluded ? 1.0 : 0.0});
    for (std::size_t di = 0; di < level.deltas.size(); ++di) {
      points.rows.push_back({level.cost, level.deltas[di],
                             static_cast<double>(level.ns[di]),
                             level.points[di].mse, level.points[di].se});
      result.total_proposals += static_cast<std::uint64_t>(
          std::llround(level.points[di].mean_proposals * cfg.k));
    }
  }
  result.extra_tables.push_back(std::move(points));

  std::string& md = result.markdown;
  md += "## Gradient summary\n\n";
  md += "| Plot | Gradient | Standard error | Theoretical gradient |\n";
  md += "|---|---|---|---|\n";
  md += "| delta | " + format_short(scan.delta_star_fit.gradient) + " | " +
        format_short(scan.delta_star_fit.gradient_se) +
        " | -1/6 ~ -0.167 |\n";
  md += "| MSE | " + format_short(scan.mse_star_fit.gradient) + " | " +
        format_short(scan.mse_star_fit.gradient_se) +
        " | -2/3 ~ -0.667 |\n\n";
  return result;
}

inline ExperimentResult run_mode_compare(const ExperimentConfig& cfg) {
  ToyContext ctx = make_toy_context(cfg);
  ModeComparisonOptions options;
  options.threads = cfg.threads;
  options.p_delta =
      toy::ball_moments(ctx.s_star, cfg.delta, ctx.test).p_delta;

  ExperimentResult result;
  result.table.name = kind_name(cfg.kind);
  result.table.columns = {"n_target",       "p_delta",
                          "n_hat",          "n_fixed",
                          "mse_fixed_proposals", "mse_fixed_accepted",
                          "ratio"};
  for (std::size_t t = 0; t < cfg.n_targets.size(); ++t) {
    const ModeComparison comparison = fixed_mode_comparison(
        ctx.model, ctx.norm, ctx.s_star, ctx.h, ctx.y_exact, cfg.delta,
        static_cast<int>(cfg.n_targets[t]), cfg.k, cfg.fallback_c,
        abcr::detail::chain_seed(cfg.seed, t), options);
    result.table.rows.push_back(
        {cfg.n_targets[t], comparison.p_delta,
         static_cast<double>(comparison.n_hat),
         static_cast<double>(comparison.n_fixed),
         comparison.mse_fixed_proposals, comparison.mse_fixed_accepted,
         comparison.ratio});
    result.total_proposals += static_cast<std::uint64_t>(std::llround(
        cfg.k * (static_cast<double>(comparison.n_hat) +
                 comparison.mean_proposals_accepted_mode)));
  }
  return result;
}

inline ExperimentResult run_tune(const ExperimentConfig& cfg) {
  const std::variant<ErrorFactor, BudgetFactor> target =
      cfg.alpha > 0.0
          ? std::variant<ErrorFactor, BudgetFactor>(ErrorFactor{cfg.alpha})
          : std::variant<ErrorFactor, BudgetFactor>(BudgetFactor{cfg.beta});
  const ScalingAdvice advice = scaling_advisor(cfg.q, target);

  ExperimentResult result;
  result.table.name = kind_name(cfg.kind);
  result.table.columns = {"n_factor", "delta_factor", "cost_factor",
                          "error_factor"};
  result.table.rows.push_back({advice.n_factor, advice.delta_factor,
                               advice.cost_factor, advice.error_factor});
  return result;
}

inline ExperimentResult run_sample(const ExperimentConfig& cfg) {
  ToyContext ctx = make_toy_context(cfg);
  AbcConfig run_cfg;
  run_cfg.s_star = ctx.s_star;
  run_cfg.delta = cfg.delta;
  run_cfg.seed = cfg.seed;
  if (cfg.n >= 1) {
    run_cfg.mode = FixedAccepted{cfg.n};
  } else {
    run_cfg.mode = FixedProposals{cfg.n_hat, cfg.fallback_c};
  }
  const AbcRun run = abc_rejection(ctx.model, ctx.norm, run_cfg);

  ExperimentResult result;
  result.table.name = kind_name(cfg.kind);
  result.table.columns = {"index"};
  for (int j = 0; j < ctx.model.p; ++j) {
    result.table.columns.push_back("theta_" + std::to_string(j));
  }
  result.table.columns.push_back("distance");
  for (std::size_t i = 0; i < run.n_accepted; ++i) {
    std::vector<double> row = {static_cast<double>(i)};
    const auto theta = run.parameter(i);
    row.insert(row.end(), theta.begin(), theta.end());
    row.push_back(run.accepted_distances[i]);
    result.table.rows.push_back(std::move(row));
  }
  result.total_proposals = run.n_proposals;
  return result;
}

inline std::string describe_plan(const ExperimentConfig& cfg) {
  std::ostringstream plan;
  plan << kind_name(cfg.kind) << " (dry run)\n";
  plan << "  model=" << cfg.model << " seed=" << cfg.seed
       << " threads=" << cfg.threads << "\n";
  const auto grid_line = [&](const char* label,
                             const std::vector<double>& values) {
    plan << "  " << label << ":";
    for (double v : values) plan << ' ' << format_short(v);
    plan << "\n";
  };
  switch (cfg.kind) {
    case Kind::BiasSweep:
      plan << "  n=" << cfg.n << " k=" << cfg.k << "\n";
      grid_line("delta grid", cfg.deltas);
      plan << "  planned rows: " << cfg.deltas.size() << "\n";
      break;
    case Kind::MseSweep: {
      ToyContext ctx = make_toy_context(cfg);
      const std::vector<double> grid =
          cfg.deltas.empty() ? auto_mse_grid(ctx, cfg.kappa) : cfg.deltas;
      plan << "  kappa=" << cfg.kappa << " k=" << cfg.k << "\n";
      grid_line("delta grid", grid);
      plan << "  planned rows: " << grid.size() << "\n";
      break;
    }
    case Kind::RateScan: {
      ToyContext ctx = make_toy_context(cfg);
      plan << "  k=" << cfg.k << "\n";
      grid_line("cost levels", cfg.cost_grid);
      const double d_hint = toy::d_opt(ctx.s_star, ctx.test);
      grid_line("first delta grid",
                abcr::detail::geometric_grid(
                    abcr::detail::schedule_center(d_hint, cfg.cost_grid.front(), 2),
                               4.0, 12));
      plan << "  later grids centre on the previous level's delta_star\n";
      plan << "  planned rows: " << cfg.cost_grid.size() << "\n";
      break;
    }
    case Kind::ModeCompare:
      plan << "  delta=" << format_short(cfg.delta) << " k=" << cfg.k << "\n";
      grid_line("n_targets", cfg.n_targets);
      plan << "  planned rows: " << cfg.n_targets.size() << "\n";
      break;
    case Kind::Tune:
      plan << "  q=" << cfg.q;
      if (cfg.alpha > 0.0) plan << " alpha=" << format_short(cfg.alpha);
      if (cfg.beta > 0.0) plan << " beta=" << format_short(cfg.beta);
      plan << "\n  planned rows: 1\n";
      break;
    case Kind::Sample:
      plan << "  delta=" << format_short(cfg.delta);
      if (cfg.n >= 1) {
        plan << " n=" << cfg.n;
      } else {
        plan << " n_hat=" << cfg.n_hat;
      }
      plan << "\n";
      break;
  }
  return plan.str();
}

}  // namespace detail

/// Runs one experiment: dispatches to the analysis routine, assembles the
/// result tables, and writes <out>/<experiment>.csv (plus one CSV per extra
/// table), <out>/<experiment>.md and <out>/config.echo.json.  With dry_run
/// set, prints the planned grid to `log` and performs no simulations and no
/// writes.  All outputs are a pure function of the configuration.
inline ExperimentResult run(const ExperimentConfig& cfg,
                            std::ostream* log = nullptr) {
  {
    const auto violations = validate(cfg);
    if (!violations.empty()) {
      std::string joined;
      for (const auto& v : violations) {
        if (!joined.empty()) joined += "; ";
        joined += v;
      }
      throw Error("config_invalid", joined);
    }
  }

  if (cfg.dry_run) {
    ExperimentResult result;
    result.config_echo = to_json(cfg);
    result.markdown = detail::describe_plan(cfg);
    if (log) *log << result.markdown;
    return result;
  }

  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  switch (cfg.kind) {
    case Kind::BiasSweep: result = detail::run_bias_sweep(cfg); break;
    case Kind::MseSweep: result = detail::run_mse_sweep(cfg); break;
    case Kind::RateScan: result = detail::run_rate_scan(cfg); break;
    case Kind::ModeCompare: result = detail::run_mode_compare(cfg); break;
    case Kind::Tune: result = detail::run_tune(cfg); break;
    case Kind::Sample: result = detail::run_sample(cfg); break;
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  result.config_echo = to_json(cfg);

  std::string md;
  md += std::string("# ") + kind_name(cfg.kind) + "\n\n";
  md += std::string("- version: ") + kVersion + "\n";
  md += "- seed: " + std::to_string(cfg.seed) + "\n";
  md += "- threads: " + std::to_string(cfg.threads) + "\n";
  md += "- wall clock [s]: " + detail::format_short(result.wall_seconds) + "\n";
  md += "- total proposals: " + std::to_string(result.total_proposals) + "\n";
  md += "- total cost (a + b N): " +
        detail::format_short(cfg.cost_model.a +
                             cfg.cost_model.b *
                                 static_cast<double>(result.total_proposals)) +
        "\n\n";
  md += "## Results\n\n";
  detail::append_markdown_table(md, result.table);
  md += "\n";
  md += result.markdown;  // experiment-specific sections
  for (const ResultTable& extra : result.extra_tables) {
    md += "## " + extra.name + "\n\n";
    detail::append_markdown_table(md, extra);
    md += "\n";
  }
  md += "## Config\n\n```json\n" + result.config_echo.dump(2) + "\n```\n";
  result.markdown = md;

  const std::filesystem::path out_dir(cfg.out_dir);
  std::filesystem::create_directories(out_dir);
  const std::string base = kind_name(cfg.kind);

  const auto csv_path = out_dir / (base + ".csv");
  detail::write_file(csv_path, detail::to_csv(result.table));
  result.files_written.push_back(csv_path);
  for (const ResultTable& extra : result.extra_tables) {
    const auto path = out_dir / (base + "." + extra.name + ".csv");
    detail::write_file(path, detail::to_csv(extra));
    result.files_written.push_back(path);
  }
  const auto md_path = out_dir / (base + ".md");
  detail::write_file(md_path, result.markdown);
  result.files_written.push_back(md_path);
  const auto echo_path = out_dir / "config.echo.json";
  detail::write_file(echo_path, result.config_echo.dump(2) + "\n");
  result.files_written.push_back(echo_path);

  if (log) {
    *log << base << ": wrote " << result.table.rows.size() << " rows to "
         << csv_path.string() << "\n";
  }
  return result;
}

}  // namespace abcr::experiments
