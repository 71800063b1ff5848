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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abcr/abcr.hpp"

namespace {

using abcr::experiments::ExperimentConfig;
using abcr::experiments::Kind;

double parse_delta_arg(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t consumed = 0;
  const double value = std::stod(text, &consumed);
  if (consumed != text.size()) {
    throw CLI::ValidationError("delta", "cannot parse '" + text + "'");
  }
  return value;
}

struct CliOverrides {
  std::string config_file;
  std::string delta_text;
};

ExperimentConfig assemble_config(Kind kind, CLI::App* sub,
                                 const CliOverrides& overrides,
                                 ExperimentConfig flag_values) {
  ExperimentConfig cfg;
  cfg.kind = kind;

  if (const char* env = std::getenv("ABC_RATES_THREADS")) {
    cfg.threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  if (!overrides.config_file.empty()) {
    std::ifstream in(overrides.config_file);
    if (!in) {
      throw abcr::Error("config_invalid",
                        "cannot read config file " + overrides.config_file);
    }
    nlohmann::json j = nlohmann::json::parse(in);
    abcr::experiments::merge_json(cfg, j);
    cfg.kind = kind;  // the subcommand wins over the file
  }

  const auto given = [&](const char* flag) {
    const CLI::Option* option = sub->get_option_no_throw(flag);
    return option != nullptr && option->count() > 0;
  };
  const auto take = [&](const char* flag, auto member) {
    if (given(flag)) cfg.*member = flag_values.*member;
  };
  take("--model", &ExperimentConfig::model);
  take("--s-star", &ExperimentConfig::s_star);
  take("--deltas", &ExperimentConfig::deltas);
  take("--n", &ExperimentConfig::n);
  take("--k", &ExperimentConfig::k);
  take("--n-hat", &ExperimentConfig::n_hat);
  take("--kappa", &ExperimentConfig::kappa);
  take("--cost-grid", &ExperimentConfig::cost_grid);
  take("--n-targets", &ExperimentConfig::n_targets);
  take("--fallback-c", &ExperimentConfig::fallback_c);
  take("--q", &ExperimentConfig::q);
  take("--alpha", &ExperimentConfig::alpha);
  take("--beta", &ExperimentConfig::beta);
  take("--seed", &ExperimentConfig::seed);
  take("--threads", &ExperimentConfig::threads);
  take("--out", &ExperimentConfig::out_dir);
  if (given("--delta")) cfg.delta = parse_delta_arg(overrides.delta_text);
  if (given("--h-lo")) {
    cfg.h.one = false;
    cfg.h.lo = flag_values.h.lo;
  }
  if (given("--h-hi")) {
    cfg.h.one = false;
    cfg.h.hi = flag_values.h.hi;
  }
  if (given("--h-one")) cfg.h = abcr::experiments::HSpec{true, 0.0, 0.0};
  if (given("--cost-a")) cfg.cost_model.a = flag_values.cost_model.a;
  if (given("--cost-b")) cfg.cost_model.b = flag_values.cost_model.b;
  if (given("--dry-run")) cfg.dry_run = true;

  abcr::experiments::apply_defaults(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ABC rejection sampling experiments"};
  app.require_subcommand(1);

  struct SubState {
    Kind kind;
    CLI::App* sub = nullptr;
    CliOverrides overrides;
    ExperimentConfig flags;
  };
  std::vector<SubState*> states;

  for (Kind kind : {Kind::BiasSweep, Kind::MseSweep, Kind::RateScan,
                    Kind::ModeCompare, Kind::Tune, Kind::Sample}) {
    auto* state = new SubState{};
    state->kind = kind;
    CLI::App* sub = app.add_subcommand(abcr::experiments::kind_name(kind));
    state->sub = sub;

    sub->add_option("--config", state->overrides.config_file,
                    "JSON config file; flags override its values");
    sub->add_option("--seed", state->flags.seed, "base RNG seed (uint64)");
    sub->add_option("--threads", state->flags.threads,
                    "worker count (default: env ABC_RATES_THREADS, else 1)");
    sub->add_option("--out", state->flags.out_dir, "output directory");
    sub->add_flag("--dry-run", "print the planned grid; no simulation");
    sub->add_option("--model", state->flags.model, "model name (toy)");
    sub->add_option("--s-star", state->flags.s_star, "observed summary")
        ->expected(2);
    sub->add_option("--h-lo", state->flags.h.lo, "indicator lower bound");
    sub->add_option("--h-hi", state->flags.h.hi, "indicator upper bound");
    sub->add_flag("--h-one", "use the constant test function h == 1");
    sub->add_option("--fallback-c", state->flags.fallback_c,
                    "estimate when nothing is accepted");
    sub->add_option("--cost-a", state->flags.cost_model.a, "fixed cost per run");
    sub->add_option("--cost-b", state->flags.cost_model.b, "cost per proposal");

    switch (kind) {
      case Kind::BiasSweep:
        sub->add_option("--deltas", state->flags.deltas, "tolerance grid")
            ->delimiter(',');
        sub->add_option("--n", state->flags.n, "accepted samples per estimate");
        sub->add_option("--k", state->flags.k, "replicates per tolerance");
        break;
      case Kind::MseSweep:
        sub->add_option("--deltas", state->flags.deltas,
                        "tolerance grid (default: auto around the optimum)")
            ->delimiter(',');
        sub->add_option("--kappa", state->flags.kappa,
                        "cost level n * delta^-q");
        sub->add_option("--k", state->flags.k, "replicates per tolerance");
        break;
      case Kind::RateScan:
        sub->add_option("--cost-grid", state->flags.cost_grid, "cost levels")
            ->delimiter(',');
        sub->add_option("--k", state->flags.k, "replicates per point");
        break;
      case Kind::ModeCompare:
        sub->add_option("--delta", state->overrides.delta_text, "tolerance");
        sub->add_option("--n-targets", state->flags.n_targets,
                        "target expected accepted counts")
            ->delimiter(',');
        sub->add_option("--k", state->flags.k, "replicates per mode");
        break;
      case Kind::Tune:
        sub->add_option("--q", state->flags.q, "summary dimension");
        sub->add_option("--alpha", state->flags.alpha,
                        "divide the RMSE by this factor");
        sub->add_option("--beta", state->flags.beta,
                        "multiply the budget by this factor");
        break;
      case Kind::Sample:
        sub->add_option("--delta", state->overrides.delta_text,
                        "tolerance ('inf' accepts everything)");
        sub->add_option("--n", state->flags.n, "accepted samples to draw");
        sub->add_option("--n-hat", state->flags.n_hat, "fixed proposal count");
        break;
    }
    states.push_back(state);
  }

  CLI11_PARSE(app, argc, argv);

  for (SubState* state : states) {
    if (!state->sub->parsed()) continue;
    try {
      const ExperimentConfig cfg =
          assemble_config(state->kind, state->sub, state->overrides,
                          state->flags);
      const auto violations = abcr::experiments::validate(cfg);
      if (!violations.empty()) {
        for (const auto& violation : violations) {
          std::cerr << "error: config: " << violation << "\n";
        }
        return 2;
      }
      const auto result = abcr::experiments::run(cfg, &std::cout);
      if (cfg.kind == Kind::Tune && !cfg.dry_run) {
        const auto& row = result.table.rows.front();
        for (std::size_t c = 0; c < result.table.columns.size(); ++c) {
          char buffer[64];
          std::snprintf(buffer, sizeof buffer, "%.4g", row[c]);
          std::cout << result.table.columns[c] << "=" << buffer << "\n";
        }
      }
      return 0;
    } catch (const abcr::Error& error) {
      std::cerr << "error: " << error.code() << ": " << error.what() << "\n";
      return error.code() == "config_invalid" ? 2 : 1;
    } catch (const std::exception& error) {
      std::cerr << "error: internal: " << error.what() << "\n";
      return 1;
    }
  }
  return 2;
}
