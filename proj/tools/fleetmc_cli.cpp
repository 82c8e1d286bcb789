// Copyright 2026 The fleetmc Authors. All Rights Reserved.
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

// fleetmc: collaborative process-parameter recommendation for machine fleets.
//
//   fleetmc build-utility --scans s.csv --times t.csv --out dir
//   fleetmc estimate-rank --matrix U.csv
//   fleetmc complete      --matrix U.csv --out completed.csv
//   fleetmc recommend     --matrix U.csv [--limited c]
//   fleetmc simulate      [--config run.cfg] --out dir
//   fleetmc evaluate      --trace collab.json [--baseline base.json] --ground-truth U.csv --out dir

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "fleetmc/commands.hpp"
#include "fleetmc/io.hpp"

namespace {

using fleetmc::RunConfig;

// Options shared by commands that take a run configuration. Values are kept
// as text and applied on top of the config file in a fixed order.
struct ConfigOptions {
  std::string config_path;
  std::vector<std::string> axes;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value configuration file");
    app->add_option("--axis", axes, "grid axis name|unit|values, repeatable; replaces the config grid");
    for (const char* key : {"rank", "lambda", "budget", "limited", "mask-fraction", "seed",
                            "regret-variant", "machines", "true-rank", "factor-scale",
                            "noise-std", "noise-relative", "hide-optimum", "max-sweeps",
                            "rel-tol", "init", "lambda-start", "lambda-step", "threads", "warm-start", "local-rank",
                            "quality-weight", "ground-truth", "min-col-observed",
                            "min-row-observed"}) {
      app->add_option(std::string("--") + key, overrides[key]);
    }
  }

  RunConfig resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : fleetmc::load_config(config_path);
    if (!axes.empty()) {
      cfg.reset_grid();
      for (const auto& a : axes) cfg.set("axis", a);
    }
    for (const auto& [key, value] : overrides) {
      if (!value.empty()) cfg.set(key, value);
    }
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative sequential matrix completion for machine fleets"};
  app.require_subcommand(1);

  std::string scans, times, matrix, out, trace, baseline, ground_truth;
  std::string variant = "true-value";

  ConfigOptions build_opts, complete_opts, recommend_opts, simulate_opts;

  auto* build = app.add_subcommand("build-utility", "Scans and print times to a utility matrix");
  build->add_option("--scans", scans, "scan CSV")->required();
  build->add_option("--times", times, "print time CSV")->required();
  build->add_option("--out", out, "output directory")->required();
  build_opts.attach(build);

  auto* rank = app.add_subcommand("estimate-rank", "Spectral rank estimate of a utility matrix");
  rank->add_option("--matrix", matrix, "matrix CSV")->required();

  auto* complete = app.add_subcommand("complete", "Complete a matrix by ALS");
  complete->add_option("--matrix", matrix, "matrix CSV")->required();
  complete->add_option("--out", out, "completed matrix CSV")->required();
  complete_opts.attach(complete);

  auto* recommend = app.add_subcommand("recommend", "Next experiment per machine");
  recommend->add_option("--matrix", matrix, "matrix CSV")->required();
  recommend_opts.attach(recommend);

  auto* simulate = app.add_subcommand("simulate", "Replay collaborative and baseline campaigns");
  simulate->add_option("--out", out, "output directory")->required();
  simulate_opts.attach(simulate);

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate saved traces");
  evaluate->add_option("--trace", trace, "collaborative trace JSON")->required();
  evaluate->add_option("--baseline", baseline, "non-collaborative trace JSON");
  evaluate->add_option("--ground-truth", ground_truth, "fully observed matrix CSV")->required();
  evaluate->add_option("--regret-variant", variant, "true-value | predicted");
  evaluate->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*build) {
      fleetmc::cmd_build_utility(scans, times, build_opts.resolve(), out, std::cout);
    } else if (*rank) {
      fleetmc::cmd_estimate_rank(matrix, std::cout);
    } else if (*complete) {
      fleetmc::cmd_complete(matrix, complete_opts.resolve(), out, std::cout);
    } else if (*recommend) {
      fleetmc::cmd_recommend(matrix, recommend_opts.resolve(), std::cout);
    } else if (*simulate) {
      fleetmc::cmd_simulate(simulate_opts.resolve(), out, std::cout);
    } else if (*evaluate) {
      fleetmc::cmd_evaluate(trace, baseline, ground_truth, fleetmc::parse_regret_variant(variant),
                            out, std::cout);
    }
  } catch (const fleetmc::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const fleetmc::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
