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

#ifndef FLEETMC_RUN_CONFIG_HPP_
#define FLEETMC_RUN_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fleetmc/grid.hpp"
#include "fleetmc/recommender.hpp"
#include "fleetmc/utility.hpp"

namespace fleetmc {

// Everything a command needs, filled from defaults, then the config file,
// then command-line overrides. Grammar of the config file:
//
//   # comment
//   key = value
//   axis = name|unit|v1,v2,...        explicit values, or
//   axis = name|unit|first:step:last  evenly stepped
//
// The first axis line replaces the default speed x acceleration grid; later
// axis lines append. Keys are the long CLI flag names (rank, lambda, budget,
// limited, mask-fraction, seed, regret-variant, ...).
struct RunConfig {
  ParameterGrid grid = printer_speed_accel_grid();
  SyntheticFleetSpec fleet = default_fleet();
  CampaignConfig campaign;
  WeightScheme weights;
  std::string ground_truth;  // full matrix CSV; empty = synthetic fleet

  static SyntheticFleetSpec default_fleet();

  void set(std::string_view key, std::string_view value);

  // The next axis line starts a fresh grid.
  void reset_grid() { grid_from_file_ = false; }

  // Flat key/value echo for provenance. Execution-only settings (threads)
  // are left out so outputs do not depend on them.
  std::vector<std::pair<std::string, std::string>> to_pairs() const;

 private:
  bool grid_from_file_ = false;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

RegretVariant parse_regret_variant(std::string_view s);

}  // namespace fleetmc

#endif  // FLEETMC_RUN_CONFIG_HPP_
