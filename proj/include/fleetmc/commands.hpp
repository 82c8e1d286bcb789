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

// Bodies of the fleetmc subcommands. They throw ValidationError or
// NumericError; the executable maps those to exit codes 1 and 2.

#ifndef FLEETMC_COMMANDS_HPP_
#define FLEETMC_COMMANDS_HPP_

#include <filesystem>
#include <iosfwd>

#include "fleetmc/completion.hpp"
#include "fleetmc/evaluation.hpp"
#include "fleetmc/run_config.hpp"

namespace fleetmc {

namespace fs = std::filesystem;

// Writes utility.csv, quality_norm.csv and time_norm.csv into out_dir.
MaskedMatrixd cmd_build_utility(const fs::path& scans, const fs::path& times, const RunConfig& cfg,
                                const fs::path& out_dir, std::ostream& out);

RankEstimate<double> cmd_estimate_rank(const fs::path& matrix, std::ostream& out);

// Writes the completed matrix (every entry observed) to `completed`.
Matrixd cmd_complete(const fs::path& matrix, const RunConfig& cfg, const fs::path& completed,
                     std::ostream& out);

std::vector<Selection> cmd_recommend(const fs::path& matrix, const RunConfig& cfg,
                                     std::ostream& out);

struct SimulationOutcome {
  Matrixd ground_truth;
  CampaignTrace collaborative;
  CampaignTrace baseline;
  EvaluationResult collaborative_eval;
  EvaluationResult baseline_eval;
};

// Runs both campaigns and writes ground_truth.csv, initial_matrix.csv,
// collaborative_trace.json, noncollaborative_trace.json, report.json,
// trials.csv and cumulative_regret_{collaborative,noncollaborative}.csv.
SimulationOutcome cmd_simulate(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out);

// Re-evaluates saved traces against a ground-truth matrix.
void cmd_evaluate(const fs::path& collaborative, const fs::path& baseline,
                  const fs::path& ground_truth, RegretVariant variant, const fs::path& out_dir,
                  std::ostream& out);

}  // namespace fleetmc

#endif  // FLEETMC_COMMANDS_HPP_
