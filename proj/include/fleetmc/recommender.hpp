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

// Sequential experiment selection over a fleet: greedy per-machine picks on
// the completed utility matrix, the replayed campaign loop, the per-machine
// (non-collaborative) baseline, and synthetic fleets to run them on.

#ifndef FLEETMC_RECOMMENDER_HPP_
#define FLEETMC_RECOMMENDER_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fleetmc/completion.hpp"
#include "fleetmc/grid.hpp"
#include "fleetmc/masked_matrix.hpp"

namespace fleetmc {

enum class Participation { FullFleet, Limited };
enum class RegretVariant { TrueValue, Predicted };
enum class CampaignKind { Collaborative, NonCollaborative };

struct CampaignConfig {
  int budget = 19;  // rounds
  Participation mode = Participation::FullFleet;
  int limited = 0;  // machines per round when mode == Limited
  CompletionConfig completion;
  RegretVariant regret_variant = RegretVariant::TrueValue;
  std::uint64_t seed = 0;
  bool warm_start = false;
  int local_rank = 2;  // per-machine baseline rank

  void validate(Eigen::Index machines) const;
};

struct Selection {
  Eigen::Index machine = 0;
  Eigen::Index column = 0;

  friend bool operator==(const Selection&, const Selection&) = default;
};

// Best unobserved column of every machine that still has one; ties go to the
// lowest column.
template <typename Derived>
std::vector<Selection> select_full_fleet(const Eigen::MatrixBase<Derived>& predicted,
                                         const Mask& observed) {
  if (predicted.rows() != observed.rows() || predicted.cols() != observed.cols()) {
    throw ValidationError("prediction and mask shapes differ");
  }
  std::vector<Selection> picks;
  for (Eigen::Index k = 0; k < predicted.rows(); ++k) {
    std::optional<Eigen::Index> best;
    for (Eigen::Index j = 0; j < predicted.cols(); ++j) {
      if (observed(k, j)) continue;
      if (!best || predicted(k, j) > predicted(k, *best)) best = j;
    }
    if (best) picks.push_back({k, *best});
  }
  return picks;
}

// The c machines whose best unobserved prediction is largest, in descending
// order of that value (ties to the lower machine index).
template <typename Derived>
std::vector<Selection> select_limited_fleet(const Eigen::MatrixBase<Derived>& predicted,
                                            const Mask& observed, int c) {
  if (c < 1 || c > predicted.rows()) {
    throw ValidationError("limited participation needs 1 <= c <= K");
  }
  std::vector<Selection> picks = select_full_fleet(predicted, observed);
  std::stable_sort(picks.begin(), picks.end(), [&](const Selection& a, const Selection& b) {
    return predicted(a.machine, a.column) > predicted(b.machine, b.column);
  });
  if (picks.size() > static_cast<std::size_t>(c)) picks.resize(static_cast<std::size_t>(c));
  return picks;
}

struct SelectionRecord {
  Eigen::Index machine = 0;
  Eigen::Index column = 0;
  std::vector<double> parameters;  // physical grid values of the column
  double acquired = 0;             // revealed utility
  double predicted = 0;            // model prediction when selected
};

struct RoundRecord {
  int round = 0;  // 1-based
  std::vector<SelectionRecord> selections;
  std::size_t observed_count = 0;  // |Omega| after this round's reveals
  std::string prediction_digest;   // FNV-1a of the prediction(s) used
};

struct CampaignTrace {
  CampaignKind kind = CampaignKind::Collaborative;
  Participation mode = Participation::FullFleet;
  int limited = 0;
  int budget = 0;
  Mask initial_mask;
  Mask final_mask;
  std::vector<RoundRecord> rounds;
  // Flat run configuration echoed for provenance.
  std::vector<std::pair<std::string, std::string>> config;

  friend bool operator==(const CampaignTrace& a, const CampaignTrace& b);
};

// 64-bit FNV-1a over the IEEE bit patterns, as 16 lowercase hex digits.
std::string matrix_digest(const Matrixd& m);

// Completed fleet matrix at the configured rank. The rank is clamped below
// min(K, l); when nothing below that remains (a single machine or a single
// condition) the column-mean imputation is the prediction.
Matrixd predict_fleet(const MaskedMatrixd& m, const CompletionConfig& cfg,
                      std::optional<FactorPair<double>>* warm = nullptr);

// Machine k's row laid out on the grid: first axis down, the rest across.
MaskedMatrixd machine_grid_view(const MaskedMatrixd& fleet, Eigen::Index k,
                                const ParameterGrid& grid);

struct LocalRecommendation {
  Eigen::Index column = 0;  // flat index
  double predicted = 0;
  Matrixd prediction;       // local grid prediction
};

// Completes one machine's grid from its own observations only and returns
// the best unobserved cell, or nullopt when every cell is observed. Grid
// rows or columns without data are seeded with mean-imputed pseudo
// observations so the local factorization stays defined.
std::optional<LocalRecommendation> noncollab_recommend(const MaskedMatrixd& local,
                                                       const CampaignConfig& cfg);

CampaignTrace run_campaign(const Matrixd& ground_truth, const Mask& initial,
                           const CampaignConfig& cfg, const ParameterGrid& grid);

CampaignTrace run_baseline_campaign(const Matrixd& ground_truth, const Mask& initial,
                                    const CampaignConfig& cfg, const ParameterGrid& grid);

struct SyntheticFleetSpec {
  int machines = 10;
  int conditions = 35;
  int true_rank = 3;
  double factor_scale = 1.0;
  double noise_std = 0.0;
  bool noise_relative = false;  // noise_std is a fraction of the signal RMS
  double mask_fraction = 0.55;
  std::uint64_t seed = 0;
  bool hide_optimum = false;  // keep every machine's true optimum unobserved
  int min_row_observed = 1;
  int min_col_observed = 0;

  void validate() const;
};

struct SyntheticFleet {
  Matrixd ground_truth;
  MaskedMatrixd initial;
};

// Number of entries kept observed: K l - floor(mask_fraction K l).
std::size_t observed_target(const SyntheticFleetSpec& spec);

// Draws a uniformly random support of observed_target(spec) entries subject
// to the row/column minima, by rejection.
Mask draw_initial_mask(const Matrixd& ground_truth, const SyntheticFleetSpec& spec,
                       std::mt19937_64& rng);

// U = A B^T + E with Gaussian factors and noise, plus the initial mask.
SyntheticFleet generate_synthetic_fleet(const SyntheticFleetSpec& spec);

// Single axis with values 0..l-1, for matrices without a physical grid.
ParameterGrid index_grid(std::size_t l);

}  // namespace fleetmc

#endif  // FLEETMC_RECOMMENDER_HPP_
