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

#include <random>

#include "fleetmc/parallel.hpp"
#include "fleetmc/recommender.hpp"

namespace fleetmc {
namespace {

void check_inputs(const Matrixd& ground_truth, const Mask& initial, const CampaignConfig& cfg,
                  const ParameterGrid& grid) {
  if (ground_truth.rows() < 1 || ground_truth.cols() < 1) {
    throw ValidationError("ground truth matrix is empty");
  }
  if (!ground_truth.allFinite()) throw ValidationError("ground truth must be fully known");
  if (initial.rows() != ground_truth.rows() || initial.cols() != ground_truth.cols()) {
    throw ValidationError("initial mask shape does not match the ground truth");
  }
  if (grid.flat_size() != static_cast<std::size_t>(ground_truth.cols())) {
    throw ValidationError("grid size does not match the number of conditions");
  }
  for (Eigen::Index k = 0; k < initial.rows(); ++k) {
    if (initial.row(k).count() == 0) {
      throw ValidationError("machine " + std::to_string(k) + " has no initial observations");
    }
  }
  cfg.validate(ground_truth.rows());
}

SelectionRecord reveal(MaskedMatrixd& current, const Matrixd& ground_truth,
                       const ParameterGrid& grid, Eigen::Index k, Eigen::Index j, double predicted) {
  SelectionRecord rec;
  rec.machine = k;
  rec.column = j;
  rec.parameters = grid.unflatten(static_cast<std::size_t>(j)).values;
  rec.acquired = ground_truth(k, j);
  rec.predicted = predicted;
  current.observe(k, j, rec.acquired);
  return rec;
}

CampaignTrace empty_trace(CampaignKind kind, const Mask& initial, const CampaignConfig& cfg) {
  CampaignTrace trace;
  trace.kind = kind;
  trace.mode = cfg.mode;
  trace.limited = cfg.mode == Participation::Limited ? cfg.limited : 0;
  trace.budget = cfg.budget;
  trace.initial_mask = initial;
  return trace;
}

}  // namespace

bool operator==(const CampaignTrace& a, const CampaignTrace& b) {
  if (a.kind != b.kind || a.mode != b.mode || a.limited != b.limited || a.budget != b.budget ||
      a.config != b.config || a.rounds.size() != b.rounds.size()) {
    return false;
  }
  auto same_mask = [](const Mask& x, const Mask& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && (x == y).all();
  };
  if (!same_mask(a.initial_mask, b.initial_mask) || !same_mask(a.final_mask, b.final_mask)) {
    return false;
  }
  for (std::size_t t = 0; t < a.rounds.size(); ++t) {
    const auto& ra = a.rounds[t];
    const auto& rb = b.rounds[t];
    if (ra.round != rb.round || ra.observed_count != rb.observed_count ||
        ra.prediction_digest != rb.prediction_digest ||
        ra.selections.size() != rb.selections.size()) {
      return false;
    }
    for (std::size_t s = 0; s < ra.selections.size(); ++s) {
      const auto& sa = ra.selections[s];
      const auto& sb = rb.selections[s];
      if (sa.machine != sb.machine || sa.column != sb.column || sa.parameters != sb.parameters ||
          sa.acquired != sb.acquired || sa.predicted != sb.predicted) {
        return false;
      }
    }
  }
  return true;
}

CampaignTrace run_campaign(const Matrixd& ground_truth, const Mask& initial,
                           const CampaignConfig& cfg, const ParameterGrid& grid) {
  check_inputs(ground_truth, initial, cfg, grid);
  MaskedMatrixd current(ground_truth, initial);
  CampaignTrace trace = empty_trace(CampaignKind::Collaborative, initial, cfg);
  std::optional<FactorPair<double>> warm;

  for (int t = 1; t <= cfg.budget; ++t) {
    const Matrixd predicted = predict_fleet(current, cfg.completion, cfg.warm_start ? &warm : nullptr);
    const std::vector<Selection> picks =
        cfg.mode == Participation::FullFleet
            ? select_full_fleet(predicted, current.mask())
            : select_limited_fleet(predicted, current.mask(), cfg.limited);
    if (picks.empty()) break;

    RoundRecord round;
    round.round = t;
    round.prediction_digest = matrix_digest(predicted);
    for (const Selection& p : picks) {
      round.selections.push_back(
          reveal(current, ground_truth, grid, p.machine, p.column, predicted(p.machine, p.column)));
    }
    round.observed_count = current.observed_count();
    trace.rounds.push_back(std::move(round));
  }
  trace.final_mask = current.mask();
  return trace;
}

CampaignTrace run_baseline_campaign(const Matrixd& ground_truth, const Mask& initial,
                                    const CampaignConfig& cfg, const ParameterGrid& grid) {
  check_inputs(ground_truth, initial, cfg, grid);
  MaskedMatrixd current(ground_truth, initial);
  CampaignTrace trace = empty_trace(CampaignKind::NonCollaborative, initial, cfg);
  std::mt19937_64 rng(cfg.seed);
  const Eigen::Index k_total = ground_truth.rows();
  const Eigen::Index l = ground_truth.cols();

  for (int t = 1; t <= cfg.budget; ++t) {
    std::vector<Eigen::Index> open;
    for (Eigen::Index k = 0; k < k_total; ++k) {
      if (current.row_observed(k) < l) open.push_back(k);
    }
    if (open.empty()) break;
    if (cfg.mode == Participation::Limited && open.size() > static_cast<std::size_t>(cfg.limited)) {
      std::shuffle(open.begin(), open.end(), rng);
      open.resize(static_cast<std::size_t>(cfg.limited));
      std::sort(open.begin(), open.end());
    }

    std::vector<std::optional<LocalRecommendation>> recs(open.size());
    parallel_for(open.size(), cfg.completion.threads, [&](std::size_t i) {
      recs[i] = noncollab_recommend(machine_grid_view(current, open[i], grid), cfg);
    });

    RoundRecord round;
    round.round = t;
    Matrixd stacked(static_cast<Eigen::Index>(open.size()), l);
    for (std::size_t i = 0; i < open.size(); ++i) {
      const auto& rec = *recs[i];
      stacked.row(static_cast<Eigen::Index>(i)) =
          Eigen::Map<const Eigen::RowVectorXd>(rec.prediction.transpose().eval().data(), l);
      round.selections.push_back(
          reveal(current, ground_truth, grid, open[i], rec.column, rec.predicted));
    }
    round.prediction_digest = matrix_digest(stacked);
    round.observed_count = current.observed_count();
    trace.rounds.push_back(std::move(round));
  }
  trace.final_mask = current.mask();
  return trace;
}

}  // namespace fleetmc
