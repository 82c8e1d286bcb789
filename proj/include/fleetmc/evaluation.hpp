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

#ifndef FLEETMC_EVALUATION_HPP_
#define FLEETMC_EVALUATION_HPP_

#include <cmath>
#include <span>
#include <vector>

#include "fleetmc/masked_matrix.hpp"
#include "fleetmc/recommender.hpp"

namespace fleetmc {

// Any column within this distance of a row maximum counts as optimal.
inline constexpr double kOptimumTolerance = 1e-12;

struct TrialOutcome {
  enum class Status {
    Hit,           // optimum selected at `round`
    Censored,      // not found within the budget
    KnownAtStart,  // optimum already in the initial support; nothing to search for
  };
  Status status = Status::Censored;
  int round = 0;

  static TrialOutcome hit(int t) { return {Status::Hit, t}; }
  static TrialOutcome censored() { return {Status::Censored, 0}; }
  static TrialOutcome known() { return {Status::KnownAtStart, 0}; }
  bool is_hit() const { return status == Status::Hit; }
};

// Lowest column attaining each row maximum.
std::vector<Eigen::Index> true_optimum(const Matrixd& ground_truth);

std::vector<TrialOutcome> trials_to_optimum(const CampaignTrace& trace, const Matrixd& ground_truth);

// K x budget; entry (k, t-1) is machine k's regret at round t, NaN when the
// machine made no selection that round.
Matrixd regret_series(const CampaignTrace& trace, const Matrixd& ground_truth,
                      RegretVariant variant);

inline bool is_missing(double v) { return std::isnan(v); }

// Running sums skipping missing entries.
Matrixd cumulative_regret(const Matrixd& series);

// Right-continuous Kaplan-Meier step function of "optimum not yet found".
struct KaplanMeierCurve {
  int horizon = 0;
  std::vector<double> event_times;  // ascending distinct hit rounds
  std::vector<int> events;          // hits at each event time
  std::vector<int> at_risk;         // machines still searching just before it
  std::vector<double> survival;     // value from event_times[i] on
  double restricted_mean = 0;       // integral of the curve over [0, horizon]

  double operator()(double t) const;
};

// KnownAtStart outcomes are left out; censored machines stay at risk to the
// horizon.
KaplanMeierCurve kaplan_meier(std::span<const TrialOutcome> outcomes, int horizon);

struct EvaluationResult {
  std::vector<TrialOutcome> trials;
  Matrixd regret;
  Matrixd cumulative;
  bool censored = false;        // any machine censored
  double mean_trials = NAN;     // arithmetic mean of hits, or KM mean under censoring
  std::optional<KaplanMeierCurve> km;  // absent when nothing is searchable
};

EvaluationResult evaluate(const CampaignTrace& trace, const Matrixd& ground_truth,
                          RegretVariant variant = RegretVariant::TrueValue);

}  // namespace fleetmc

#endif  // FLEETMC_EVALUATION_HPP_
