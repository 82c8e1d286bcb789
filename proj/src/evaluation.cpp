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

#include "fleetmc/evaluation.hpp"

#include <algorithm>
#include <map>

namespace fleetmc {
namespace {

void check_shape(const CampaignTrace& trace, const Matrixd& ground_truth) {
  if (trace.initial_mask.rows() != ground_truth.rows() ||
      trace.initial_mask.cols() != ground_truth.cols()) {
    throw ValidationError("trace and ground truth shapes differ");
  }
  for (const auto& round : trace.rounds) {
    for (const auto& s : round.selections) {
      if (s.machine < 0 || s.machine >= ground_truth.rows() || s.column < 0 ||
          s.column >= ground_truth.cols()) {
        throw ValidationError("trace selection outside the ground truth");
      }
    }
  }
}

}  // namespace

std::vector<Eigen::Index> true_optimum(const Matrixd& ground_truth) {
  std::vector<Eigen::Index> best(static_cast<std::size_t>(ground_truth.rows()));
  for (Eigen::Index k = 0; k < ground_truth.rows(); ++k) {
    ground_truth.row(k).maxCoeff(&best[static_cast<std::size_t>(k)]);
  }
  return best;
}

std::vector<TrialOutcome> trials_to_optimum(const CampaignTrace& trace, const Matrixd& ground_truth) {
  check_shape(trace, ground_truth);
  const Eigen::Index k_total = ground_truth.rows();
  const Eigen::VectorXd row_max = ground_truth.rowwise().maxCoeff();
  auto optimal = [&](Eigen::Index k, Eigen::Index j) {
    return ground_truth(k, j) >= row_max(k) - kOptimumTolerance;
  };

  std::vector<TrialOutcome> out(static_cast<std::size_t>(k_total), TrialOutcome::censored());
  for (Eigen::Index k = 0; k < k_total; ++k) {
    for (Eigen::Index j = 0; j < ground_truth.cols(); ++j) {
      if (trace.initial_mask(k, j) && optimal(k, j)) {
        out[static_cast<std::size_t>(k)] = TrialOutcome::known();
        break;
      }
    }
  }
  for (const auto& round : trace.rounds) {
    for (const auto& s : round.selections) {
      auto& o = out[static_cast<std::size_t>(s.machine)];
      if (o.status == TrialOutcome::Status::Censored && optimal(s.machine, s.column)) {
        o = TrialOutcome::hit(round.round);
      }
    }
  }
  return out;
}

Matrixd regret_series(const CampaignTrace& trace, const Matrixd& ground_truth,
                      RegretVariant variant) {
  check_shape(trace, ground_truth);
  const auto best = true_optimum(ground_truth);
  Matrixd series = Matrixd::Constant(ground_truth.rows(), std::max(trace.budget, 0), NAN);
  for (const auto& round : trace.rounds) {
    if (round.round < 1 || round.round > trace.budget) {
      throw ValidationError("trace round outside the budget");
    }
    for (const auto& s : round.selections) {
      const double target = ground_truth(s.machine, best[static_cast<std::size_t>(s.machine)]);
      const double reached =
          variant == RegretVariant::TrueValue ? ground_truth(s.machine, s.column) : s.predicted;
      series(s.machine, round.round - 1) = std::abs(reached - target);
    }
  }
  return series;
}

Matrixd cumulative_regret(const Matrixd& series) {
  Matrixd out(series.rows(), series.cols());
  for (Eigen::Index k = 0; k < series.rows(); ++k) {
    double total = 0;
    for (Eigen::Index t = 0; t < series.cols(); ++t) {
      if (!is_missing(series(k, t))) total += series(k, t);
      out(k, t) = total;
    }
  }
  return out;
}

double KaplanMeierCurve::operator()(double t) const {
  double value = 1.0;
  for (std::size_t i = 0; i < event_times.size() && event_times[i] <= t; ++i) value = survival[i];
  return value;
}

KaplanMeierCurve kaplan_meier(std::span<const TrialOutcome> outcomes, int horizon) {
  if (horizon < 1) throw ValidationError("Kaplan-Meier horizon must be at least 1");
  std::map<int, int> hits;
  int searchable = 0;
  for (const auto& o : outcomes) {
    if (o.status == TrialOutcome::Status::KnownAtStart) continue;
    ++searchable;
    if (o.is_hit()) {
      if (o.round < 1 || o.round > horizon) throw ValidationError("hit round outside [1, M]");
      ++hits[o.round];
    }
  }
  if (searchable == 0) throw ValidationError("Kaplan-Meier needs at least one machine");

  KaplanMeierCurve curve;
  curve.horizon = horizon;
  int at_risk = searchable;
  double survival = 1.0;
  double previous_time = 0.0;
  for (const auto& [t, g] : hits) {
    curve.restricted_mean += survival * (t - previous_time);
    survival *= 1.0 - static_cast<double>(g) / at_risk;
    curve.event_times.push_back(t);
    curve.events.push_back(g);
    curve.at_risk.push_back(at_risk);
    curve.survival.push_back(survival);
    at_risk -= g;
    previous_time = t;
  }
  curve.restricted_mean += survival * (horizon - previous_time);
  return curve;
}

EvaluationResult evaluate(const CampaignTrace& trace, const Matrixd& ground_truth,
                          RegretVariant variant) {
  EvaluationResult result;
  result.trials = trials_to_optimum(trace, ground_truth);
  result.regret = regret_series(trace, ground_truth, variant);
  result.cumulative = cumulative_regret(result.regret);

  double hit_sum = 0;
  int hit_count = 0;
  int searchable = 0;
  for (const auto& o : result.trials) {
    if (o.status == TrialOutcome::Status::KnownAtStart) continue;
    ++searchable;
    if (o.is_hit()) {
      hit_sum += o.round;
      ++hit_count;
    } else {
      result.censored = true;
    }
  }
  if (searchable == 0 || trace.budget < 1) return result;
  result.km = kaplan_meier(result.trials, trace.budget);
  result.mean_trials = result.censored ? result.km->restricted_mean : hit_sum / hit_count;
  return result;
}

}  // namespace fleetmc
