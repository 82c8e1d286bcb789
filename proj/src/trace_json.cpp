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

#include "fleetmc/io.hpp"

namespace fleetmc {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kTraceFormat = "fleetmc-trace/1";

const char* kind_name(CampaignKind k) {
  return k == CampaignKind::Collaborative ? "collaborative" : "non-collaborative";
}

const char* mode_name(Participation p) {
  return p == Participation::FullFleet ? "full-fleet" : "limited";
}

// NaN and infinities have no JSON number form.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_rows(const Matrixd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number_or_null(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<std::string> mask_to_strings(const Mask& mask) {
  std::vector<std::string> rows;
  for (Eigen::Index i = 0; i < mask.rows(); ++i) {
    std::string s;
    for (Eigen::Index j = 0; j < mask.cols(); ++j) s.push_back(mask(i, j) ? '1' : '0');
    rows.push_back(std::move(s));
  }
  return rows;
}

Mask mask_from_strings(const std::vector<std::string>& rows) {
  if (rows.empty()) return Mask(0, 0);
  const auto l = static_cast<Eigen::Index>(rows.front().size());
  Mask mask(static_cast<Eigen::Index>(rows.size()), l);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != l) throw ValidationError("ragged mask rows");
    for (Eigen::Index j = 0; j < l; ++j) {
      const char c = rows[i][static_cast<std::size_t>(j)];
      if (c != '0' && c != '1') throw ValidationError("mask rows may only contain 0 and 1");
      mask(static_cast<Eigen::Index>(i), j) = c == '1';
    }
  }
  return mask;
}

json trace_to_json(const CampaignTrace& trace) {
  json j;
  j["format"] = kTraceFormat;
  j["kind"] = kind_name(trace.kind);
  j["mode"] = mode_name(trace.mode);
  j["limited"] = trace.limited;
  j["budget"] = trace.budget;
  json config = json::object();
  for (const auto& [key, value] : trace.config) config[key] = value;
  j["config"] = std::move(config);
  j["initial_mask"] = mask_to_strings(trace.initial_mask);
  j["initial_observed"] = static_cast<std::size_t>(trace.initial_mask.count());
  json rounds = json::array();
  for (const auto& r : trace.rounds) {
    json round;
    round["round"] = r.round;
    round["observed"] = r.observed_count;
    round["prediction_digest"] = r.prediction_digest;
    json selections = json::array();
    for (const auto& s : r.selections) {
      selections.push_back({{"machine", s.machine},
                            {"column", s.column},
                            {"parameters", s.parameters},
                            {"acquired", s.acquired},
                            {"predicted", s.predicted}});
    }
    round["selections"] = std::move(selections);
    rounds.push_back(std::move(round));
  }
  j["rounds"] = std::move(rounds);
  j["final_mask"] = mask_to_strings(trace.final_mask);
  return j;
}

CampaignTrace trace_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kTraceFormat) {
      throw ValidationError("unsupported trace format");
    }
    CampaignTrace t;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "collaborative") {
      t.kind = CampaignKind::Collaborative;
    } else if (kind == "non-collaborative") {
      t.kind = CampaignKind::NonCollaborative;
    } else {
      throw ValidationError("unknown trace kind '" + kind + "'");
    }
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "full-fleet" && mode != "limited") throw ValidationError("unknown mode '" + mode + "'");
    t.mode = mode == "full-fleet" ? Participation::FullFleet : Participation::Limited;
    t.limited = j.at("limited").get<int>();
    t.budget = j.at("budget").get<int>();
    for (const auto& [key, value] : j.at("config").items()) {
      t.config.emplace_back(key, value.get<std::string>());
    }
    t.initial_mask = mask_from_strings(j.at("initial_mask").get<std::vector<std::string>>());
    t.final_mask = mask_from_strings(j.at("final_mask").get<std::vector<std::string>>());
    for (const auto& r : j.at("rounds")) {
      RoundRecord round;
      round.round = r.at("round").get<int>();
      round.observed_count = r.at("observed").get<std::size_t>();
      round.prediction_digest = r.at("prediction_digest").get<std::string>();
      for (const auto& s : r.at("selections")) {
        SelectionRecord rec;
        rec.machine = s.at("machine").get<Eigen::Index>();
        rec.column = s.at("column").get<Eigen::Index>();
        rec.parameters = s.at("parameters").get<std::vector<double>>();
        rec.acquired = s.at("acquired").get<double>();
        rec.predicted = s.at("predicted").get<double>();
        round.selections.push_back(std::move(rec));
      }
      t.rounds.push_back(std::move(round));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed trace: ") + e.what());
  }
}

std::string dump_trace(const CampaignTrace& trace) { return trace_to_json(trace).dump(2) + "\n"; }

void save_trace(const std::filesystem::path& path, const CampaignTrace& trace) {
  write_file(path, dump_trace(trace));
}

CampaignTrace load_trace(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return trace_from_json(j);
}

std::string trial_label(const TrialOutcome& o, int budget) {
  switch (o.status) {
    case TrialOutcome::Status::Hit:
      return std::to_string(o.round);
    case TrialOutcome::Status::Censored:
      return ">" + std::to_string(budget);
    case TrialOutcome::Status::KnownAtStart:
      return "known";
  }
  return "";
}

json evaluation_to_json(const EvaluationResult& e, int budget) {
  json j;
  json trials = json::array();
  for (const auto& o : e.trials) {
    if (o.is_hit()) {
      trials.push_back(o.round);
    } else {
      trials.push_back(trial_label(o, budget));
    }
  }
  j["trials_to_optimum"] = std::move(trials);
  j["mean_trials"] = number_or_null(e.mean_trials);
  j["mean_method"] = e.censored ? "kaplan-meier" : "arithmetic";
  if (e.km) {
    j["kaplan_meier"] = {{"event_times", e.km->event_times},
                         {"events", e.km->events},
                         {"at_risk", e.km->at_risk},
                         {"survival", e.km->survival},
                         {"restricted_mean", e.km->restricted_mean}};
  } else {
    j["kaplan_meier"] = nullptr;
  }
  j["regret"] = matrix_rows(e.regret);
  j["cumulative_regret"] = matrix_rows(e.cumulative);
  return j;
}

}  // namespace fleetmc
