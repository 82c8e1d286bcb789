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

#include "fleetmc/commands.hpp"

#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "fleetmc/io.hpp"

namespace fleetmc {
namespace {

using json = nlohmann::ordered_json;

MaskedMatrixd stack_rows(const std::vector<MachineMeasurements>& machines,
                         Vectord MachineMeasurements::*field) {
  const auto l = machines.front().observed.size();
  Matrixd values(static_cast<Eigen::Index>(machines.size()), l);
  Mask mask(static_cast<Eigen::Index>(machines.size()), l);
  for (std::size_t i = 0; i < machines.size(); ++i) {
    values.row(static_cast<Eigen::Index>(i)) = (machines[i].*field).transpose();
    mask.row(static_cast<Eigen::Index>(i)) = machines[i].observed.transpose();
  }
  return MaskedMatrixd(values, mask);
}

std::string format_mean(double v) { return std::isfinite(v) ? format_double(v) : "n/a"; }

std::string cumulative_csv(const Matrixd& cumulative) {
  std::ostringstream out;
  out << "machine";
  for (Eigen::Index t = 0; t < cumulative.cols(); ++t) out << ',' << t + 1;
  out << '\n';
  for (Eigen::Index k = 0; k < cumulative.rows(); ++k) {
    out << k + 1;
    for (Eigen::Index t = 0; t < cumulative.cols(); ++t) out << ',' << format_double(cumulative(k, t));
    out << '\n';
  }
  return out.str();
}

// Per-machine rows with a trailing average, one column per campaign.
std::string trials_csv(const EvaluationResult& collab, const EvaluationResult* base, int budget) {
  std::ostringstream out;
  out << "machine,collaborative" << (base ? ",non_collaborative" : "") << '\n';
  for (std::size_t k = 0; k < collab.trials.size(); ++k) {
    out << k + 1 << ',' << trial_label(collab.trials[k], budget);
    if (base) out << ',' << trial_label(base->trials[k], budget);
    out << '\n';
  }
  out << "Average," << format_mean(collab.mean_trials);
  if (base) out << ',' << format_mean(base->mean_trials);
  out << '\n';
  return out.str();
}

void write_report(const fs::path& out_dir, const std::vector<std::pair<std::string, std::string>>& config,
                  const EvaluationResult& collab, const EvaluationResult* base, int budget) {
  json report;
  json cfg = json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  report["config"] = std::move(cfg);
  report["budget"] = budget;
  report["collaborative"] = evaluation_to_json(collab, budget);
  if (base) {
    report["non_collaborative"] = evaluation_to_json(*base, budget);
    const double reduction = (base->mean_trials - collab.mean_trials) / base->mean_trials;
    report["relative_reduction"] = std::isfinite(reduction) ? json(reduction) : json(nullptr);
  }
  write_file(out_dir / "report.json", report.dump(2) + "\n");
  write_file(out_dir / "trials.csv", trials_csv(collab, base, budget));
}

// Console summary; the files carry the exact values.
void print_summary(std::ostream& out, const char* label, const EvaluationResult& e, int budget) {
  out << label << ": mean trials ";
  if (std::isfinite(e.mean_trials)) {
    std::ostringstream mean;
    mean.precision(6);
    mean << e.mean_trials;
    out << mean.str() << " (" << (e.censored ? "Kaplan-Meier" : "arithmetic") << ")";
  } else {
    out << "n/a";
  }
  out << ", per machine:";
  for (const auto& o : e.trials) out << ' ' << trial_label(o, budget);
  out << '\n';
}

}  // namespace

MaskedMatrixd cmd_build_utility(const fs::path& scans, const fs::path& times, const RunConfig& cfg,
                                const fs::path& out_dir, std::ostream& out) {
  MeasurementLog log;
  {
    std::ifstream in(scans);
    if (!in) throw ValidationError("cannot open " + scans.string());
    read_scan_csv(in, log);
  }
  {
    std::ifstream in(times);
    if (!in) throw ValidationError("cannot open " + times.string());
    read_time_csv(in, log);
  }
  const auto machines = measurements_from_log(log, cfg.grid.flat_size(), cfg.weights);
  const MaskedMatrixd utility = assemble_fleet_matrix(machines);
  save_matrix_csv(out_dir / "utility.csv", utility);
  save_matrix_csv(out_dir / "quality_norm.csv", stack_rows(machines, &MachineMeasurements::quality_norm));
  save_matrix_csv(out_dir / "time_norm.csv", stack_rows(machines, &MachineMeasurements::time_norm));
  out << "machines: " << utility.rows() << ", conditions: " << utility.cols()
      << ", observed: " << utility.observed_count() << '\n';
  out << "row order (machine ids):";
  for (const auto& m : machines) out << ' ' << m.machine_id;
  out << '\n';
  return utility;
}

RankEstimate<double> cmd_estimate_rank(const fs::path& matrix, std::ostream& out) {
  const MaskedMatrixd m = load_matrix_csv(matrix);
  const auto est = estimate_rank(m);
  out << "rank: " << est.rank << '\n';
  out << "sigma: " << format_double(est.sigma) << '\n';
  out << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < est.eigenvalues.size(); ++i) {
    out << i + 1 << ',' << format_double(est.eigenvalues(i)) << '\n';
  }
  return est;
}

Matrixd cmd_complete(const fs::path& matrix, const RunConfig& cfg, const fs::path& completed,
                     std::ostream& out) {
  const MaskedMatrixd m = load_matrix_csv(matrix);
  const auto result = als_complete(m, cfg.campaign.completion);
  save_matrix_csv(completed, MaskedMatrixd::fully_observed(result.completed));
  out << "sweeps: " << result.sweeps << (result.converged ? " (converged)" : " (sweep limit)")
      << ", objective: " << format_double(result.objective_trace.back()) << '\n';
  return result.completed;
}

std::vector<Selection> cmd_recommend(const fs::path& matrix, const RunConfig& cfg, std::ostream& out) {
  const MaskedMatrixd m = load_matrix_csv(matrix);
  if (cfg.grid.flat_size() != static_cast<std::size_t>(m.cols())) {
    throw ValidationError("matrix has " + std::to_string(m.cols()) + " columns but the grid has " +
                          std::to_string(cfg.grid.flat_size()) + " conditions");
  }
  cfg.campaign.validate(m.rows());
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    if (m.row_observed(k) == 0) {
      throw ValidationError("machine " + std::to_string(k + 1) + " has no observations");
    }
  }
  out << "machine,flat_index";
  for (const auto& axis : cfg.grid.axes()) out << ',' << axis.name << " (" << axis.unit << ')';
  out << '\n';
  if (m.observed_count() == static_cast<std::size_t>(m.rows() * m.cols())) {
    for (Eigen::Index k = 0; k < m.rows(); ++k) out << k + 1 << ",exhausted\n";
    return {};
  }
  const Matrixd predicted = predict_fleet(m, cfg.campaign.completion);
  const auto picks = cfg.campaign.mode == Participation::FullFleet
                         ? select_full_fleet(predicted, m.mask())
                         : select_limited_fleet(predicted, m.mask(), cfg.campaign.limited);
  std::vector<bool> picked(static_cast<std::size_t>(m.rows()), false);
  for (const auto& p : picks) {
    picked[static_cast<std::size_t>(p.machine)] = true;
    out << p.machine + 1 << ',' << p.column;
    for (const double v : cfg.grid.unflatten(static_cast<std::size_t>(p.column)).values) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
  if (cfg.campaign.mode == Participation::FullFleet) {
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      if (!picked[static_cast<std::size_t>(k)]) out << k + 1 << ",exhausted\n";
    }
  }
  return picks;
}

SimulationOutcome cmd_simulate(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  SyntheticFleetSpec spec = cfg.fleet;
  spec.conditions = static_cast<int>(cfg.grid.flat_size());
  SimulationOutcome result;
  Mask initial;
  if (cfg.ground_truth.empty()) {
    const SyntheticFleet fleet = generate_synthetic_fleet(spec);
    result.ground_truth = fleet.ground_truth;
    initial = fleet.initial.mask();
  } else {
    const MaskedMatrixd truth = load_matrix_csv(cfg.ground_truth);
    if (truth.observed_count() != static_cast<std::size_t>(truth.rows() * truth.cols())) {
      throw ValidationError("ground truth matrix must be fully observed");
    }
    if (static_cast<std::size_t>(truth.cols()) != cfg.grid.flat_size()) {
      throw ValidationError("ground truth width does not match the grid");
    }
    spec.machines = static_cast<int>(truth.rows());
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    result.ground_truth = truth.values();
    initial = draw_initial_mask(result.ground_truth, spec, rng);
  }

  const auto pairs = cfg.to_pairs();
  result.collaborative = run_campaign(result.ground_truth, initial, cfg.campaign, cfg.grid);
  result.collaborative.config = pairs;
  result.baseline = run_baseline_campaign(result.ground_truth, initial, cfg.campaign, cfg.grid);
  result.baseline.config = pairs;

  const auto variant = cfg.campaign.regret_variant;
  result.collaborative_eval = evaluate(result.collaborative, result.ground_truth, variant);
  result.baseline_eval = evaluate(result.baseline, result.ground_truth, variant);

  save_matrix_csv(out_dir / "ground_truth.csv", MaskedMatrixd::fully_observed(result.ground_truth));
  save_matrix_csv(out_dir / "initial_matrix.csv", MaskedMatrixd(result.ground_truth, initial));
  save_trace(out_dir / "collaborative_trace.json", result.collaborative);
  save_trace(out_dir / "noncollaborative_trace.json", result.baseline);
  write_file(out_dir / "cumulative_regret_collaborative.csv",
             cumulative_csv(result.collaborative_eval.cumulative));
  write_file(out_dir / "cumulative_regret_noncollaborative.csv",
             cumulative_csv(result.baseline_eval.cumulative));
  write_report(out_dir, pairs, result.collaborative_eval, &result.baseline_eval, cfg.campaign.budget);

  out << "initial observations: " << initial.count() << " of " << initial.size() << '\n';
  print_summary(out, "collaborative", result.collaborative_eval, cfg.campaign.budget);
  print_summary(out, "non-collaborative", result.baseline_eval, cfg.campaign.budget);
  return result;
}

void cmd_evaluate(const fs::path& collaborative, const fs::path& baseline,
                  const fs::path& ground_truth, RegretVariant variant, const fs::path& out_dir,
                  std::ostream& out) {
  const MaskedMatrixd truth = load_matrix_csv(ground_truth);
  if (truth.observed_count() != static_cast<std::size_t>(truth.rows() * truth.cols())) {
    throw ValidationError("ground truth matrix must be fully observed");
  }
  const CampaignTrace collab = load_trace(collaborative);
  const EvaluationResult collab_eval = evaluate(collab, truth.values(), variant);
  print_summary(out, "collaborative", collab_eval, collab.budget);
  if (baseline.empty()) {
    write_report(out_dir, collab.config, collab_eval, nullptr, collab.budget);
    return;
  }
  const CampaignTrace base = load_trace(baseline);
  if (base.budget != collab.budget) throw ValidationError("traces have different budgets");
  const EvaluationResult base_eval = evaluate(base, truth.values(), variant);
  print_summary(out, "non-collaborative", base_eval, base.budget);
  write_report(out_dir, collab.config, collab_eval, &base_eval, collab.budget);
}

}  // namespace fleetmc
