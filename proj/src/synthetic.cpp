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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fleetmc/recommender.hpp"

namespace fleetmc {
namespace {

constexpr int kMaskAttempts = 20000;

}  // namespace

void SyntheticFleetSpec::validate() const {
  if (machines < 1 || conditions < 1) throw ValidationError("fleet needs K >= 1 and l >= 1");
  if (true_rank < 0) throw ValidationError("true rank must be non-negative");
  if (!(factor_scale >= 0) || !(noise_std >= 0)) {
    throw ValidationError("factor scale and noise must be non-negative");
  }
  if (!(mask_fraction >= 0 && mask_fraction < 1)) {
    throw ValidationError("mask fraction must lie in [0, 1)");
  }
  if (min_row_observed < 1) throw ValidationError("every row needs at least one observation");
  if (min_col_observed < 0 || min_col_observed > machines) {
    throw ValidationError("column minimum must lie in [0, K]");
  }
}

std::size_t observed_target(const SyntheticFleetSpec& spec) {
  // The masked count is rounded down, so 55% of 350 hides 192 and keeps 158.
  const auto cells = static_cast<std::size_t>(spec.machines) * static_cast<std::size_t>(spec.conditions);
  const auto masked = static_cast<std::size_t>(std::floor(spec.mask_fraction * static_cast<double>(cells) + 1e-9));
  return cells - std::min(masked, cells);
}

Mask draw_initial_mask(const Matrixd& ground_truth, const SyntheticFleetSpec& spec,
                       std::mt19937_64& rng) {
  const Eigen::Index k = ground_truth.rows();
  const Eigen::Index l = ground_truth.cols();
  const std::size_t target = observed_target(spec);

  Mask eligible = Mask::Constant(k, l, true);
  if (spec.hide_optimum) {
    for (Eigen::Index i = 0; i < k; ++i) {
      const double best = ground_truth.row(i).maxCoeff();
      for (Eigen::Index j = 0; j < l; ++j) {
        if (ground_truth(i, j) >= best - 1e-12) eligible(i, j) = false;
      }
    }
  }
  std::vector<Eigen::Index> cells;
  for (Eigen::Index idx = 0; idx < k * l; ++idx) {
    if (eligible(idx / l, idx % l)) cells.push_back(idx);
  }
  if (target > cells.size()) {
    throw ValidationError("cannot keep " + std::to_string(target) + " observations out of " +
                          std::to_string(cells.size()) + " eligible cells");
  }

  for (int attempt = 0; attempt < kMaskAttempts; ++attempt) {
    std::shuffle(cells.begin(), cells.end(), rng);
    Mask mask = Mask::Constant(k, l, false);
    for (std::size_t n = 0; n < target; ++n) mask(cells[n] / l, cells[n] % l) = true;
    bool ok = true;
    for (Eigen::Index i = 0; i < k && ok; ++i) ok = mask.row(i).count() >= spec.min_row_observed;
    for (Eigen::Index j = 0; j < l && ok; ++j) ok = mask.col(j).count() >= spec.min_col_observed;
    if (ok) return mask;
  }
  throw ValidationError("could not draw a mask meeting the row/column coverage after " +
                        std::to_string(kMaskAttempts) + " attempts");
}

SyntheticFleet generate_synthetic_fleet(const SyntheticFleetSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](Eigen::Index rows, Eigen::Index cols, double scale) {
    Matrixd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * normal(rng);
    }
    return m;
  };

  const Matrixd a = draw(spec.machines, spec.true_rank, spec.factor_scale);
  const Matrixd b = draw(spec.conditions, spec.true_rank, spec.factor_scale);
  Matrixd truth = spec.true_rank > 0 ? Matrixd(a * b.transpose())
                                     : Matrixd::Zero(spec.machines, spec.conditions);
  const double sigma =
      spec.noise_relative ? spec.noise_std * std::sqrt(truth.squaredNorm() / truth.size())
                          : spec.noise_std;
  if (sigma > 0) truth += draw(spec.machines, spec.conditions, sigma);

  SyntheticFleet fleet;
  const Mask mask = draw_initial_mask(truth, spec, rng);
  fleet.ground_truth = std::move(truth);
  fleet.initial = MaskedMatrixd(fleet.ground_truth, mask);
  return fleet;
}

}  // namespace fleetmc
