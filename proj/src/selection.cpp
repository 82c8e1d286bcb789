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

#include <bit>
#include <cstdio>

#include "fleetmc/recommender.hpp"

namespace fleetmc {

void CampaignConfig::validate(Eigen::Index machines) const {
  if (budget < 0) throw ValidationError("budget must be non-negative");
  if (mode == Participation::Limited && (limited < 1 || limited > machines)) {
    throw ValidationError("limited participation needs 1 <= c <= K (c = " +
                          std::to_string(limited) + ", K = " + std::to_string(machines) + ")");
  }
  if (local_rank < 1) throw ValidationError("local rank must be at least 1");
  completion.validate();
}

std::string matrix_digest(const Matrixd& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(m.rows()));
  mix(static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) mix(std::bit_cast<std::uint64_t>(m(i, j)));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Matrixd predict_fleet(const MaskedMatrixd& m, const CompletionConfig& cfg,
                      std::optional<FactorPair<double>>* warm) {
  const auto ceiling = static_cast<int>(std::min(m.rows(), m.cols())) - 1;
  if (ceiling < 1) return mean_impute(m);
  CompletionConfig local = cfg;
  local.rank = std::min(cfg.rank, ceiling);
  if (warm != nullptr && warm->has_value() && (*warm)->rank() == local.rank) {
    auto result = als_complete(m, local, **warm);
    *warm = result.factors;
    return result.completed;
  }
  auto result = als_complete(m, local);
  if (warm != nullptr) *warm = result.factors;
  return result.completed;
}

MaskedMatrixd machine_grid_view(const MaskedMatrixd& fleet, Eigen::Index k,
                                const ParameterGrid& grid) {
  const auto rows = static_cast<Eigen::Index>(grid.leading_size());
  const auto cols = static_cast<Eigen::Index>(grid.trailing_size());
  if (rows * cols != fleet.cols()) throw ValidationError("grid does not match matrix width");
  MaskedMatrixd local(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a) {
    for (Eigen::Index b = 0; b < cols; ++b) {
      const Eigen::Index j = a * cols + b;
      if (fleet.observed(k, j)) local.observe(a, b, fleet(k, j));
    }
  }
  return local;
}

std::optional<LocalRecommendation> noncollab_recommend(const MaskedMatrixd& local,
                                                       const CampaignConfig& cfg) {
  if (local.observed_count() == static_cast<std::size_t>(local.rows() * local.cols())) {
    return std::nullopt;
  }
  if (local.observed_count() == 0) {
    throw ValidationError("machine has no observed entries");
  }

  // Pseudo-observations for empty grid rows and columns.
  const Matrixd imputed = mean_impute(local);
  MaskedMatrixd seeded = local;
  for (Eigen::Index a = 0; a < local.rows(); ++a) {
    if (local.row_observed(a) > 0) continue;
    for (Eigen::Index b = 0; b < local.cols(); ++b) seeded.observe(a, b, imputed(a, b));
  }
  for (Eigen::Index b = 0; b < local.cols(); ++b) {
    if (local.col_observed(b) > 0) continue;
    for (Eigen::Index a = 0; a < local.rows(); ++a) {
      if (!seeded.observed(a, b)) seeded.observe(a, b, imputed(a, b));
    }
  }

  CompletionConfig completion = cfg.completion;
  completion.rank = cfg.local_rank;
  completion.threads = 1;
  LocalRecommendation rec;
  rec.prediction = predict_fleet(seeded, completion);

  std::optional<Eigen::Index> best;
  for (Eigen::Index j = 0; j < local.rows() * local.cols(); ++j) {
    const Eigen::Index a = j / local.cols();
    const Eigen::Index b = j % local.cols();
    if (local.observed(a, b)) continue;
    if (!best || rec.prediction(a, b) > rec.predicted) {
      best = j;
      rec.predicted = rec.prediction(a, b);
    }
  }
  rec.column = *best;
  return rec;
}

ParameterGrid index_grid(std::size_t l) {
  ParameterAxis axis{"condition", "index", {}};
  for (std::size_t j = 0; j < l; ++j) axis.values.push_back(static_cast<double>(j));
  return build_grid({axis});
}

}  // namespace fleetmc
