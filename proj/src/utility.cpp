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

#include "fleetmc/utility.hpp"

#include <string>

namespace fleetmc {
namespace {

Vectord gather(const Vectord& v, const Eigen::Array<bool, Eigen::Dynamic, 1>& observed) {
  Vectord out(observed.count());
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (observed(i)) out(n++) = v(i);
  }
  return out;
}

Vectord scatter(const Vectord& packed, const Eigen::Array<bool, Eigen::Dynamic, 1>& observed) {
  Vectord out = Vectord::Constant(observed.size(), MaskedMatrixd::missing());
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < observed.size(); ++i) {
    if (observed(i)) out(i) = packed(n++);
  }
  return out;
}

}  // namespace

MachineMeasurements measure_machine(int machine_id, const Vectord& quality, const Vectord& time,
                                    const Eigen::Array<bool, Eigen::Dynamic, 1>& observed,
                                    const WeightScheme& scheme) {
  if (quality.size() != time.size() || quality.size() != observed.size()) {
    throw ValidationError("machine " + std::to_string(machine_id) +
                          ": quality, time and mask lengths differ");
  }
  MachineMeasurements m;
  m.machine_id = machine_id;
  m.observed = observed;
  m.quality = scatter(gather(quality, observed), observed);
  m.time = scatter(gather(time, observed), observed);
  m.quality_norm = normalize_max(quality, observed);
  m.time_norm = normalize_max(time, observed);

  const Vectord q = gather(m.quality_norm, observed);
  const Vectord t = gather(m.time_norm, observed);
  const auto w = quality_weights(q, scheme);
  m.weight_quality = scatter(w.quality, observed);
  m.weight_time = scatter(w.time, observed);
  m.utility = scatter(compose_utility(q, t, scheme), observed);
  return m;
}

MaskedMatrixd assemble_fleet_matrix(const std::vector<MachineMeasurements>& machines,
                                    const Mask& mask) {
  if (machines.empty()) throw ValidationError("fleet matrix needs at least one machine");
  const Eigen::Index l = machines.front().utility.size();
  const auto k = static_cast<Eigen::Index>(machines.size());
  if (mask.rows() != k || mask.cols() != l) {
    throw ValidationError("mask shape does not match the fleet");
  }
  Matrixd values(k, l);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& m = machines[static_cast<std::size_t>(i)];
    if (m.utility.size() != l) {
      throw ValidationError("machine " + std::to_string(m.machine_id) +
                            " has a utility vector of a different length");
    }
    for (Eigen::Index j = 0; j < l; ++j) {
      if (mask(i, j) && !m.observed(j)) {
        throw ValidationError("machine " + std::to_string(m.machine_id) + " condition " +
                              std::to_string(j) + " is masked in but was never measured");
      }
    }
    values.row(i) = m.utility.transpose();
  }
  return MaskedMatrixd(values, mask);
}

MaskedMatrixd assemble_fleet_matrix(const std::vector<MachineMeasurements>& machines) {
  if (machines.empty()) throw ValidationError("fleet matrix needs at least one machine");
  const Eigen::Index l = machines.front().observed.size();
  Mask mask(static_cast<Eigen::Index>(machines.size()), l);
  for (std::size_t i = 0; i < machines.size(); ++i) {
    if (machines[i].observed.size() != l) {
      throw ValidationError("machines disagree on the number of conditions");
    }
    mask.row(static_cast<Eigen::Index>(i)) = machines[i].observed.transpose();
  }
  return assemble_fleet_matrix(machines, mask);
}

}  // namespace fleetmc
