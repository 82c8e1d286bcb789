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

#include "fleetmc/grid.hpp"

#include <cmath>
#include <limits>

#include "fleetmc/errors.hpp"

namespace fleetmc {

ParameterGrid build_grid(std::vector<ParameterAxis> axes) {
  if (axes.empty()) throw ValidationError("grid needs at least one axis");
  std::size_t flat = 1;
  for (const auto& axis : axes) {
    if (axis.values.empty()) {
      throw ValidationError("axis '" + axis.name + "' has no values");
    }
    for (std::size_t i = 0; i < axis.values.size(); ++i) {
      if (!std::isfinite(axis.values[i])) {
        throw ValidationError("axis '" + axis.name + "' has a non-finite value");
      }
      if (i > 0 && !(axis.values[i] > axis.values[i - 1])) {
        throw ValidationError("axis '" + axis.name +
                              "' values must be strictly increasing");
      }
    }
    if (flat > std::numeric_limits<std::size_t>::max() / axis.size()) {
      throw ValidationError("grid too large");
    }
    flat *= axis.size();
  }
  ParameterGrid grid;
  grid.axes_ = std::move(axes);
  grid.flat_size_ = flat;
  return grid;
}

std::size_t ParameterGrid::flatten(std::span<const std::size_t> ordinals) const {
  if (ordinals.size() != axes_.size()) {
    throw IndexError("expected " + std::to_string(axes_.size()) +
                     " ordinals, got " + std::to_string(ordinals.size()));
  }
  std::size_t j = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const std::size_t m = axes_[i].size();
    if (ordinals[i] < 1 || ordinals[i] > m) {
      throw IndexError("ordinal " + std::to_string(ordinals[i]) + " outside [1, " +
                       std::to_string(m) + "] on axis '" + axes_[i].name + "'");
    }
    j = j * m + (ordinals[i] - 1);
  }
  return j;
}

GridPoint ParameterGrid::unflatten(std::size_t flat_index) const {
  if (flat_index >= flat_size_) {
    throw IndexError("flat index " + std::to_string(flat_index) + " outside [0, " +
                     std::to_string(flat_size_) + ")");
  }
  GridPoint point;
  point.ordinals.resize(axes_.size());
  point.values.resize(axes_.size());
  std::size_t rest = flat_index;
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const std::size_t m = axes_[i].size();
    const std::size_t zero_based = rest % m;
    rest /= m;
    point.ordinals[i] = zero_based + 1;
    point.values[i] = axes_[i].values[zero_based];
  }
  return point;
}

ParameterAxis stepped_axis(std::string name, std::string unit, double first,
                           double last, double step) {
  if (!(step > 0) || last < first) {
    throw ValidationError("stepped axis needs step > 0 and last >= first");
  }
  ParameterAxis axis{std::move(name), std::move(unit), {}};
  const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    axis.values.push_back(first + static_cast<double>(i) * step);
  }
  return axis;
}

ParameterGrid printer_speed_accel_grid() {
  return build_grid({stepped_axis("speed", "mm/s", 50, 150, 25),
                     stepped_axis("acceleration", "mm/s^2", 4000, 7000, 500)});
}

}  // namespace fleetmc
