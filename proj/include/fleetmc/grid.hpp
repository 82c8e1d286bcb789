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

#ifndef FLEETMC_GRID_HPP_
#define FLEETMC_GRID_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fleetmc {

// One discrete process parameter, e.g. printing speed in mm/s.
struct ParameterAxis {
  std::string name;
  std::string unit;
  std::vector<double> values;  // strictly increasing

  std::size_t size() const { return values.size(); }
};

// A grid point: 1-based ordinals per axis and the matching physical values.
struct GridPoint {
  std::vector<std::size_t> ordinals;
  std::vector<double> values;
};

// Cartesian product of ordinal axes, vectorized row-major: the last axis
// varies fastest and flat indices are 0-based.
class ParameterGrid {
 public:
  const std::vector<ParameterAxis>& axes() const { return axes_; }
  std::size_t dimension() const { return axes_.size(); }
  std::size_t flat_size() const { return flat_size_; }

  std::size_t flatten(std::span<const std::size_t> ordinals) const;
  GridPoint unflatten(std::size_t flat_index) const;

  // Two-dimensional view used by the per-machine baseline: the first axis
  // against the product of the remaining ones.
  std::size_t leading_size() const { return axes_.front().size(); }
  std::size_t trailing_size() const { return flat_size_ / leading_size(); }

  friend ParameterGrid build_grid(std::vector<ParameterAxis> axes);

 private:
  std::vector<ParameterAxis> axes_;
  std::size_t flat_size_ = 0;
};

ParameterGrid build_grid(std::vector<ParameterAxis> axes);

inline std::size_t flatten_index(const ParameterGrid& grid,
                                 std::span<const std::size_t> ordinals) {
  return grid.flatten(ordinals);
}

inline GridPoint unflatten_index(const ParameterGrid& grid, std::size_t j) {
  return grid.unflatten(j);
}

// Evenly stepped axis [first, last] inclusive.
ParameterAxis stepped_axis(std::string name, std::string unit, double first,
                           double last, double step);

// Printing speed 50..150 mm/s by 25 against acceleration 4000..7000 mm/s^2
// by 500: the 5 x 7 grid of the printer-farm study.
ParameterGrid printer_speed_accel_grid();

}  // namespace fleetmc

#endif  // FLEETMC_GRID_HPP_
