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

#ifndef FLEETMC_UTILITY_HPP_
#define FLEETMC_UTILITY_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "fleetmc/errors.hpp"
#include "fleetmc/masked_matrix.hpp"

namespace fleetmc {

enum class Surface { X, Y };

struct ScanProfile {
  Vectord samples;  // displacement readings, mm
  Surface surface = Surface::X;
  int machine_id = 0;
  std::size_t condition_index = 0;
};

// RMS roughness of a scanned surface about its mean (population standard
// deviation). Evaluated in two passes; the single-pass S'S - (1'S)^2/p form
// loses every digit once the mean offset dwarfs the ringing amplitude.
template <typename Derived>
typename Derived::Scalar surface_rms(const Eigen::MatrixBase<Derived>& samples) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index p = samples.size();
  if (p < 2) throw ValidationError("a scan needs at least two samples");
  if (!samples.allFinite()) throw ValidationError("scan contains non-finite samples");
  const Scalar mean = samples.mean();
  const Scalar ss = (samples.array() - mean).square().sum();
  return std::sqrt(ss / static_cast<Scalar>(p));
}

inline double surface_rms(const ScanProfile& scan) { return surface_rms(scan.samples); }

// Quadratic mean of the two scanned faces of one part.
template <typename Scalar>
Scalar combine_surfaces(Scalar qx, Scalar qy) {
  if (qx < 0 || qy < 0) throw ValidationError("surface roughness must be non-negative");
  return std::sqrt((qx * qx + qy * qy) / Scalar(2));
}

// Divides by the largest observed entry. Entries with mask == false are
// ignored for the maximum and come back as NaN.
template <typename Scalar>
Vector<Scalar> normalize_max(const Vector<Scalar>& v, const Eigen::Array<bool, Eigen::Dynamic, 1>& observed) {
  if (observed.size() != v.size()) throw ValidationError("mask length mismatch");
  std::optional<Scalar> peak;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!observed(i)) continue;
    if (!std::isfinite(v(i)) || v(i) <= 0) {
      throw ValidationError("normalize_max expects finite positive observed entries");
    }
    if (!peak || v(i) > *peak) peak = v(i);
  }
  if (!peak) throw ValidationError("normalize_max needs at least one observed entry");
  Vector<Scalar> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = observed(i) ? v(i) / *peak : std::numeric_limits<Scalar>::quiet_NaN();
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> normalize_max(const Vector<Scalar>& v) {
  return normalize_max(v, Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(v.size(), true));
}

template <typename Scalar>
struct UtilityWeights {
  Vector<Scalar> quality;
  Vector<Scalar> time;
};

// Weighting of normalized quality against normalized time. The default is
// the exponential schedule w_q = 0.78 (exp(0.82 q) - 1); a constant quality
// weight can be configured instead.
struct WeightScheme {
  std::optional<double> constant_quality_weight;

  static WeightScheme exponential() { return {}; }
  static WeightScheme constant(double w_q) {
    if (!(w_q >= 0 && w_q <= 1)) throw ValidationError("constant weight must lie in [0, 1]");
    return {w_q};
  }
};

inline constexpr double kWeightGain = 0.78;
inline constexpr double kWeightRate = 0.82;

template <typename Scalar>
UtilityWeights<Scalar> quality_weights(const Vector<Scalar>& q_norm,
                                       const WeightScheme& scheme = {}) {
  for (Eigen::Index i = 0; i < q_norm.size(); ++i) {
    if (!(q_norm(i) >= 0 && q_norm(i) <= 1)) {
      throw ValidationError("normalized quality must lie in [0, 1]");
    }
  }
  UtilityWeights<Scalar> w;
  if (scheme.constant_quality_weight) {
    w.quality = Vector<Scalar>::Constant(q_norm.size(), Scalar(*scheme.constant_quality_weight));
  } else {
    w.quality = Scalar(kWeightGain) * ((Scalar(kWeightRate) * q_norm.array()).exp() - Scalar(1)).matrix();
  }
  w.time = (Scalar(1) - w.quality.array()).matrix();
  return w;
}

// u = -(w_q . q + w_t . t), elementwise; lies in [-1, 0].
template <typename Scalar>
Vector<Scalar> compose_utility(const Vector<Scalar>& q_norm, const Vector<Scalar>& t_norm,
                               const WeightScheme& scheme = {}) {
  if (q_norm.size() != t_norm.size()) throw ValidationError("quality and time lengths differ");
  for (Eigen::Index i = 0; i < t_norm.size(); ++i) {
    if (!(t_norm(i) >= 0 && t_norm(i) <= 1)) {
      throw ValidationError("normalized time must lie in [0, 1]");
    }
  }
  const auto w = quality_weights(q_norm, scheme);
  return -(w.quality.cwiseProduct(q_norm) + w.time.cwiseProduct(t_norm));
}

// Everything derived for one machine. Unobserved conditions hold NaN in
// every vector.
struct MachineMeasurements {
  int machine_id = 0;
  Vectord quality;       // RMS roughness, mm
  Vectord time;          // print time, s
  Vectord quality_norm;
  Vectord time_norm;
  Vectord weight_quality;
  Vectord weight_time;
  Vectord utility;
  Eigen::Array<bool, Eigen::Dynamic, 1> observed;
};

// Normalizes over the observed entries and derives weights and utility.
MachineMeasurements measure_machine(int machine_id, const Vectord& quality, const Vectord& time,
                                    const Eigen::Array<bool, Eigen::Dynamic, 1>& observed,
                                    const WeightScheme& scheme = {});

// Stacks u_k^T as rows. The mask selects which entries count as observed;
// a masked-in entry must be observed in the machine's measurements.
MaskedMatrixd assemble_fleet_matrix(const std::vector<MachineMeasurements>& machines,
                                    const Mask& mask);

// Same with the mask taken from the measurements themselves.
MaskedMatrixd assemble_fleet_matrix(const std::vector<MachineMeasurements>& machines);

}  // namespace fleetmc

#endif  // FLEETMC_UTILITY_HPP_
