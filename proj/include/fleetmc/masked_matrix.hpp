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

#ifndef FLEETMC_MASKED_MATRIX_HPP_
#define FLEETMC_MASKED_MATRIX_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "fleetmc/errors.hpp"

namespace fleetmc {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// true = observed, i.e. the entry belongs to the support set.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// A partially observed matrix. Unobserved entries hold NaN so that any
// accidental read of them poisons the result instead of silently using 0.
template <typename Scalar>
class MaskedMatrix {
 public:
  MaskedMatrix() = default;

  MaskedMatrix(Eigen::Index rows, Eigen::Index cols)
      : values_(Matrix<Scalar>::Constant(rows, cols, missing())),
        mask_(Mask::Constant(rows, cols, false)) {}

  MaskedMatrix(const Matrix<Scalar>& values, const Mask& mask)
      : values_(values), mask_(mask) {
    if (values.rows() != mask.rows() || values.cols() != mask.cols()) {
      throw ValidationError("values and mask shapes differ");
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      for (Eigen::Index j = 0; j < values_.cols(); ++j) {
        if (!mask_(i, j)) {
          values_(i, j) = missing();
        } else if (!std::isfinite(values_(i, j))) {
          throw ValidationError("non-finite observed entry at (" + std::to_string(i) +
                                ", " + std::to_string(j) + ")");
        }
      }
    }
  }

  static MaskedMatrix fully_observed(const Matrix<Scalar>& values) {
    return MaskedMatrix(values, Mask::Constant(values.rows(), values.cols(), true));
  }

  static constexpr Scalar missing() { return std::numeric_limits<Scalar>::quiet_NaN(); }

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

  const Matrix<Scalar>& values() const { return values_; }
  const Mask& mask() const { return mask_; }

  bool observed(Eigen::Index i, Eigen::Index j) const { return mask_(i, j); }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

  void observe(Eigen::Index i, Eigen::Index j, Scalar value) {
    if (!std::isfinite(value)) throw ValidationError("cannot observe a non-finite value");
    values_(i, j) = value;
    mask_(i, j) = true;
  }

  std::size_t observed_count() const { return static_cast<std::size_t>(mask_.count()); }
  Eigen::Index row_observed(Eigen::Index i) const { return mask_.row(i).count(); }
  Eigen::Index col_observed(Eigen::Index j) const { return mask_.col(j).count(); }

  // Observed entries with zeros elsewhere, P_Omega(U).
  Matrix<Scalar> projected() const {
    return mask_.select(values_, Matrix<Scalar>::Zero(rows(), cols()));
  }

 private:
  Matrix<Scalar> values_;
  Mask mask_;
};

using MaskedMatrixd = MaskedMatrix<double>;
using Matrixd = Matrix<double>;
using Vectord = Vector<double>;

}  // namespace fleetmc

#endif  // FLEETMC_MASKED_MATRIX_HPP_
