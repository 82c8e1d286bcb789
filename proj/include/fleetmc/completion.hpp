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

// Low-rank completion of a partially observed matrix by alternating ridge
// regressions, and the spectral rank estimate used to pick the factor rank.

#ifndef FLEETMC_COMPLETION_HPP_
#define FLEETMC_COMPLETION_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fleetmc/errors.hpp"
#include "fleetmc/masked_matrix.hpp"
#include "fleetmc/parallel.hpp"

namespace fleetmc {

// Continuation starts from the SVD factors and runs ALS through a decreasing
// lambda schedule before the requested lambda.
enum class FactorInit { Svd, Random, Continuation };

struct CompletionConfig {
  int rank = 3;
  double lambda = 0.05;
  int max_sweeps = 500;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  FactorInit init = FactorInit::Continuation;
  // Continuation schedule: first lambda as a fraction of the top singular
  // value of the mean-imputed matrix, divided by lambda_step per stage.
  double lambda_start = 0.1;
  double lambda_step = 10.0;
  int threads = 1;

  void validate() const {
    if (rank < 1) throw ValidationError("rank must be at least 1");
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw ValidationError("lambda must be >= 0");
    if (max_sweeps < 1) throw ValidationError("max_sweeps must be at least 1");
    if (!(rel_tol > 0)) throw ValidationError("rel_tol must be positive");
    if (threads < 1) throw ValidationError("threads must be at least 1");
    if (!(lambda_start > 0) || !std::isfinite(lambda_start)) {
      throw ValidationError("lambda_start must be positive");
    }
    if (!(lambda_step > 1) || !std::isfinite(lambda_step)) {
      throw ValidationError("lambda_step must exceed 1");
    }
  }
};

// Machine factors A (K x r) and condition factors B (l x r).
template <typename Scalar>
struct FactorPair {
  Matrix<Scalar> A;
  Matrix<Scalar> B;

  Eigen::Index rank() const { return A.cols(); }
  Matrix<Scalar> product() const { return A * B.transpose(); }
};

// One continuation stage and its objective at that stage's lambda.
template <typename Scalar>
struct WarmupStage {
  double lambda = 0;
  std::vector<Scalar> objective_trace;
  int sweeps = 0;
};

template <typename Scalar>
struct CompletionResult {
  FactorPair<Scalar> factors;
  Matrix<Scalar> completed;
  // Objective at the initial factors, then after every half-sweep.
  std::vector<Scalar> objective_trace;
  int sweeps = 0;
  bool converged = false;
  // Continuation stages run before the final solve, largest lambda first.
  std::vector<WarmupStage<Scalar>> warmup;
};

// Observed entries kept; each missing entry replaced by its column's observed
// mean, or by the global observed mean when the column has no observations.
template <typename Scalar>
Matrix<Scalar> mean_impute(const MaskedMatrix<Scalar>& m) {
  const Eigen::Index total = m.mask().count();
  if (total == 0) throw ValidationError("cannot impute a matrix with no observed entries");
  const Matrix<Scalar> observed = m.projected();
  const Scalar global = observed.sum() / static_cast<Scalar>(total);
  Matrix<Scalar> out = observed;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Eigen::Index n = m.col_observed(j);
    const Scalar fill = n > 0 ? observed.col(j).sum() / static_cast<Scalar>(n) : global;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!m.observed(i, j)) out(i, j) = fill;
    }
  }
  return out;
}

template <typename Derived>
Matrix<typename Derived::Scalar> pairwise_row_distances(const Eigen::MatrixBase<Derived>& rows) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = rows.rows();
  Matrix<Scalar> d = Matrix<Scalar>::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      d(i, j) = d(j, i) = (rows.row(i) - rows.row(j)).norm();
    }
  }
  return d;
}

// W(i, j) = exp(-|row_i - row_j|^2 / (2 sigma^2)).
template <typename Derived>
Matrix<typename Derived::Scalar> gaussian_affinity(const Eigen::MatrixBase<Derived>& rows,
                                                   typename Derived::Scalar sigma) {
  using Scalar = typename Derived::Scalar;
  if (!(sigma > 0)) throw ValidationError("kernel width sigma must be positive");
  const Eigen::Index k = rows.rows();
  const Scalar scale = Scalar(1) / (Scalar(2) * sigma * sigma);
  Matrix<Scalar> w(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    w(i, i) = Scalar(1);
    for (Eigen::Index j = i + 1; j < k; ++j) {
      w(i, j) = w(j, i) = std::exp(-(rows.row(i) - rows.row(j)).squaredNorm() * scale);
    }
  }
  return w;
}

// L = I - D^{-1/2} W D^{-1/2}.
template <typename Scalar>
Matrix<Scalar> normalized_laplacian(const Matrix<Scalar>& w) {
  const Vector<Scalar> inv_sqrt_degree = w.rowwise().sum().array().rsqrt().matrix();
  Matrix<Scalar> l = -(inv_sqrt_degree.asDiagonal() * w * inv_sqrt_degree.asDiagonal());
  l.diagonal().array() += Scalar(1);
  return l;
}

template <typename Scalar>
struct RankEstimate {
  int rank = 1;
  Scalar sigma = 0;
  Vector<Scalar> eigenvalues;  // ascending
};

// Kernel width: the median over rows of the distance to the nearest other
// row. When most rows have an exact duplicate that median is zero and the
// width falls back to a thousandth of the smallest nonzero distance.
template <typename Scalar>
Scalar nearest_neighbor_sigma(const Matrix<Scalar>& distances) {
  const Eigen::Index k = distances.rows();
  std::vector<Scalar> nearest;
  Scalar smallest_positive = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index j = 0; j < k; ++j) {
      if (j == i) continue;
      const Scalar d = distances(i, j);
      best = std::min(best, d);
      if (d > 0 && (smallest_positive == 0 || d < smallest_positive)) smallest_positive = d;
    }
    nearest.push_back(best);
  }
  if (smallest_positive == 0) return 0;
  std::sort(nearest.begin(), nearest.end());
  const std::size_t n = nearest.size();
  const Scalar median = n % 2 == 1 ? nearest[n / 2] : (nearest[n / 2 - 1] + nearest[n / 2]) / 2;
  return median > 0 ? median : smallest_positive * Scalar(1e-3);
}

// Mean-impute, build a Gaussian affinity between machines, and read the
// number of clusters off the largest eigengap of the normalized Laplacian.
template <typename Scalar>
RankEstimate<Scalar> estimate_rank(const MaskedMatrix<Scalar>& m) {
  const Eigen::Index k = m.rows();
  if (k < 2) throw ValidationError("rank estimation needs at least two rows");
  const Matrix<Scalar> imputed = mean_impute(m);
  const Matrix<Scalar> distances = pairwise_row_distances(imputed);

  RankEstimate<Scalar> est;
  est.sigma = nearest_neighbor_sigma(distances);
  const Matrix<Scalar> w = est.sigma > 0 ? gaussian_affinity(imputed, est.sigma)
                                         : Matrix<Scalar>::Ones(k, k);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(normalized_laplacian(w),
                                                       Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("Laplacian eigensolver failed");
  est.eigenvalues = solver.eigenvalues();
  if (est.sigma == 0) {
    est.rank = 1;
    return est;
  }
  const Eigen::Index positions = std::min<Eigen::Index>(k - 1, 10);
  Scalar best_gap = -1;
  for (Eigen::Index i = 1; i <= positions; ++i) {
    const Scalar gap = est.eigenvalues(i) - est.eigenvalues(i - 1);
    if (gap > best_gap) {
      best_gap = gap;
      est.rank = static_cast<int>(i);
    }
  }
  return est;
}

// 1/2 |P_Omega(U - A B^T)|_F^2 + lambda (|A|_F^2 + |B|_F^2).
template <typename Scalar>
Scalar objective_value(const MaskedMatrix<Scalar>& m, const FactorPair<Scalar>& f, Scalar lambda) {
  if (f.A.rows() != m.rows() || f.B.rows() != m.cols() || f.A.cols() != f.B.cols()) {
    throw ValidationError("factor shapes do not match the matrix");
  }
  const Matrix<Scalar> residual =
      m.mask().select(m.values() - f.A * f.B.transpose(), Matrix<Scalar>::Zero(m.rows(), m.cols()));
  return Scalar(0.5) * residual.squaredNorm() + lambda * (f.A.squaredNorm() + f.B.squaredNorm());
}

// Truncated SVD of the mean-imputed matrix split symmetrically between the
// factors, or seeded Gaussian factors.
template <typename Scalar>
FactorPair<Scalar> initial_factors(const MaskedMatrix<Scalar>& m, const CompletionConfig& cfg) {
  const Eigen::Index r = cfg.rank;
  FactorPair<Scalar> f;
  if (cfg.init != FactorInit::Random) {
    Eigen::JacobiSVD<Matrix<Scalar>> svd(mean_impute(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector<Scalar> root = svd.singularValues().head(r).cwiseSqrt();
    f.A = svd.matrixU().leftCols(r) * root.asDiagonal();
    f.B = svd.matrixV().leftCols(r) * root.asDiagonal();
    return f;
  }
  const Matrix<Scalar> observed = m.projected();
  const auto n = static_cast<Scalar>(std::max<std::size_t>(m.observed_count(), 1));
  const Scalar rms = std::sqrt(observed.squaredNorm() / n);
  const Scalar scale = std::sqrt(std::max(rms, Scalar(1e-12)) / static_cast<Scalar>(r));
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  f.A.resize(m.rows(), r);
  f.B.resize(m.cols(), r);
  for (Eigen::Index i = 0; i < f.A.size(); ++i) f.A.data()[i] = scale * Scalar(normal(rng));
  for (Eigen::Index i = 0; i < f.B.size(); ++i) f.B.data()[i] = scale * Scalar(normal(rng));
  return f;
}

namespace detail {

// Minimizes the objective over one factor row with the opposite factor held
// fixed: (F_S^T F_S + 2 lambda I) x = F_S^T y_S over the observed set S.
template <typename Scalar>
void ridge_solve_rows(const Matrix<Scalar>& values, const std::vector<std::vector<Eigen::Index>>& support,
                      bool transposed, const Matrix<Scalar>& fixed, Scalar lambda, int threads,
                      Matrix<Scalar>& target) {
  const Eigen::Index r = fixed.cols();
  const Scalar diag = lambda > 0 ? Scalar(2) * lambda : Scalar(1e-12);
  parallel_for(target.rows(), threads, [&](Eigen::Index i) {
    Matrix<Scalar> gram = Matrix<Scalar>::Identity(r, r) * diag;
    Vector<Scalar> rhs = Vector<Scalar>::Zero(r);
    for (const Eigen::Index j : support[static_cast<std::size_t>(i)]) {
      const auto f = fixed.row(j);
      gram.noalias() += f.transpose() * f;
      rhs.noalias() += f.transpose() * (transposed ? values(j, i) : values(i, j));
    }
    target.row(i) = gram.ldlt().solve(rhs).transpose();
  });
}

}  // namespace detail

template <typename Scalar>
CompletionResult<Scalar> als_complete(const MaskedMatrix<Scalar>& m, const CompletionConfig& cfg,
                                      FactorPair<Scalar> start) {
  cfg.validate();
  const Eigen::Index k = m.rows();
  const Eigen::Index l = m.cols();
  if (cfg.rank >= std::min(k, l)) {
    throw ValidationError("rank " + std::to_string(cfg.rank) + " must be below min(" +
                          std::to_string(k) + ", " + std::to_string(l) + ")");
  }
  if (start.A.rows() != k || start.B.rows() != l || start.A.cols() != cfg.rank ||
      start.B.cols() != cfg.rank) {
    throw ValidationError("initial factors have the wrong shape");
  }
  std::vector<std::vector<Eigen::Index>> by_row(static_cast<std::size_t>(k));
  std::vector<std::vector<Eigen::Index>> by_col(static_cast<std::size_t>(l));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < l; ++j) {
      if (m.observed(i, j)) {
        by_row[static_cast<std::size_t>(i)].push_back(j);
        by_col[static_cast<std::size_t>(j)].push_back(i);
      }
    }
    if (by_row[static_cast<std::size_t>(i)].empty()) {
      throw ValidationError("row " + std::to_string(i) + " has no observed entries");
    }
  }

  const auto lambda = static_cast<Scalar>(cfg.lambda);
  CompletionResult<Scalar> result;
  result.factors = std::move(start);
  auto& f = result.factors;
  Scalar previous = objective_value(m, f, lambda);
  result.objective_trace.push_back(previous);

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    detail::ridge_solve_rows(m.values(), by_row, false, f.B, lambda, cfg.threads, f.A);
    result.objective_trace.push_back(objective_value(m, f, lambda));
    detail::ridge_solve_rows(m.values(), by_col, true, f.A, lambda, cfg.threads, f.B);
    const Scalar current = objective_value(m, f, lambda);
    result.objective_trace.push_back(current);
    result.sweeps = sweep;
    if (!std::isfinite(current)) throw NumericError("ALS objective became non-finite");
    if (current == 0 || previous - current <= static_cast<Scalar>(cfg.rel_tol) * previous) {
      result.converged = true;
      break;
    }
    previous = current;
  }
  result.completed = f.product();
  return result;
}

template <typename Scalar>
CompletionResult<Scalar> als_complete(const MaskedMatrix<Scalar>& m, const CompletionConfig& cfg) {
  cfg.validate();
  if (cfg.rank >= std::min(m.rows(), m.cols())) {
    throw ValidationError("rank " + std::to_string(cfg.rank) + " must be below min(" +
                          std::to_string(m.rows()) + ", " + std::to_string(m.cols()) + ")");
  }
  if (cfg.init != FactorInit::Continuation) return als_complete(m, cfg, initial_factors(m, cfg));

  FactorPair<Scalar> f = initial_factors(m, cfg);
  const Eigen::JacobiSVD<Matrix<Scalar>> svd(mean_impute(m));
  std::vector<WarmupStage<Scalar>> warmup;
  CompletionConfig stage = cfg;
  stage.lambda = cfg.lambda_start * static_cast<double>(svd.singularValues()(0));
  for (; stage.lambda > cfg.lambda; stage.lambda /= cfg.lambda_step) {
    auto r = als_complete(m, stage, std::move(f));
    warmup.push_back({stage.lambda, std::move(r.objective_trace), r.sweeps});
    f = std::move(r.factors);
  }
  auto result = als_complete(m, cfg, std::move(f));
  result.warmup = std::move(warmup);
  return result;
}

}  // namespace fleetmc

#endif  // FLEETMC_COMPLETION_HPP_
