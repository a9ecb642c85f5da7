// Copyright 2026 The Sensorsched Authors.
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

#include "sensorsched/relaxation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sensorsched/errors.h"

namespace sensorsched {
namespace {

double CappedSum(const Vector& y, double tau) {
  return (y.array() - tau).cwiseMax(0.0).cwiseMin(1.0).sum();
}

}  // namespace

Vector ProjectCappedSimplex(const Vector& y, double budget) {
  const Eigen::Index n = y.size();
  if (budget < 0.0 || budget > static_cast<double>(n)) {
    throw InvalidInputError("capped simplex: budget outside [0, n]");
  }
  // CappedSum is piecewise linear and nonincreasing in tau with kinks at
  // y_i - 1 and y_i; it equals n at the smallest kink and 0 at the largest.
  std::vector<double> kinks;
  kinks.reserve(static_cast<std::size_t>(2 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    kinks.push_back(y(i) - 1.0);
    kinks.push_back(y(i));
  }
  std::sort(kinks.begin(), kinks.end());

  // Largest kink index whose sum is still >= budget.
  std::size_t lo = 0;
  std::size_t hi = kinks.size() - 1;
  if (CappedSum(y, kinks[hi]) >= budget) {
    lo = hi;
  } else {
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (CappedSum(y, kinks[mid]) >= budget) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  double tau = kinks[lo];
  const double sum_lo = CappedSum(y, kinks[lo]);
  if (lo + 1 < kinks.size() && sum_lo > budget) {
    const double sum_hi = CappedSum(y, kinks[lo + 1]);
    tau += (sum_lo - budget) * (kinks[lo + 1] - kinks[lo]) / (sum_lo - sum_hi);
  }
  return (y.array() - tau).cwiseMax(0.0).cwiseMin(1.0).matrix();
}

RelaxedObjective::RelaxedObjective(const Matrix& predicted, const Matrix& rows,
                                   double noise_var)
    : prior_information_(InverseSpd(predicted, "predicted covariance")),
      scaled_rows_(rows / std::sqrt(noise_var)) {}

double RelaxedObjective::Value(const Vector& weights) const {
  Matrix fisher = prior_information_;
  fisher.noalias() +=
      scaled_rows_.transpose() * weights.asDiagonal() * scaled_rows_;
  Eigen::LLT<Matrix> llt(fisher);
  if (llt.info() != Eigen::Success) {
    return std::numeric_limits<double>::infinity();
  }
  return llt.solve(Matrix::Identity(fisher.rows(), fisher.cols())).trace();
}

double RelaxedObjective::ValueAndGradient(const Vector& weights,
                                          Vector& gradient) const {
  Matrix fisher = prior_information_;
  fisher.noalias() +=
      scaled_rows_.transpose() * weights.asDiagonal() * scaled_rows_;
  Eigen::LLT<Matrix> llt(fisher);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError("relaxation: Fisher information lost definiteness");
  }
  const Matrix inverse =
      llt.solve(Matrix::Identity(fisher.rows(), fisher.cols()));
  const Matrix projected = scaled_rows_ * inverse;
  gradient = -projected.rowwise().squaredNorm();
  return inverse.trace();
}

RelaxationSolution SolveRelaxation(const Matrix& predicted, const Matrix& rows,
                                   double noise_var, int k,
                                   const RelaxationOptions& options) {
  const Eigen::Index n = rows.rows();
  const RelaxedObjective objective(predicted, rows, noise_var);

  RelaxationSolution solution;
  solution.weights = Vector::Constant(n, static_cast<double>(k) / n);
  Vector gradient(n);
  double value = objective.ValueAndGradient(solution.weights, gradient);
  double step = 1.0 / std::max(gradient.cwiseAbs().maxCoeff(), 1e-300);

  for (int iter = 0; iter < options.max_iters; ++iter) {
    solution.iterations = iter + 1;
    bool accepted = false;
    bool stationary = false;
    Vector candidate;
    double candidate_value = value;
    while (step > 1e-20) {
      candidate = ProjectCappedSimplex(solution.weights - step * gradient, k);
      const Vector direction = candidate - solution.weights;
      if (direction.lpNorm<Eigen::Infinity>() < 1e-14) {
        stationary = true;
        break;
      }
      candidate_value = objective.Value(candidate);
      if (candidate_value <=
          value + options.armijo * gradient.dot(direction)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Either a fixed point of the projected step or no descent left at
      // machine precision.
      solution.converged = stationary || step <= 1e-20;
      break;
    }
    const double decrease = value - candidate_value;
    solution.weights = std::move(candidate);
    value = objective.ValueAndGradient(solution.weights, gradient);
    if (decrease <= options.tolerance * std::max(1.0, std::abs(value))) {
      solution.converged = true;
      break;
    }
    step *= 2.0;
  }
  solution.value = value;
  return solution;
}

}  // namespace sensorsched
