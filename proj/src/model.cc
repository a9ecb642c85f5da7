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

#include "sensorsched/model.h"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "sensorsched/errors.h"

namespace sensorsched {
namespace {

std::string Describe(std::string_view what, std::string_view problem) {
  std::string message(what);
  message += ": ";
  message += problem;
  return message;
}

void RequireSquare(const Matrix& matrix, int dim, std::string_view what) {
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw InvalidInputError(Describe(
        what, "expected " + std::to_string(dim) + "x" + std::to_string(dim) +
                  " matrix, got " + std::to_string(matrix.rows()) + "x" +
                  std::to_string(matrix.cols())));
  }
}

void RequirePositiveVariance(double value, std::string_view what) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw InvalidInputError(Describe(what, "variance must be positive"));
  }
}

}  // namespace

SystemModel::SystemModel(int m, int n, TransitionProvider transition,
                         double process_noise_var,
                         double measurement_noise_var, Matrix initial_cov)
    : m_(m),
      n_(n),
      transition_(std::move(transition)),
      process_noise_var_(process_noise_var),
      measurement_noise_var_(measurement_noise_var),
      initial_cov_(std::move(initial_cov)) {
  if (m_ < 1 || n_ < 1) {
    throw InvalidInputError("system model: m and n must be positive");
  }
  if (!transition_) {
    throw InvalidInputError("system model: missing transition provider");
  }
  RequirePositiveVariance(process_noise_var_, "process noise");
  RequirePositiveVariance(measurement_noise_var_, "measurement noise");
  RequireSquare(initial_cov_, m_, "initial covariance");
  RequireFinite(initial_cov_, "initial covariance");
  RequireSymmetric(initial_cov_, "initial covariance");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(initial_cov_,
                                            Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidInputError(
        "initial covariance: matrix is not positive definite");
  }
}

SystemModel SystemModel::Identity(int m, int n, double process_noise_var,
                                  double measurement_noise_var,
                                  Matrix initial_cov) {
  return SystemModel(
      m, n, [m](int) -> Matrix { return Matrix::Identity(m, m); },
      process_noise_var, measurement_noise_var, std::move(initial_cov));
}

SystemModel SystemModel::Constant(Matrix transition, int n,
                                  double process_noise_var,
                                  double measurement_noise_var,
                                  Matrix initial_cov) {
  const int m = static_cast<int>(transition.rows());
  return SystemModel(
      m, n, [h = std::move(transition)](int) { return h; }, process_noise_var,
      measurement_noise_var, std::move(initial_cov));
}

Matrix SystemModel::transition(int t) const {
  Matrix h = transition_(t);
  RequireSquare(h, m_, "transition");
  RequireFinite(h, "transition");
  return h;
}

void ValidateMeasurements(const MeasurementMatrix& measurements, int m,
                          int n) {
  if (measurements.rows.rows() != n || measurements.rows.cols() != m) {
    throw InvalidInputError(
        "measurement matrix: expected " + std::to_string(n) + "x" +
        std::to_string(m) + ", got " +
        std::to_string(measurements.rows.rows()) + "x" +
        std::to_string(measurements.rows.cols()));
  }
  RequireFinite(measurements.rows, "measurement matrix");
}

Matrix Symmetrize(const Matrix& matrix) {
  return 0.5 * (matrix + matrix.transpose());
}

double ConditionEstimate(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

void RequireFinite(const Eigen::Ref<const Matrix>& matrix,
                   std::string_view what) {
  if (!matrix.allFinite()) {
    throw InvalidInputError(Describe(what, "non-finite entries"));
  }
}

void RequireSymmetric(const Matrix& matrix, std::string_view what) {
  if (matrix.rows() != matrix.cols()) {
    throw InvalidInputError(Describe(what, "matrix is not square"));
  }
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() >
      kSymmetryTolerance) {
    throw InvalidInputError(Describe(what, "matrix is not symmetric"));
  }
}

Matrix InverseSpd(const Matrix& spd, std::string_view what) {
  RequireFinite(spd, what);
  const double cond = ConditionEstimate(spd);
  if (!(cond <= kMaxConditionNumber)) {
    throw ConditioningError(
        Describe(what, "condition estimate " + std::to_string(cond) +
                           " exceeds limit"));
  }
  Eigen::LLT<Matrix> llt(spd);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError(Describe(what, "Cholesky factorization failed"));
  }
  return Symmetrize(llt.solve(Matrix::Identity(spd.rows(), spd.cols())));
}

Matrix PredictCovariance(const Matrix& filtered_prev, const SystemModel& model,
                         int t) {
  RequireSquare(filtered_prev, model.m(), "filtered covariance");
  RequireFinite(filtered_prev, "filtered covariance");
  const Matrix h = model.transition(t);
  Matrix predicted = h * filtered_prev * h.transpose();
  predicted.diagonal().array() += model.process_noise_var();
  return Symmetrize(predicted);
}

Matrix FilterCovariance(const Matrix& predicted, const Matrix& selected_rows,
                        double noise_var) {
  RequireFinite(predicted, "predicted covariance");
  RequirePositiveVariance(noise_var, "measurement noise");
  if (selected_rows.rows() == 0) return predicted;
  if (selected_rows.cols() != predicted.rows()) {
    throw InvalidInputError("selected rows: dimension does not match state");
  }
  RequireFinite(selected_rows, "selected rows");
  Matrix fisher = InverseSpd(predicted, "predicted covariance");
  fisher.noalias() += selected_rows.transpose() * selected_rows / noise_var;
  return InverseSpd(Symmetrize(fisher), "Fisher information");
}

Matrix SelectRows(const Matrix& rows, std::span<const int> indices) {
  Matrix out(static_cast<Eigen::Index>(indices.size()), rows.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const int index = indices[i];
    if (index < 0 || index >= rows.rows()) {
      throw InvalidInputError("sensor index " + std::to_string(index) +
                              " out of range");
    }
    out.row(static_cast<Eigen::Index>(i)) = rows.row(index);
  }
  return out;
}

double MseOf(const Matrix& filtered) {
  RequireFinite(filtered, "filtered covariance");
  return filtered.trace();
}

}  // namespace sensorsched
