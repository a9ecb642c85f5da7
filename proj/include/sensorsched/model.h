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

#ifndef SENSORSCHED_MODEL_H_
#define SENSORSCHED_MODEL_H_

// Linear time-varying system model and the Kalman covariance recursions
//
//   P(t|t-1) = H(t) P(t-1|t-1) H(t)^T + q I
//   P(t|t)   = (P(t|t-1)^-1 + r^-1 A_S^T A_S)^-1
//
// with Q = q I and R = r I. Everything here is a reference (direct
// factorization) path; the incremental path lives in fisher_state.h.

#include <functional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace sensorsched {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kMaxConditionNumber = 1e12;

// Time-indexed state transition H(t).
using TransitionProvider = std::function<Matrix(int t)>;

class SystemModel {
 public:
  // Throws InvalidInputError when dimensions are not positive, a noise
  // variance is not positive, or initial_cov is not symmetric positive
  // definite.
  SystemModel(int m, int n, TransitionProvider transition,
              double process_noise_var, double measurement_noise_var,
              Matrix initial_cov);

  // H(t) = I_m for every t.
  static SystemModel Identity(int m, int n, double process_noise_var,
                              double measurement_noise_var,
                              Matrix initial_cov);

  // H(t) = transition for every t.
  static SystemModel Constant(Matrix transition, int n,
                              double process_noise_var,
                              double measurement_noise_var,
                              Matrix initial_cov);

  int m() const { return m_; }
  int n() const { return n_; }
  double process_noise_var() const { return process_noise_var_; }
  double measurement_noise_var() const { return measurement_noise_var_; }
  const Matrix& initial_cov() const { return initial_cov_; }

  // Evaluates the provider and checks the result is a finite m x m matrix.
  Matrix transition(int t) const;

 private:
  int m_;
  int n_;
  TransitionProvider transition_;
  double process_noise_var_;
  double measurement_noise_var_;
  Matrix initial_cov_;
};

// The n measurement vectors a_i(t) of one time step, stored as the rows of
// an n x m matrix.
struct MeasurementMatrix {
  Matrix rows;
  int time_index = 0;
};

// Throws InvalidInputError unless `measurements` holds n finite rows of
// dimension m.
void ValidateMeasurements(const MeasurementMatrix& measurements, int m,
                          int n);

struct CovarianceState {
  Matrix predicted;
  Matrix filtered;
};

// (M + M^T) / 2.
Matrix Symmetrize(const Matrix& matrix);

// Ratio of extreme eigenvalues of a symmetric matrix; +inf when the
// smallest eigenvalue is not positive.
double ConditionEstimate(const Matrix& symmetric);

void RequireFinite(const Eigen::Ref<const Matrix>& matrix,
                   std::string_view what);
void RequireSymmetric(const Matrix& matrix, std::string_view what);

// Inverse of a symmetric positive definite matrix by Cholesky
// factorization. Throws ConditioningError when the condition estimate
// exceeds kMaxConditionNumber.
Matrix InverseSpd(const Matrix& spd, std::string_view what);

Matrix PredictCovariance(const Matrix& filtered_prev, const SystemModel& model,
                         int t);

// selected_rows is |S| x m; an empty matrix returns `predicted` unchanged.
Matrix FilterCovariance(const Matrix& predicted, const Matrix& selected_rows,
                        double noise_var);

// Stacks rows[indices[0]], rows[indices[1]], ... into a |indices| x m
// matrix.
Matrix SelectRows(const Matrix& rows, std::span<const int> indices);

// Tr(P(t|t)).
double MseOf(const Matrix& filtered);

}  // namespace sensorsched

#endif  // SENSORSCHED_MODEL_H_
