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

#include "sensorsched/fisher_state.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <utility>

#include "sensorsched/errors.h"

namespace sensorsched {
namespace {

// Cheap conditioning check for the scheduler entry point: a Cholesky
// factorization plus the squared ratio of extreme pivots, which is a lower
// estimate of the spectral condition number.
void RequireWellConditioned(const Matrix& spd) {
  Eigen::LLT<Matrix> llt(spd);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError(
        "predicted covariance: matrix is not positive definite");
  }
  const auto pivots = llt.matrixLLT().diagonal();
  const double ratio = pivots.maxCoeff() / pivots.minCoeff();
  if (!(ratio * ratio <= kMaxConditionNumber)) {
    throw ConditioningError(
        "predicted covariance: condition estimate exceeds limit");
  }
}

}  // namespace

FisherState::FisherState(Matrix inv_fisher, double noise_var)
    : inv_fisher_(std::move(inv_fisher)),
      base_trace_(inv_fisher_.trace()),
      noise_var_(noise_var) {}

FisherState FisherState::Init(const Matrix& predicted, double noise_var) {
  if (!std::isfinite(noise_var) || noise_var <= 0.0) {
    throw InvalidInputError("measurement noise: variance must be positive");
  }
  RequireFinite(predicted, "predicted covariance");
  RequireSymmetric(predicted, "predicted covariance");
  RequireWellConditioned(predicted);
  return FisherState(predicted, noise_var);
}

double FisherState::MarginalGain(const Eigen::Ref<const Vector>& a) const {
  assert(a.size() == inv_fisher_.rows());
  const Vector v = inv_fisher_ * a;
  const double numerator = v.squaredNorm();
  if (numerator == 0.0) return 0.0;
  return numerator / (noise_var_ + a.dot(v));
}

void FisherState::AddSensor(int index, const Eigen::Ref<const Vector>& a) {
  if (index < 0) {
    throw PreconditionError("sensor index must be nonnegative");
  }
  if (Contains(index)) {
    throw PreconditionError("sensor " + std::to_string(index) +
                            " is already selected");
  }
  if (a.size() != inv_fisher_.rows()) {
    throw InvalidInputError("measurement vector: dimension mismatch");
  }
  selected_.push_back(index);
  const Vector v = inv_fisher_ * a;
  const double numerator = v.squaredNorm();
  if (numerator == 0.0) return;
  const double denominator = noise_var_ + a.dot(v);
  inv_fisher_.selfadjointView<Eigen::Lower>().rankUpdate(v,
                                                         -1.0 / denominator);
  inv_fisher_.triangularView<Eigen::StrictlyUpper>() =
      inv_fisher_.transpose();
  objective_ += numerator / denominator;
  assert(std::abs(objective_ - (base_trace_ - inv_fisher_.trace())) <=
         1e-9 * std::max(1.0, base_trace_));
}

FisherState FisherState::WithSensor(int index,
                                    const Eigen::Ref<const Vector>& a) const {
  FisherState next = *this;
  next.AddSensor(index, a);
  return next;
}

bool FisherState::Contains(int index) const {
  return std::find(selected_.begin(), selected_.end(), index) !=
         selected_.end();
}

double ObjectiveOfSet(const Matrix& predicted, const Matrix& selected_rows,
                      double noise_var) {
  return predicted.trace() -
         MseOf(FilterCovariance(predicted, selected_rows, noise_var));
}

}  // namespace sensorsched
