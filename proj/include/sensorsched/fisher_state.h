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

#ifndef SENSORSCHED_FISHER_STATE_H_
#define SENSORSCHED_FISHER_STATE_H_

#include <vector>

#include "sensorsched/model.h"

namespace sensorsched {

// Inverse Fisher information F_S^-1 for a growing sensor set S, together
// with the objective f(S) = Tr(P(t|t-1)) - Tr(F_S^-1).
//
// Only F_S^-1 is stored. Each sensor addition is a Sherman-Morrison
// downdate, so MarginalGain and AddSensor cost Theta(m^2) and never
// factorize a matrix.
class FisherState {
 public:
  // S = {} and F^-1 = predicted. Throws ConditioningError when `predicted`
  // is not positive definite or is too badly conditioned.
  static FisherState Init(const Matrix& predicted, double noise_var);

  // f(S + {j}) - f(S) for a sensor with measurement vector a:
  //   |F^-1 a|^2 / (noise_var + a^T F^-1 a).
  // Zero for a = 0.
  double MarginalGain(const Eigen::Ref<const Vector>& a) const;

  // Adds sensor `index` with measurement vector `a`. Throws
  // PreconditionError if `index` is negative or already selected.
  void AddSensor(int index, const Eigen::Ref<const Vector>& a);

  // Value-returning variant of AddSensor.
  FisherState WithSensor(int index, const Eigen::Ref<const Vector>& a) const;

  bool Contains(int index) const;

  int dim() const { return static_cast<int>(inv_fisher_.rows()); }
  const Matrix& inv_fisher() const { return inv_fisher_; }
  // Sensors in insertion order.
  const std::vector<int>& selected() const { return selected_; }
  double base_trace() const { return base_trace_; }
  double objective() const { return objective_; }
  double noise_var() const { return noise_var_; }
  // Tr(F_S^-1), the filtered MSE for the current set.
  double mse() const { return inv_fisher_.trace(); }

 private:
  FisherState(Matrix inv_fisher, double noise_var);

  Matrix inv_fisher_;
  std::vector<int> selected_;
  double base_trace_;
  double objective_ = 0.0;
  double noise_var_;
};

// Reference objective Tr(P) - Tr((P^-1 + noise_var^-1 A^T A)^-1) built by
// direct summation and factorization; selected_rows is |S| x m.
double ObjectiveOfSet(const Matrix& predicted, const Matrix& selected_rows,
                      double noise_var);

}  // namespace sensorsched

#endif  // SENSORSCHED_FISHER_STATE_H_
