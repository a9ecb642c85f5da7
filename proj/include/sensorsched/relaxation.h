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

#ifndef SENSORSCHED_RELAXATION_H_
#define SENSORSCHED_RELAXATION_H_

// Convex relaxation of the scheduling problem:
//
//   minimize   g(z) = Tr((P^-1 + r^-1 sum_i z_i a_i a_i^T)^-1)
//   subject to 0 <= z_i <= 1,  sum_i z_i = k,
//
// with dg/dz_i = -r^-1 |F(z)^-1 a_i|^2.

#include "sensorsched/model.h"
#include "sensorsched/schedulers.h"

namespace sensorsched {

// Euclidean projection of y onto {x : 0 <= x <= 1, sum x = budget}, via
// the sorted-threshold search for tau with sum clamp(y - tau, 0, 1) =
// budget. Requires 0 <= budget <= y.size().
Vector ProjectCappedSimplex(const Vector& y, double budget);

class RelaxedObjective {
 public:
  RelaxedObjective(const Matrix& predicted, const Matrix& rows,
                   double noise_var);

  // g(z); +inf when F(z) is not positive definite.
  double Value(const Vector& weights) const;
  // g(z) and its gradient.
  double ValueAndGradient(const Vector& weights, Vector& gradient) const;

 private:
  Matrix prior_information_;
  Matrix scaled_rows_;  // rows / sqrt(noise_var)
};

struct RelaxationSolution {
  Vector weights;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Projected gradient descent from the uniform point z = k/n with Armijo
// backtracking (halving). Never throws on non-convergence; the last
// (best) iterate is returned with converged = false.
RelaxationSolution SolveRelaxation(const Matrix& predicted, const Matrix& rows,
                                   double noise_var, int k,
                                   const RelaxationOptions& options);

}  // namespace sensorsched

#endif  // SENSORSCHED_RELAXATION_H_
