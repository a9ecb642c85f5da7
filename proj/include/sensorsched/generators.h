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

#ifndef SENSORSCHED_GENERATORS_H_
#define SENSORSCHED_GENERATORS_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sensorsched/model.h"

namespace sensorsched {

// Gaussian: entries i.i.d. N(0, 1/m), so E|a|^2 = 1.
// Bernoulli: entries i.i.d. +-1/sqrt(m), so |a|^2 = 1 exactly.
enum class Ensemble { kGaussian, kBernoulli };

std::string_view EnsembleName(Ensemble ensemble);
// Throws ConfigError for anything but "gaussian" or "bernoulli".
Ensemble ParseEnsemble(std::string_view name);

struct EnsembleSpec {
  Ensemble kind = Ensemble::kGaussian;
  int m = 1;
  int n = 1;
  std::uint64_t seed = 0;
};

MeasurementMatrix GaussianRows(const EnsembleSpec& spec, int time_index = 0);
MeasurementMatrix BernoulliRows(const EnsembleSpec& spec, int time_index = 0);
MeasurementMatrix GenerateRows(const EnsembleSpec& spec, int time_index = 0);

// One matrix per step t = 1..horizon; step t uses seed MixSeed(seed, t).
std::vector<MeasurementMatrix> GenerateHorizon(Ensemble kind, int m, int n,
                                               int horizon,
                                               std::uint64_t seed);

struct Trajectory {
  std::vector<Vector> states;     // x(t), t = 1..T
  std::vector<Vector> estimates;  // x_hat(t|t)
  std::vector<double> squared_errors;
  std::vector<double> filtered_traces;  // Tr(P(t|t))
};

// Samples x(0) ~ N(0, initial_cov), propagates the state with process
// noise, measures the selected sensors of each step with measurement noise
// and runs the Kalman mean update
//   x_hat(t|t) = x_hat(t|t-1) + r^-1 P(t|t) A_S^T (y_S - A_S x_hat(t|t-1)).
// selections[t-1] lists the sensors used at step t.
Trajectory SimulateTrajectory(const SystemModel& model,
                              std::span<const MeasurementMatrix> matrices,
                              std::span<const std::vector<int>> selections,
                              std::uint64_t seed);

}  // namespace sensorsched

#endif  // SENSORSCHED_GENERATORS_H_
