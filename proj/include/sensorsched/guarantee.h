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

#ifndef SENSORSCHED_GUARANTEE_H_
#define SENSORSCHED_GUARANTEE_H_

// Monte Carlo checks of the randomized greedy guarantees against an
// exhaustive optimum:
//
//   E[f(S)]   >= alpha f(O),                 alpha = 1 - e^(-1/c) - eps/c
//   E[MSE(S)] <= alpha MSE(O) + (1 - alpha) Tr(P(t|t-1))
//
// and of the sampling-hit probability of one randomized round,
//
//   Pr{R intersects O \ S} >= (1 - eps) / k * |O \ S|.

#include <cstdint>
#include <span>
#include <vector>

#include "sensorsched/model.h"

namespace sensorsched {

inline constexpr double kMonteCarloSigmas = 3.0;

struct GuaranteeReport {
  int n = 0;
  int k = 0;
  double epsilon = 0.0;
  std::vector<int> optimal;
  double optimal_objective = 0.0;
  double optimal_mse = 0.0;
  double base_trace = 0.0;
  double c_max = 0.0;
  double c = 1.0;
  double alpha = 0.0;
  // Factor actually applied: alpha, or 1 - e^(-1/c) when every round
  // scores the full pool and the run is deterministic.
  double factor = 0.0;
  bool deterministic = false;
  int runs = 0;
  double mean_objective = 0.0;
  double objective_se = 0.0;
  double objective_bound = 0.0;
  bool objective_pass = false;
  double mean_mse = 0.0;
  double mse_se = 0.0;
  double mse_bound = 0.0;
  bool mse_pass = false;
};

// Runs brute force, exhaustive curvature and `runs` seeded randomized
// greedy runs (seeds MixSeed(seed, run)). Monte Carlo checks pass when the
// bound holds within kMonteCarloSigmas standard errors; deterministic ones
// use an absolute slack of 1e-12.
GuaranteeReport CheckGuarantee(const Matrix& predicted, const Matrix& rows,
                               double noise_var, int k, double epsilon,
                               int runs, std::uint64_t seed);

struct SamplingHitReport {
  int resamples = 0;
  int sample_size = 0;
  int missing = 0;  // |O \ S|
  double frequency = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Draws the candidate set of one randomized round from [n] \ selected
// `resamples` times and counts how often it meets optimal \ selected.
SamplingHitReport CheckSamplingHit(int n, int k, double epsilon,
                                   std::span<const int> optimal,
                                   std::span<const int> selected,
                                   int resamples, std::uint64_t seed);

}  // namespace sensorsched

#endif  // SENSORSCHED_GUARANTEE_H_
