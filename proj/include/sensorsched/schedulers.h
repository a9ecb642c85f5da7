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

#ifndef SENSORSCHED_SCHEDULERS_H_
#define SENSORSCHED_SCHEDULERS_H_

// Sensor selection policies for one time step, plus the multi-step driver.
//
// Every policy maximizes f(S) = Tr(P(t|t-1)) - Tr(F_S^-1) over the uniform
// matroid {S : |S| = k}:
//   - randomized greedy: each of k rounds scores only a uniform random
//     sample of s = ceil((n/k) ln(1/epsilon)) unselected sensors;
//   - greedy: every round scores all unselected sensors;
//   - relaxation: projected gradient on the convex relaxation over the
//     capped simplex, rounded to the k largest weights;
//   - oracle: exhaustive enumeration of all k-subsets;
//   - random: a uniform k-subset.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sensorsched/model.h"

namespace sensorsched {

enum class Method { kRandomizedGreedy, kGreedy, kRelaxation, kOracle, kRandom };

std::string_view MethodName(Method method);
// Accepts the names produced by MethodName. Throws ConfigError otherwise.
Method ParseMethod(std::string_view name);

// The cardinality constraint of the scheduling problem. Independent sets
// are the subsets of {0, ..., ground_size - 1} with at most `rank`
// distinct elements; bases have exactly `rank`.
class UniformMatroid {
 public:
  UniformMatroid(int ground_size, int rank);

  int ground_size() const { return ground_size_; }
  int rank() const { return rank_; }
  bool IsIndependent(std::span<const int> set) const;
  bool IsBasis(std::span<const int> set) const;

 private:
  int ground_size_;
  int rank_;
};

inline constexpr std::uint64_t kDefaultBruteForceCap = 2'000'000;

struct RelaxationOptions {
  int max_iters = 500;
  // Stop once an accepted step decreases the objective by less than
  // tolerance * max(1, objective).
  double tolerance = 1e-7;
  double armijo = 1e-4;
};

struct SchedulerConfig {
  int k = 1;
  double epsilon = 0.001;
  std::uint64_t seed = 0;
  Method method = Method::kRandomizedGreedy;
  RelaxationOptions relaxation;
  std::uint64_t brute_force_cap = kDefaultBruteForceCap;

  // Throws ConfigError unless 1 <= k <= n and, for randomized greedy,
  // e^-k <= epsilon < 1.
  void Validate(int n) const;
};

struct RelaxationInfo {
  Vector weights;
  // Tr(F(z)^-1) at the returned weights; a lower bound on the best
  // achievable MSE up to solver accuracy.
  double fractional_mse = 0.0;
  double fractional_objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SelectionResult {
  // Sensor indices in the order they were chosen (ascending for the
  // oracle and random baseline).
  std::vector<int> selected;
  double objective = 0.0;
  double mse = 0.0;
  std::chrono::nanoseconds elapsed{0};
  // Marginal gain of each chosen sensor (greedy-type methods only).
  std::vector<double> gain_trace;
  std::optional<RelaxationInfo> relaxation;
};

// Candidates scored per randomized greedy round:
// min(ceil((n/k) ln(1/epsilon)), remaining).
int SampleSize(int n, int k, double epsilon, int remaining);

// `rows` is n x m; row i is the measurement vector of sensor i.
SelectionResult RandomizedGreedy(const Matrix& predicted, const Matrix& rows,
                                 double noise_var, int k, double epsilon,
                                 std::uint64_t seed);

SelectionResult Greedy(const Matrix& predicted, const Matrix& rows,
                       double noise_var, int k);

// Exact maximizer; ties go to the lexicographically smallest set. Throws
// CapExceededError when C(n, k) > cap.
SelectionResult BruteForce(const Matrix& predicted, const Matrix& rows,
                           double noise_var, int k,
                           std::uint64_t cap = kDefaultBruteForceCap);

SelectionResult RelaxationSchedule(const Matrix& predicted, const Matrix& rows,
                                   double noise_var, int k,
                                   const RelaxationOptions& options = {});

SelectionResult RandomBaseline(const Matrix& predicted, const Matrix& rows,
                               double noise_var, int k, std::uint64_t seed);

// Validates `config` against rows.rows() and dispatches on config.method.
SelectionResult RunScheduler(const SchedulerConfig& config,
                             const Matrix& predicted, const Matrix& rows,
                             double noise_var);

struct ScheduleStep {
  int t = 0;
  SelectionResult selection;
  CovarianceState covariance;
  double mse = 0.0;
};

struct Schedule {
  std::vector<ScheduleStep> steps;
};

// Runs predict -> select -> filter for t = 1..matrices.size(). The
// scheduler seed for step t is MixSeed(config.seed, t).
Schedule ScheduleHorizon(const SystemModel& model,
                         std::span<const MeasurementMatrix> matrices,
                         const SchedulerConfig& config);

}  // namespace sensorsched

#endif  // SENSORSCHED_SCHEDULERS_H_
