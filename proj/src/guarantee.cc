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

#include "sensorsched/guarantee.h"

#include <algorithm>
#include <cmath>

#include "sensorsched/curvature.h"
#include "sensorsched/errors.h"
#include "sensorsched/rng.h"
#include "sensorsched/schedulers.h"

namespace sensorsched {
namespace {

struct Moments {
  double mean = 0.0;
  double standard_error = 0.0;
};

Moments MeanAndError(const std::vector<double>& values) {
  Moments out;
  const double count = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.standard_error = std::sqrt(ss / (count - 1.0) / count);
  }
  return out;
}

}  // namespace

GuaranteeReport CheckGuarantee(const Matrix& predicted, const Matrix& rows,
                               double noise_var, int k, double epsilon,
                               int runs, std::uint64_t seed) {
  if (runs < 1) throw ConfigError("guarantee check needs at least one run");
  const int n = static_cast<int>(rows.rows());
  SchedulerConfig config{.k = k, .epsilon = epsilon};
  config.Validate(n);

  GuaranteeReport report;
  report.n = n;
  report.k = k;
  report.epsilon = epsilon;
  const SelectionResult optimum = BruteForce(predicted, rows, noise_var, k);
  report.optimal = optimum.selected;
  report.optimal_objective = optimum.objective;
  report.optimal_mse = optimum.mse;
  report.base_trace = predicted.trace();

  if (n >= 2) {
    const CurvatureReport curvature =
        CurvatureExhaustive(predicted, rows, noise_var, epsilon);
    report.c_max = curvature.c_max;
    report.c = curvature.c;
  }
  report.alpha = AlphaOf(report.c, epsilon);

  // Every round exhaustive: the scheduler is the deterministic greedy.
  report.deterministic = SampleSize(n, k, epsilon, n) >= n;
  report.factor =
      report.deterministic ? 1.0 - std::exp(-1.0 / report.c) : report.alpha;
  report.runs = report.deterministic ? 1 : runs;

  std::vector<double> objectives;
  std::vector<double> mses;
  objectives.reserve(static_cast<std::size_t>(report.runs));
  mses.reserve(static_cast<std::size_t>(report.runs));
  for (int run = 0; run < report.runs; ++run) {
    const SelectionResult result = RandomizedGreedy(
        predicted, rows, noise_var, k, epsilon,
        MixSeed(seed, static_cast<std::uint64_t>(run)));
    objectives.push_back(result.objective);
    mses.push_back(result.mse);
  }
  const Moments objective = MeanAndError(objectives);
  const Moments mse = MeanAndError(mses);
  report.mean_objective = objective.mean;
  report.objective_se = objective.standard_error;
  report.mean_mse = mse.mean;
  report.mse_se = mse.standard_error;

  report.objective_bound = report.factor * report.optimal_objective;
  report.mse_bound = report.factor * report.optimal_mse +
                     (1.0 - report.factor) * report.base_trace;
  const double objective_slack =
      report.deterministic ? 1e-12 : kMonteCarloSigmas * objective.standard_error;
  const double mse_slack =
      report.deterministic ? 1e-12 : kMonteCarloSigmas * mse.standard_error;
  report.objective_pass =
      report.mean_objective >= report.objective_bound - objective_slack;
  report.mse_pass = report.mean_mse <= report.mse_bound + mse_slack;
  return report;
}

SamplingHitReport CheckSamplingHit(int n, int k, double epsilon,
                                   std::span<const int> optimal,
                                   std::span<const int> selected,
                                   int resamples, std::uint64_t seed) {
  if (resamples < 1) throw ConfigError("need at least one resample");
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  for (int j : selected) chosen.at(static_cast<std::size_t>(j)) = 1;
  std::vector<char> target(static_cast<std::size_t>(n), 0);
  SamplingHitReport report;
  for (int j : optimal) {
    if (!chosen.at(static_cast<std::size_t>(j))) {
      target[static_cast<std::size_t>(j)] = 1;
      ++report.missing;
    }
  }
  std::vector<int> base_pool;
  for (int j = 0; j < n; ++j) {
    if (!chosen[static_cast<std::size_t>(j)]) base_pool.push_back(j);
  }
  const int remaining = static_cast<int>(base_pool.size());
  report.resamples = resamples;
  report.sample_size = SampleSize(n, k, epsilon, remaining);
  report.bound = (1.0 - epsilon) / k * report.missing;

  Engine engine(seed);
  std::vector<int> pool;
  int hits = 0;
  for (int draw = 0; draw < resamples; ++draw) {
    pool = base_pool;
    PartialShuffle(pool, static_cast<std::size_t>(report.sample_size), engine);
    const bool hit = std::any_of(
        pool.begin(), pool.begin() + report.sample_size,
        [&](int j) { return target[static_cast<std::size_t>(j)] != 0; });
    hits += hit ? 1 : 0;
  }
  report.frequency = static_cast<double>(hits) / resamples;
  report.standard_error =
      std::sqrt(report.frequency * (1.0 - report.frequency) / resamples);
  report.pass = report.frequency >=
                report.bound - kMonteCarloSigmas * report.standard_error;
  return report;
}

}  // namespace sensorsched
