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

#include "sensorsched/schedulers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "sensorsched/errors.h"
#include "sensorsched/fisher_state.h"
#include "sensorsched/relaxation.h"
#include "sensorsched/rng.h"

namespace sensorsched {
namespace {

using Clock = std::chrono::steady_clock;

void RequireProblemShape(const Matrix& predicted, const Matrix& rows, int k) {
  if (rows.cols() != predicted.rows()) {
    throw InvalidInputError("measurement rows: dimension does not match state");
  }
  RequireFinite(rows, "measurement rows");
  if (k < 1 || k > rows.rows()) {
    throw ConfigError("k must satisfy 1 <= k <= n (k=" + std::to_string(k) +
                      ", n=" + std::to_string(rows.rows()) + ")");
  }
}

// Shared body of greedy and randomized greedy. `sample` moves the
// candidates of the current round to the front of `pool` and returns how
// many there are.
template <typename Sampler>
SelectionResult GreedyRounds(const Matrix& predicted, const Matrix& rows,
                             double noise_var, int k, Sampler&& sample) {
  const auto start = Clock::now();
  RequireProblemShape(predicted, rows, k);
  const Matrix columns = rows.transpose();
  FisherState state = FisherState::Init(predicted, noise_var);
  std::vector<int> pool(static_cast<std::size_t>(rows.rows()));
  std::iota(pool.begin(), pool.end(), 0);

  SelectionResult result;
  result.gain_trace.reserve(static_cast<std::size_t>(k));
  for (int round = 0; round < k; ++round) {
    const std::size_t count = sample(std::span<int>(pool));
    std::size_t best_pos = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < count; ++p) {
      const int j = pool[p];
      const double gain = state.MarginalGain(columns.col(j));
      if (gain > best_gain || (gain == best_gain && j < pool[best_pos])) {
        best_gain = gain;
        best_pos = p;
      }
    }
    const int chosen = pool[best_pos];
    state.AddSensor(chosen, columns.col(chosen));
    result.gain_trace.push_back(best_gain);
    std::swap(pool[best_pos], pool.back());
    pool.pop_back();
  }
  result.selected = state.selected();
  result.objective = state.objective();
  result.mse = state.mse();
  result.elapsed = Clock::now() - start;
  return result;
}

// Adds `indices` to a fresh state and packages the result.
SelectionResult Evaluate(const Matrix& predicted, const Matrix& rows,
                         double noise_var, std::vector<int> indices) {
  FisherState state = FisherState::Init(predicted, noise_var);
  for (int index : indices) {
    state.AddSensor(index, rows.row(index).transpose());
  }
  SelectionResult result;
  result.selected = std::move(indices);
  result.objective = state.objective();
  result.mse = state.mse();
  return result;
}

std::uint64_t BinomialSaturating(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t value = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // value * (n - k + i) / i stays integral at every step.
    const std::uint64_t factor = n - k + i;
    if (value > kMax / factor) return kMax;
    value = value * factor / i;
  }
  return value;
}

class Enumerator {
 public:
  Enumerator(const Matrix& rows, int k) : columns_(rows.transpose()), k_(k) {}

  void Run(const FisherState& root) {
    prefix_.reserve(static_cast<std::size_t>(k_));
    Visit(root, 0);
  }

  const std::vector<int>& best() const { return best_; }

 private:
  void Visit(const FisherState& state, int start) {
    const int depth = static_cast<int>(prefix_.size());
    if (depth == k_) {
      // Lexicographic visiting order: only a clear improvement replaces
      // the incumbent, so near-ties resolve to the smaller set.
      const double value = state.objective();
      if (best_.empty() ||
          value > best_value_ + 1e-12 * std::max(1.0, std::abs(best_value_))) {
        best_value_ = value;
        best_ = prefix_;
      }
      return;
    }
    const int n = static_cast<int>(columns_.cols());
    for (int j = start; j <= n - (k_ - depth); ++j) {
      prefix_.push_back(j);
      Visit(state.WithSensor(j, columns_.col(j)), j + 1);
      prefix_.pop_back();
    }
  }

  Matrix columns_;
  int k_;
  std::vector<int> prefix_;
  std::vector<int> best_;
  double best_value_ = 0.0;
};

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kRandomizedGreedy:
      return "randomized_greedy";
    case Method::kGreedy:
      return "greedy";
    case Method::kRelaxation:
      return "relaxation";
    case Method::kOracle:
      return "oracle";
    case Method::kRandom:
      return "random";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (Method method : {Method::kRandomizedGreedy, Method::kGreedy,
                        Method::kRelaxation, Method::kOracle,
                        Method::kRandom}) {
    if (MethodName(method) == name) return method;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

UniformMatroid::UniformMatroid(int ground_size, int rank)
    : ground_size_(ground_size), rank_(rank) {
  if (ground_size_ < 0 || rank_ < 0 || rank_ > ground_size_) {
    throw ConfigError("uniform matroid: need 0 <= rank <= ground size");
  }
}

bool UniformMatroid::IsIndependent(std::span<const int> set) const {
  std::set<int> seen;
  for (int e : set) {
    if (e < 0 || e >= ground_size_ || !seen.insert(e).second) return false;
  }
  return static_cast<int>(seen.size()) <= rank_;
}

bool UniformMatroid::IsBasis(std::span<const int> set) const {
  return IsIndependent(set) && static_cast<int>(set.size()) == rank_;
}

void SchedulerConfig::Validate(int n) const {
  if (k < 1 || k > n) {
    throw ConfigError("k must satisfy 1 <= k <= n (k=" + std::to_string(k) +
                      ", n=" + std::to_string(n) + ")");
  }
  if (method == Method::kRandomizedGreedy) {
    const double lower = std::exp(-static_cast<double>(k));
    if (!(epsilon < 1.0) || !(epsilon >= lower * (1.0 - 1e-12))) {
      throw ConfigError("epsilon must satisfy e^-k <= epsilon < 1 (epsilon=" +
                        std::to_string(epsilon) + ", k=" + std::to_string(k) +
                        ")");
    }
  }
  if (method == Method::kRelaxation && relaxation.max_iters < 1) {
    throw ConfigError("relaxation max_iters must be positive");
  }
}

int SampleSize(int n, int k, double epsilon, int remaining) {
  const double raw = std::ceil(static_cast<double>(n) / k *
                               std::log(1.0 / epsilon));
  if (!(raw < static_cast<double>(remaining))) return remaining;
  return std::max(1, static_cast<int>(raw));
}

SelectionResult RandomizedGreedy(const Matrix& predicted, const Matrix& rows,
                                 double noise_var, int k, double epsilon,
                                 std::uint64_t seed) {
  SchedulerConfig config{.k = k, .epsilon = epsilon, .seed = seed};
  config.Validate(static_cast<int>(rows.rows()));
  const int n = static_cast<int>(rows.rows());
  Engine engine(seed);
  return GreedyRounds(predicted, rows, noise_var, k,
                      [&](std::span<int> pool) -> std::size_t {
                        const int remaining = static_cast<int>(pool.size());
                        const int s = SampleSize(n, k, epsilon, remaining);
                        if (s < remaining) {
                          PartialShuffle(pool, static_cast<std::size_t>(s),
                                         engine);
                        }
                        return static_cast<std::size_t>(s);
                      });
}

SelectionResult Greedy(const Matrix& predicted, const Matrix& rows,
                       double noise_var, int k) {
  return GreedyRounds(predicted, rows, noise_var, k,
                      [](std::span<int> pool) { return pool.size(); });
}

SelectionResult BruteForce(const Matrix& predicted, const Matrix& rows,
                           double noise_var, int k, std::uint64_t cap) {
  const auto start = Clock::now();
  RequireProblemShape(predicted, rows, k);
  const std::uint64_t count =
      BinomialSaturating(static_cast<std::uint64_t>(rows.rows()),
                         static_cast<std::uint64_t>(k));
  if (count > cap) {
    throw CapExceededError("exhaustive search over " + std::to_string(count) +
                           " subsets exceeds cap " + std::to_string(cap));
  }
  Enumerator enumerator(rows, k);
  enumerator.Run(FisherState::Init(predicted, noise_var));
  SelectionResult result =
      Evaluate(predicted, rows, noise_var, enumerator.best());
  result.elapsed = Clock::now() - start;
  return result;
}

SelectionResult RelaxationSchedule(const Matrix& predicted, const Matrix& rows,
                                   double noise_var, int k,
                                   const RelaxationOptions& options) {
  const auto start = Clock::now();
  RequireProblemShape(predicted, rows, k);
  RelaxationSolution solution =
      SolveRelaxation(predicted, rows, noise_var, k, options);

  std::vector<int> order(static_cast<std::size_t>(rows.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return solution.weights(a) > solution.weights(b);
  });
  order.resize(static_cast<std::size_t>(k));

  SelectionResult result = Evaluate(predicted, rows, noise_var, order);
  RelaxationInfo info;
  info.fractional_mse = solution.value;
  info.fractional_objective = predicted.trace() - solution.value;
  info.iterations = solution.iterations;
  info.converged = solution.converged;
  info.weights = std::move(solution.weights);
  result.relaxation = std::move(info);
  result.elapsed = Clock::now() - start;
  return result;
}

SelectionResult RandomBaseline(const Matrix& predicted, const Matrix& rows,
                               double noise_var, int k, std::uint64_t seed) {
  const auto start = Clock::now();
  RequireProblemShape(predicted, rows, k);
  std::vector<int> pool(static_cast<std::size_t>(rows.rows()));
  std::iota(pool.begin(), pool.end(), 0);
  Engine engine(seed);
  PartialShuffle(pool, static_cast<std::size_t>(k), engine);
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  SelectionResult result = Evaluate(predicted, rows, noise_var, pool);
  result.elapsed = Clock::now() - start;
  return result;
}

SelectionResult RunScheduler(const SchedulerConfig& config,
                             const Matrix& predicted, const Matrix& rows,
                             double noise_var) {
  config.Validate(static_cast<int>(rows.rows()));
  switch (config.method) {
    case Method::kRandomizedGreedy:
      return RandomizedGreedy(predicted, rows, noise_var, config.k,
                              config.epsilon, config.seed);
    case Method::kGreedy:
      return Greedy(predicted, rows, noise_var, config.k);
    case Method::kRelaxation:
      return RelaxationSchedule(predicted, rows, noise_var, config.k,
                                config.relaxation);
    case Method::kOracle:
      return BruteForce(predicted, rows, noise_var, config.k,
                        config.brute_force_cap);
    case Method::kRandom:
      return RandomBaseline(predicted, rows, noise_var, config.k, config.seed);
  }
  throw ConfigError("unknown method");
}

Schedule ScheduleHorizon(const SystemModel& model,
                         std::span<const MeasurementMatrix> matrices,
                         const SchedulerConfig& config) {
  config.Validate(model.n());
  Schedule schedule;
  schedule.steps.reserve(matrices.size());
  Matrix filtered = model.initial_cov();
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    const MeasurementMatrix& measurements = matrices[i];
    ValidateMeasurements(measurements, model.m(), model.n());

    ScheduleStep step;
    step.t = t;
    step.covariance.predicted = PredictCovariance(filtered, model, t);
    SchedulerConfig step_config = config;
    step_config.seed = MixSeed(config.seed, static_cast<std::uint64_t>(t));
    step.selection =
        RunScheduler(step_config, step.covariance.predicted,
                     measurements.rows, model.measurement_noise_var());
    step.covariance.filtered = FilterCovariance(
        step.covariance.predicted,
        SelectRows(measurements.rows, step.selection.selected),
        model.measurement_noise_var());
    step.mse = MseOf(step.covariance.filtered);
    filtered = step.covariance.filtered;
    schedule.steps.push_back(std::move(step));
  }
  return schedule;
}

}  // namespace sensorsched
