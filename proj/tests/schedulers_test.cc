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
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "sensorsched/curvature.h"
#include "sensorsched/errors.h"
#include "sensorsched/fisher_state.h"
#include "sensorsched/rng.h"
#include "test_util.h"

namespace sensorsched {
namespace {

using testing::DirectObjective;
using testing::RandomRows;
using testing::RandomSpd;

// Straight-line randomized greedy: same sampling stream and pool handling,
// gains from explicit inverses.
std::vector<int> NaiveRandomizedGreedy(const Matrix& predicted,
                                       const Matrix& rows, double noise_var,
                                       int k, double epsilon,
                                       std::uint64_t seed) {
  const int n = static_cast<int>(rows.rows());
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  Engine engine(seed);
  std::vector<int> chosen;
  for (int round = 0; round < k; ++round) {
    const int remaining = static_cast<int>(pool.size());
    int s = static_cast<int>(
        std::ceil(static_cast<double>(n) / k * std::log(1.0 / epsilon)));
    if (s >= remaining) {
      s = remaining;
    } else {
      for (int i = 0; i < s; ++i) {
        std::uniform_int_distribution<std::size_t> dist(
            0, static_cast<std::size_t>(remaining - i - 1));
        std::swap(pool[static_cast<std::size_t>(i)],
                  pool[static_cast<std::size_t>(i) + dist(engine)]);
      }
    }
    const double base = DirectObjective(predicted, rows, chosen, noise_var);
    int best_pos = 0;
    double best_gain = -1.0;
    for (int p = 0; p < s; ++p) {
      std::vector<int> trial = chosen;
      trial.push_back(pool[static_cast<std::size_t>(p)]);
      const double gain =
          DirectObjective(predicted, rows, trial, noise_var) - base;
      if (gain > best_gain) {
        best_gain = gain;
        best_pos = p;
      }
    }
    chosen.push_back(pool[static_cast<std::size_t>(best_pos)]);
    std::swap(pool[static_cast<std::size_t>(best_pos)], pool.back());
    pool.pop_back();
  }
  return chosen;
}

std::vector<int> Sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(SampleSizeTest, Formula) {
  EXPECT_EQ(SampleSize(400, 55, 0.001, 400), 51);
  EXPECT_EQ(SampleSize(10, 5, 0.5, 10), 2);
  // Saturates at the pool size.
  EXPECT_EQ(SampleSize(10, 2, 0.001, 9), 9);
  EXPECT_EQ(SampleSize(20, 5, std::exp(-5.0), 20), 20);
  EXPECT_EQ(SampleSize(20, 5, std::exp(-5.0), 16), 16);
}

TEST(ConfigTest, Validation) {
  SchedulerConfig config{.k = 3, .epsilon = 0.1};
  EXPECT_NO_THROW(config.Validate(10));
  config.k = 0;
  EXPECT_THROW(config.Validate(10), ConfigError);
  config.k = 11;
  EXPECT_THROW(config.Validate(10), ConfigError);
  config.k = 5;
  config.epsilon = 0.001;  // below e^-5
  EXPECT_THROW(config.Validate(10), ConfigError);
  config.epsilon = 1.0;
  EXPECT_THROW(config.Validate(10), ConfigError);
  config.epsilon = std::exp(-5.0);
  EXPECT_NO_THROW(config.Validate(10));
  config.method = Method::kGreedy;
  config.epsilon = 0.001;
  EXPECT_NO_THROW(config.Validate(10));
}

TEST(MethodTest, NamesRoundTrip) {
  for (Method method : {Method::kRandomizedGreedy, Method::kGreedy,
                        Method::kRelaxation, Method::kOracle,
                        Method::kRandom}) {
    EXPECT_EQ(ParseMethod(MethodName(method)), method);
  }
  EXPECT_THROW(ParseMethod("annealing"), ConfigError);
}

TEST(UniformMatroidTest, IndependenceAndBases) {
  const UniformMatroid matroid(5, 2);
  const std::vector<int> empty;
  const std::vector<int> one = {3};
  const std::vector<int> two = {0, 4};
  const std::vector<int> three = {0, 1, 2};
  const std::vector<int> dup = {1, 1};
  const std::vector<int> outside = {5};
  EXPECT_TRUE(matroid.IsIndependent(empty));
  EXPECT_TRUE(matroid.IsIndependent(one));
  EXPECT_TRUE(matroid.IsBasis(two));
  EXPECT_FALSE(matroid.IsBasis(one));
  EXPECT_FALSE(matroid.IsIndependent(three));
  EXPECT_FALSE(matroid.IsIndependent(dup));
  EXPECT_FALSE(matroid.IsIndependent(outside));
  EXPECT_THROW(UniformMatroid(2, 3), ConfigError);
}

TEST(RandomizedGreedyTest, MatchesStraightLineImplementation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix predicted = RandomSpd(3, rng);
    const Matrix rows = RandomRows(8, 3, rng);
    const double epsilon = trial % 2 == 0 ? 0.3 : 0.6;
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(trial);
    const SelectionResult result =
        RandomizedGreedy(predicted, rows, 0.05, 3, epsilon, seed);
    EXPECT_EQ(result.selected,
              NaiveRandomizedGreedy(predicted, rows, 0.05, 3, epsilon, seed))
        << "trial " << trial;
    EXPECT_NEAR(result.objective,
                DirectObjective(predicted, rows, result.selected, 0.05),
                1e-9);
  }
}

TEST(RandomizedGreedyTest, SmallestEpsilonReproducesGreedy) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix predicted = RandomSpd(5, rng);
    const Matrix rows = RandomRows(20, 5, rng, 1.0 / std::sqrt(5.0));
    const SelectionResult greedy = Greedy(predicted, rows, 0.05, 5);
    const SelectionResult randomized = RandomizedGreedy(
        predicted, rows, 0.05, 5, std::exp(-5.0), rng());
    EXPECT_EQ(randomized.selected, greedy.selected);
    EXPECT_EQ(randomized.objective, greedy.objective);
  }
}

TEST(RandomizedGreedyTest, SelectsEverySensorWhenKEqualsN) {
  std::mt19937_64 rng(6);
  const Matrix predicted = RandomSpd(3, rng);
  const Matrix rows = RandomRows(6, 3, rng);
  const SelectionResult result =
      RandomizedGreedy(predicted, rows, 0.05, 6, 0.5, 11);
  EXPECT_EQ(Sorted(result.selected), (std::vector<int>{0, 1, 2, 3, 4, 5}));
  EXPECT_NEAR(result.objective,
              DirectObjective(predicted, rows, {0, 1, 2, 3, 4, 5}, 0.05),
              1e-9);
}

TEST(RandomizedGreedyTest, DeterministicAndValidBasis) {
  std::mt19937_64 rng(8);
  const Matrix predicted = RandomSpd(4, rng);
  const Matrix rows = RandomRows(30, 4, rng);
  const SelectionResult a = RandomizedGreedy(predicted, rows, 0.05, 6, 0.1, 9);
  const SelectionResult b = RandomizedGreedy(predicted, rows, 0.05, 6, 0.1, 9);
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_TRUE(UniformMatroid(30, 6).IsBasis(a.selected));
  ASSERT_EQ(a.gain_trace.size(), 6u);
  EXPECT_NEAR(std::accumulate(a.gain_trace.begin(), a.gain_trace.end(), 0.0),
              a.objective, 1e-9);
}

TEST(GreedyTest, PicksDominantRowFirst) {
  Matrix rows = Matrix::Zero(4, 2);
  rows << 0.1, 0.0, 0.0, 0.2, 3.0, 3.0, 0.3, 0.1;
  const SelectionResult result =
      Greedy(Matrix::Identity(2, 2), rows, 0.05, 2);
  EXPECT_EQ(result.selected.front(), 2);
}

TEST(GreedyTest, KEqualsNTakesEverything) {
  std::mt19937_64 rng(10);
  const Matrix predicted = RandomSpd(3, rng);
  const Matrix rows = RandomRows(5, 3, rng);
  const SelectionResult result = Greedy(predicted, rows, 0.1, 5);
  EXPECT_EQ(Sorted(result.selected), (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(GreedyTest, MeetsCurvatureBoundAgainstOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix predicted = RandomSpd(3, rng);
    const Matrix rows = RandomRows(8, 3, rng, 1.0 / std::sqrt(3.0));
    const SelectionResult oracle = BruteForce(predicted, rows, 0.05, 3);
    const SelectionResult greedy = Greedy(predicted, rows, 0.05, 3);
    const CurvatureReport report =
        CurvatureExhaustive(predicted, rows, 0.05, 0.001);
    EXPECT_GE(greedy.objective,
              (1.0 - std::exp(-1.0 / report.c)) * oracle.objective - 1e-12);
    EXPECT_LE(greedy.objective, oracle.objective + 1e-12);
  }
}

TEST(BruteForceTest, MatchesExplicitEnumeration) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 4;
    const Matrix predicted = RandomSpd(3, rng);
    const Matrix rows = RandomRows(7, 3, rng);
    double best = -1.0;
    for (const auto& set : testing::Combinations(7, k)) {
      best = std::max(best, DirectObjective(predicted, rows, set, 0.05));
    }
    const SelectionResult oracle = BruteForce(predicted, rows, 0.05, k);
    EXPECT_NEAR(oracle.objective, best, 1e-9);
    EXPECT_TRUE(std::is_sorted(oracle.selected.begin(),
                               oracle.selected.end()));
  }
}

TEST(BruteForceTest, SingleSensorIsLargestGain) {
  std::mt19937_64 rng(15);
  const Matrix predicted = RandomSpd(4, rng);
  const Matrix rows = RandomRows(9, 4, rng);
  const FisherState state = FisherState::Init(predicted, 0.05);
  int best = 0;
  for (int j = 1; j < 9; ++j) {
    if (state.MarginalGain(rows.row(j).transpose()) >
        state.MarginalGain(rows.row(best).transpose())) {
      best = j;
    }
  }
  EXPECT_EQ(BruteForce(predicted, rows, 0.05, 1).selected,
            std::vector<int>{best});
}

TEST(BruteForceTest, TieGoesToLexicographicallyFirstSet) {
  const Matrix rows = Matrix::Identity(3, 3);
  EXPECT_EQ(BruteForce(Matrix::Identity(3, 3), rows, 0.05, 2).selected,
            (std::vector<int>{0, 1}));
}

TEST(BruteForceTest, CapIsEnforced) {
  std::mt19937_64 rng(16);
  const Matrix predicted = RandomSpd(2, rng);
  const Matrix rows = RandomRows(30, 2, rng);
  EXPECT_THROW(BruteForce(predicted, rows, 0.05, 10, 1000), CapExceededError);
  EXPECT_NO_THROW(BruteForce(predicted, rows, 0.05, 2, 435));
}

TEST(BaselineOrderingTest, OracleGreedyRandomizedRandom) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix predicted = RandomSpd(4, rng);
    const Matrix rows = RandomRows(12, 4, rng, 0.5);
    const double oracle = BruteForce(predicted, rows, 0.05, 3).objective;
    const double greedy = Greedy(predicted, rows, 0.05, 3).objective;
    double randomized = 0.0;
    double random = 0.0;
    constexpr int kRuns = 200;
    for (int run = 0; run < kRuns; ++run) {
      randomized +=
          RandomizedGreedy(predicted, rows, 0.05, 3, 0.3, MixSeed(trial, run))
              .objective;
      random += RandomBaseline(predicted, rows, 0.05, 3, MixSeed(trial, run))
                    .objective;
    }
    randomized /= kRuns;
    random /= kRuns;
    EXPECT_GE(oracle, greedy - 1e-12);
    EXPECT_GE(greedy, randomized - 1e-12);
    EXPECT_GE(randomized, random);
  }
}

TEST(RandomBaselineTest, DeterministicSortedBasis) {
  std::mt19937_64 rng(18);
  const Matrix predicted = RandomSpd(3, rng);
  const Matrix rows = RandomRows(20, 3, rng);
  const SelectionResult a = RandomBaseline(predicted, rows, 0.05, 5, 4);
  EXPECT_EQ(a.selected, RandomBaseline(predicted, rows, 0.05, 5, 4).selected);
  EXPECT_TRUE(std::is_sorted(a.selected.begin(), a.selected.end()));
  EXPECT_TRUE(UniformMatroid(20, 5).IsBasis(a.selected));
}

TEST(RunSchedulerTest, DispatchesOnMethod) {
  std::mt19937_64 rng(19);
  const Matrix predicted = RandomSpd(3, rng);
  const Matrix rows = RandomRows(8, 3, rng);
  SchedulerConfig config{.k = 3, .epsilon = 0.3, .seed = 5};
  EXPECT_EQ(RunScheduler(config, predicted, rows, 0.05).selected,
            RandomizedGreedy(predicted, rows, 0.05, 3, 0.3, 5).selected);
  config.method = Method::kGreedy;
  EXPECT_EQ(RunScheduler(config, predicted, rows, 0.05).selected,
            Greedy(predicted, rows, 0.05, 3).selected);
  config.method = Method::kOracle;
  EXPECT_EQ(RunScheduler(config, predicted, rows, 0.05).selected,
            BruteForce(predicted, rows, 0.05, 3).selected);
  config.method = Method::kRelaxation;
  EXPECT_TRUE(RunScheduler(config, predicted, rows, 0.05).relaxation);
  config.k = 9;
  EXPECT_THROW(RunScheduler(config, predicted, rows, 0.05), ConfigError);
}

TEST(ScheduleHorizonTest, ChainsPredictionAndFiltering) {
  std::mt19937_64 rng(20);
  const int m = 3;
  const int n = 10;
  const SystemModel model = SystemModel::Identity(m, n, 0.1, 0.05,
                                                  Matrix::Identity(m, m));
  std::vector<MeasurementMatrix> matrices;
  for (int t = 1; t <= 4; ++t) {
    matrices.push_back({RandomRows(n, m, rng), t});
  }
  const SchedulerConfig config{.k = 2, .method = Method::kGreedy};
  const Schedule schedule = ScheduleHorizon(model, matrices, config);
  ASSERT_EQ(schedule.steps.size(), 4u);
  // Recompute the chain by hand.
  Matrix filtered = Matrix::Identity(m, m);
  for (int i = 0; i < 4; ++i) {
    const ScheduleStep& step = schedule.steps[static_cast<std::size_t>(i)];
    EXPECT_EQ(step.t, i + 1);
    const Matrix predicted = filtered + 0.1 * Matrix::Identity(m, m);
    EXPECT_LE(testing::RelativeError(step.covariance.predicted, predicted),
              1e-12);
    const Matrix& rows = matrices[static_cast<std::size_t>(i)].rows;
    EXPECT_EQ(step.selection.selected,
              Greedy(predicted, rows, 0.05, 2).selected);
    filtered = testing::DirectInverseFisher(
        predicted, testing::Pick(rows, step.selection.selected), 0.05);
    EXPECT_LE(testing::RelativeError(step.covariance.filtered, filtered),
              1e-9);
    EXPECT_NEAR(step.mse, filtered.trace(), 1e-9);
  }
}

}  // namespace
}  // namespace sensorsched
