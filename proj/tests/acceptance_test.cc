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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sensorsched/curvature.h"
#include "sensorsched/fisher_state.h"
#include "sensorsched/generators.h"
#include "sensorsched/guarantee.h"
#include "sensorsched/harness.h"
#include "sensorsched/rng.h"
#include "sensorsched/schedulers.h"
#include "test_util.h"

namespace sensorsched {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

std::string Fmt(const char* format, double a, double b = 0.0,
                double c = 0.0, double d = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), format, a, b, c, d);
  return buffer;
}

Matrix Prior(int m) { return Matrix::Identity(m, m) * 1.05; }

Matrix Rows(Ensemble kind, int m, int n, std::uint64_t seed) {
  return GenerateRows({.kind = kind, .m = m, .n = n, .seed = seed}).rows;
}

Outcome FormulaEquivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  double worst_gain = 0.0;
  double worst_inverse = 0.0;
  for (int instance = 0; instance < 500; ++instance) {
    const int m = 1 + instance % 8;
    const int size = instance % 13;
    const double noise_var = 0.01 + 0.1 * (instance % 5);
    const Matrix predicted = testing::RandomSpd(m, rng);
    const Matrix rows = testing::RandomRows(size + 1, m, rng);
    FisherState state = FisherState::Init(predicted, noise_var);
    std::vector<int> set;
    for (int j = 0; j < size; ++j) {
      state.AddSensor(j, rows.row(j).transpose());
      set.push_back(j);
    }
    std::vector<int> grown = set;
    grown.push_back(size);
    const double direct =
        testing::DirectObjective(predicted, rows, grown, noise_var) -
        testing::DirectObjective(predicted, rows, set, noise_var);
    worst_gain = std::max(
        worst_gain,
        testing::RelativeError(state.MarginalGain(rows.row(size).transpose()),
                               direct));
    worst_inverse = std::max(
        worst_inverse,
        testing::RelativeError(
            state.inv_fisher(),
            testing::DirectInverseFisher(predicted, testing::Pick(rows, set),
                                         noise_var)));
  }
  const double seconds = Seconds(Clock::now() - start);
  return {worst_gain <= 1e-8 && worst_inverse <= 1e-8 && seconds < 10.0,
          Fmt("max rel err gain %.2e, inverse %.2e; %.2f s", worst_gain,
              worst_inverse, seconds)};
}

Outcome GreedyLimit() {
  const auto start = Clock::now();
  int mismatches = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const Matrix rows = Rows(Ensemble::kGaussian, 5, 20, MixSeed(202, instance));
    const SelectionResult greedy = Greedy(Prior(5), rows, 0.05, 5);
    const SelectionResult randomized = RandomizedGreedy(
        Prior(5), rows, 0.05, 5, std::exp(-5.0), MixSeed(203, instance));
    if (randomized.selected != greedy.selected) ++mismatches;
  }
  const double seconds = Seconds(Clock::now() - start);
  return {mismatches == 0 && seconds < 5.0,
          Fmt("%.0f of 100 instances differ; %.2f s", mismatches, seconds)};
}

Outcome Guarantee() {
  const auto start = Clock::now();
  int failures = 0;
  double worst_margin = 1e300;
  for (int instance = 0; instance < 20; ++instance) {
    const Matrix rows = Rows(Ensemble::kGaussian, 4, 10, MixSeed(303, instance));
    const GuaranteeReport report = CheckGuarantee(
        Prior(4), rows, 0.05, 3, 0.3, 2000, MixSeed(304, instance));
    if (!report.objective_pass || !report.mse_pass) ++failures;
    worst_margin = std::min(
        worst_margin, (report.mean_objective + 3.0 * report.objective_se) /
                          report.objective_bound);
  }
  const double seconds = Seconds(Clock::now() - start);
  return {failures == 0 && seconds < 120.0,
          Fmt("%.0f of 20 instances fail; min (mean + 3 SE) / bound = %.3f; "
              "%.1f s",
              failures, worst_margin, seconds)};
}

Outcome CurvatureSum() {
  int violations = 0;
  double worst = 1e300;
  for (int instance = 0; instance < 10; ++instance) {
    const Matrix rows = Rows(Ensemble::kGaussian, 4, 10, MixSeed(404, instance));
    const CurvatureReport curvature =
        CurvatureExhaustive(Prior(4), rows, 0.05, 0.01);
    const Lemma1Report report = Lemma1Check(Prior(4), rows, 0.05,
                                            curvature.per_l, 200,
                                            MixSeed(405, instance));
    violations += report.violations;
    worst = std::min(worst, report.worst_slack);
  }
  return {violations == 0,
          Fmt("%.0f violations over 2000 pairs; worst slack %.3e", violations,
              worst)};
}

Outcome SamplingHit() {
  struct Case {
    int n;
    int k;
    double epsilon;
    int rounds_done;
  };
  const std::vector<Case> cases = {
      {10, 3, 0.3, 1}, {12, 4, 0.1, 2}, {20, 5, 0.2, 0}, {16, 4, 0.5, 3},
      {14, 3, 0.05, 1}};
  int failures = 0;
  std::string detail;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const Case& cs = cases[c];
    const Matrix rows = Rows(Ensemble::kGaussian, 4, cs.n, MixSeed(505, c));
    const SelectionResult optimum = BruteForce(Prior(4), rows, 0.05, cs.k);
    SelectionResult partial = RandomizedGreedy(
        Prior(4), rows, 0.05, cs.k, cs.epsilon, MixSeed(506, c));
    partial.selected.resize(static_cast<std::size_t>(cs.rounds_done));
    const SamplingHitReport report =
        CheckSamplingHit(cs.n, cs.k, cs.epsilon, optimum.selected,
                         partial.selected, 10000, MixSeed(507, c));
    if (!report.pass) ++failures;
    detail += Fmt("%.3f>=%.3f ", report.frequency, report.bound);
  }
  return {failures == 0, detail + "(frequency >= bound)"};
}

Outcome CurvatureBound() {
  constexpr int kM = 4;
  constexpr int kN = 10;
  constexpr int kInstances = 1000;
  const double noise = 0.05;
  const double sigma_a2 = 1.0 / kM;
  const double q = QForProbability(0.9, sigma_a2, 1.0, kN, kM);
  const double lambda = 1.0 + noise;
  const Thm2Bound bound =
      EvaluateThm2Bound(lambda, lambda, noise, sigma_a2, 1.0, kN, kM, q);
  int satisfied = 0;
  for (int instance = 0; instance < kInstances; ++instance) {
    const Matrix rows =
        Rows(Ensemble::kBernoulli, kM, kN, MixSeed(606, instance));
    const CurvatureReport report =
        CurvatureExhaustive(Prior(kM), rows, noise, 0.01);
    if (report.c_max <= bound.bound) ++satisfied;
  }
  const double rate = static_cast<double>(satisfied) / kInstances;
  const double se = std::sqrt(rate * (1.0 - rate) / kInstances);
  return {bound.probability >= 0.9 - 1e-12 &&
              rate >= bound.probability - 3.0 * se,
          Fmt("q = %.3f, p = %.3f, bound = %.3g, satisfied rate = %.3f", q,
              bound.probability, bound.bound, rate)};
}

Outcome Headline() {
  ExperimentConfig config;
  config.methods = {Method::kGreedy, Method::kRandomizedGreedy,
                    Method::kRelaxation};
  config.timing = true;
  config.threads = 1;
  const ExperimentResult result = RunCompare(config);
  const double greedy = result.methods[0].final_mse;
  const double randomized = result.methods[1].final_mse;
  const double relaxed = result.methods[2].final_mse;
  const double greedy_time = result.methods[0].mean_elapsed_ns;
  const double randomized_time = result.methods[1].mean_elapsed_ns;
  const double ratio = greedy_time / randomized_time;
  const bool pass = greedy <= randomized && randomized <= relaxed &&
                    randomized <= 1.1 * greedy &&
                    randomized_time < greedy_time && ratio >= 1.3;
  return {pass,
          Fmt("MSE greedy %.4f, randomized %.4f, relaxation %.4f; time ratio "
              "%.2f",
              greedy, randomized, relaxed, ratio)};
}

double MedianSeconds(const std::function<void()>& work, int repeats) {
  std::vector<double> times;
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    work();
    times.push_back(Seconds(Clock::now() - start));
  }
  std::nth_element(times.begin(), times.begin() + repeats / 2, times.end());
  return times[static_cast<std::size_t>(repeats / 2)];
}

Outcome Scaling() {
  constexpr int kN = 400;
  constexpr int kK = 55;
  constexpr double kEpsilon = 0.001;
  const std::vector<int> dims = {32, 64, 128, 256};
  std::vector<double> log_m;
  std::vector<double> log_t;
  for (int m : dims) {
    const Matrix rows = Rows(Ensemble::kGaussian, m, kN, MixSeed(808, m));
    const Matrix predicted = Prior(m);
    const double t = MedianSeconds(
        [&] {
          RandomizedGreedy(predicted, rows, 0.05, kK, kEpsilon, 809);
        },
        7);
    log_m.push_back(std::log(m));
    log_t.push_back(std::log(t));
  }
  const double mean_x =
      std::accumulate(log_m.begin(), log_m.end(), 0.0) / log_m.size();
  const double mean_y =
      std::accumulate(log_t.begin(), log_t.end(), 0.0) / log_t.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < log_m.size(); ++i) {
    sxy += (log_m[i] - mean_x) * (log_t[i] - mean_y);
    sxx += (log_m[i] - mean_x) * (log_m[i] - mean_x);
  }
  const double slope = sxy / sxx;

  const Matrix rows = Rows(Ensemble::kGaussian, 50, kN, 810);
  std::vector<double> ratios;
  for (int k : {20, 55, 100}) {
    const double greedy =
        MedianSeconds([&] { Greedy(Prior(50), rows, 0.05, k); }, 9);
    const double randomized = MedianSeconds(
        [&] { RandomizedGreedy(Prior(50), rows, 0.05, k, kEpsilon, 811); }, 9);
    ratios.push_back(greedy / randomized);
  }
  const bool increasing = ratios[0] < ratios[1] && ratios[1] < ratios[2];
  return {slope >= 1.6 && slope <= 2.6 && increasing,
          Fmt("m-slope %.2f; greedy/randomized ratio at k=20,55,100: "
              "%.2f, %.2f, %.2f",
              slope, ratios[0], ratios[1], ratios[2])};
}

Outcome MonteCarloConsistency() {
  const int m = 4;
  const int n = 16;
  const int horizon = 3;
  const SystemModel model =
      SystemModel::Identity(m, n, 0.05, 0.05, Matrix::Identity(m, m));
  const auto matrices = GenerateHorizon(Ensemble::kGaussian, m, n, horizon, 909);
  const Schedule schedule = ScheduleHorizon(
      model, matrices,
      {.k = 4, .epsilon = 0.2, .seed = 910,
       .method = Method::kRandomizedGreedy});
  std::vector<std::vector<int>> selections;
  for (const ScheduleStep& step : schedule.steps) {
    selections.push_back(step.selection.selected);
  }
  std::vector<double> mean(horizon, 0.0);
  constexpr int kTrials = 5000;
  for (int trial = 0; trial < kTrials; ++trial) {
    const Trajectory path =
        SimulateTrajectory(model, matrices, selections, MixSeed(911, trial));
    for (int t = 0; t < horizon; ++t) {
      mean[static_cast<std::size_t>(t)] +=
          path.squared_errors[static_cast<std::size_t>(t)] / kTrials;
    }
  }
  double worst = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const double expected = schedule.steps[static_cast<std::size_t>(t)].mse;
    worst = std::max(worst,
                     std::abs(mean[static_cast<std::size_t>(t)] - expected) /
                         expected);
  }
  return {worst <= 0.05, Fmt("max relative deviation %.4f", worst)};
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome Determinism() {
  const std::vector<std::string> commands = {
      "compare --m 4 --n 20 --k 5 --T 3 --epsilon 0.1 --trials 3",
      "sweep-k --m 4 --n 20 --k 4 --T 2 --epsilon 0.1 --trials 2 --sweep 4,6",
      "scale --T 2 --epsilon 0.1 --trials 1 --sweep 0.2,0.4",
      "curvature --m 4 --n 8 --k 3 --epsilon 0.2 --trials 20",
      "guarantee --m 4 --n 8 --k 3 --epsilon 0.3 --trials 2 --runs 100",
  };
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "sensorsched_acceptance";
  std::filesystem::create_directories(dir);
  int mismatches = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const std::filesystem::path out =
          dir / ("cmd" + std::to_string(c) + "_" + std::to_string(run) +
                 ".csv");
      const std::string line = std::string(SENSORSCHED_CLI) + " " +
                               commands[c] + " --seed 5 --out " +
                               out.string() + " > /dev/null";
      if (std::system(line.c_str()) != 0) {
        outputs[run] = "<failed: " + commands[c] + ">" + std::to_string(run);
      } else {
        outputs[run] = ReadFile(out);
      }
    }
    if (outputs[0] != outputs[1] || outputs[0].empty()) ++mismatches;
  }
  std::filesystem::remove_all(dir);
  return {mismatches == 0,
          Fmt("%.0f of 5 commands differ between runs", mismatches)};
}

}  // namespace
}  // namespace sensorsched

int main() {
  using sensorsched::Outcome;
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"formula equivalence", sensorsched::FormulaEquivalence},
      {"greedy limit", sensorsched::GreedyLimit},
      {"approximation guarantee", sensorsched::Guarantee},
      {"curvature sum inequality", sensorsched::CurvatureSum},
      {"sampling hit bound", sensorsched::SamplingHit},
      {"probabilistic curvature bound", sensorsched::CurvatureBound},
      {"headline experiment", sensorsched::Headline},
      {"complexity scaling", sensorsched::Scaling},
      {"Monte Carlo MSE consistency", sensorsched::MonteCarloConsistency},
      {"determinism", sensorsched::Determinism},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& criterion : criteria) {
    ++index;
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::printf("[%s] %2d [PRIMARY] %s: %s\n", outcome.pass ? "PASS" : "FAIL",
                index, criterion.name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
