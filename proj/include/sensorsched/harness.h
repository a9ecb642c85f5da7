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

#ifndef SENSORSCHED_HARNESS_H_
#define SENSORSCHED_HARNESS_H_

// Monte Carlo experiment drivers behind the command-line tool.
//
// Trial i uses seed `seed ^ i`; the measurement matrix of step t in that
// trial is generated from MixSeed(seed ^ i, t), so every method of a trial
// sees identical measurements. Trials may run on several threads; rows are
// sorted before they are returned so output does not depend on scheduling.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sensorsched/curvature.h"
#include "sensorsched/generators.h"
#include "sensorsched/guarantee.h"
#include "sensorsched/schedulers.h"

namespace sensorsched {

inline constexpr char kCsvHeader[] =
    "method,trial,t,param,mse,objective,elapsed_ns,seed";

struct ExperimentConfig {
  int m = 50;
  int n = 400;
  int k = 55;
  int horizon = 10;
  double epsilon = 0.001;
  int trials = 10;
  std::vector<Method> methods;
  Ensemble ensemble = Ensemble::kGaussian;
  // Q = noise I_m, R = noise I_n.
  double noise = 0.05;
  // k values for RunSweepK, scale factors for RunScale.
  std::vector<double> sweep;
  std::uint64_t seed = 1;
  // Wall-clock scheduler timing. Off by default: elapsed_ns is then
  // written as 0 and output is byte-for-byte reproducible.
  bool timing = false;
  // 0 selects std::thread::hardware_concurrency().
  int threads = 0;
  RelaxationOptions relaxation;

  // Curvature and guarantee studies.
  double q = 0.0;  // 0 selects the q reaching target_probability
  double target_probability = 0.9;
  std::int64_t samples = 100000;
  int pairs = 200;
  int runs = 2000;

  // Throws ConfigError on anything a scheduler would reject.
  void Validate() const;
};

struct ExperimentRow {
  Method method = Method::kGreedy;
  int trial = 0;
  int t = 0;
  double param = 0.0;
  double mse = 0.0;
  double objective = 0.0;
  std::int64_t elapsed_ns = 0;
  std::uint64_t seed = 0;
};

struct MethodSummary {
  Method method = Method::kGreedy;
  double param = 0.0;
  std::vector<double> mean_mse_by_t;
  double final_mse = 0.0;
  double mean_elapsed_ns = 0.0;
};

struct ParamSummary {
  double param = 0.0;
  int m = 0;
  int n = 0;
  int k = 0;
  // (MSE_RG - MSE_G) / MSE_G * 100 at the last step, trial-averaged.
  std::optional<double> delta_mse_percent;
  // Mean greedy time / mean randomized greedy time (timing runs only).
  std::optional<double> runtime_ratio;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<MethodSummary> methods;
  std::vector<ParamSummary> params;
  // Trend checks that did not hold (e.g. MSE increasing in k).
  std::vector<std::string> warnings;
};

// Every configured method over the horizon; param = k.
ExperimentResult RunCompare(const ExperimentConfig& config);
// RunCompare for each k in config.sweep; param = k.
ExperimentResult RunSweepK(const ExperimentConfig& config);
// RunCompare at (m, n, k) = beta (20, 200, 25) for each beta in
// config.sweep; param = beta.
ExperimentResult RunScale(const ExperimentConfig& config);

void WriteExperimentCsv(const ExperimentResult& result, std::ostream& out);
void WriteExperimentSummary(const ExperimentResult& result, std::ostream& out);

struct CurvatureStudy {
  CurvatureReport report;
  std::optional<Lemma1Report> lemma1;
  double q = 0.0;
  // Monte Carlo check of the probabilistic bound over config.trials fresh
  // instances (exhaustive mode only).
  int instances = 0;
  int satisfied = 0;
  double satisfied_rate = 0.0;
  double satisfied_se = 0.0;
  bool thm2_pass = false;
};

// One instance from (ensemble, m, n, seed) with P(1|0) = I + Q. Exhaustive
// curvature when n <= kDefaultCurvatureCap, sampled otherwise.
CurvatureStudy RunCurvatureStudy(const ExperimentConfig& config);
void WriteCurvatureCsv(const CurvatureStudy& study, std::ostream& out);

// CheckGuarantee on config.trials instances with config.runs runs each.
std::vector<GuaranteeReport> RunGuaranteeStudy(const ExperimentConfig& config);
void WriteGuaranteeCsv(const std::vector<GuaranteeReport>& reports,
                       std::ostream& out);

// Shortest round-trip decimal form.
std::string FormatDouble(double value);

}  // namespace sensorsched

#endif  // SENSORSCHED_HARNESS_H_
