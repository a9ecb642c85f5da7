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

#include "sensorsched/generators.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sensorsched/errors.h"
#include "sensorsched/rng.h"

namespace sensorsched {
namespace {

void ValidateSpec(const EnsembleSpec& spec) {
  if (spec.m < 1 || spec.n < 1) {
    throw ConfigError("ensemble: m and n must be positive");
  }
}

Vector StandardNormal(Eigen::Index size, Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector out(size);
  for (Eigen::Index i = 0; i < size; ++i) out(i) = normal(engine);
  return out;
}

}  // namespace

std::string_view EnsembleName(Ensemble ensemble) {
  return ensemble == Ensemble::kGaussian ? "gaussian" : "bernoulli";
}

Ensemble ParseEnsemble(std::string_view name) {
  if (name == "gaussian") return Ensemble::kGaussian;
  if (name == "bernoulli") return Ensemble::kBernoulli;
  throw ConfigError("unknown ensemble '" + std::string(name) + "'");
}

MeasurementMatrix GaussianRows(const EnsembleSpec& spec, int time_index) {
  ValidateSpec(spec);
  Engine engine(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(spec.m));
  MeasurementMatrix out{Matrix(spec.n, spec.m), time_index};
  // Row-major fill so a row's entries are consecutive draws.
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.m; ++j) out.rows(i, j) = normal(engine);
  }
  return out;
}

MeasurementMatrix BernoulliRows(const EnsembleSpec& spec, int time_index) {
  ValidateSpec(spec);
  Engine engine(spec.seed);
  std::bernoulli_distribution coin(0.5);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.m));
  MeasurementMatrix out{Matrix(spec.n, spec.m), time_index};
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.m; ++j) {
      out.rows(i, j) = coin(engine) ? scale : -scale;
    }
  }
  return out;
}

MeasurementMatrix GenerateRows(const EnsembleSpec& spec, int time_index) {
  return spec.kind == Ensemble::kGaussian ? GaussianRows(spec, time_index)
                                          : BernoulliRows(spec, time_index);
}

std::vector<MeasurementMatrix> GenerateHorizon(Ensemble kind, int m, int n,
                                               int horizon,
                                               std::uint64_t seed) {
  std::vector<MeasurementMatrix> out;
  out.reserve(static_cast<std::size_t>(std::max(horizon, 0)));
  for (int t = 1; t <= horizon; ++t) {
    out.push_back(GenerateRows(
        {kind, m, n, MixSeed(seed, static_cast<std::uint64_t>(t))}, t));
  }
  return out;
}

Trajectory SimulateTrajectory(const SystemModel& model,
                              std::span<const MeasurementMatrix> matrices,
                              std::span<const std::vector<int>> selections,
                              std::uint64_t seed) {
  if (matrices.size() != selections.size()) {
    throw InvalidInputError(
        "trajectory: need one sensor selection per measurement matrix");
  }
  const double process_sd = std::sqrt(model.process_noise_var());
  const double measurement_sd = std::sqrt(model.measurement_noise_var());
  Engine engine(seed);

  Eigen::LLT<Matrix> prior(model.initial_cov());
  Vector state = prior.matrixL() * StandardNormal(model.m(), engine);
  Vector estimate = Vector::Zero(model.m());
  Matrix filtered = model.initial_cov();

  Trajectory out;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const int t = static_cast<int>(i) + 1;
    ValidateMeasurements(matrices[i], model.m(), model.n());
    const Matrix h = model.transition(t);
    state = h * state + process_sd * StandardNormal(model.m(), engine);
    const Vector predicted_estimate = h * estimate;
    const Matrix predicted = PredictCovariance(filtered, model, t);

    const Matrix selected = SelectRows(matrices[i].rows, selections[i]);
    const Vector measurement =
        selected * state +
        measurement_sd * StandardNormal(selected.rows(), engine);
    filtered = FilterCovariance(predicted, selected,
                                model.measurement_noise_var());
    estimate = predicted_estimate +
               filtered * selected.transpose() *
                   (measurement - selected * predicted_estimate) /
                   model.measurement_noise_var();

    out.squared_errors.push_back((state - estimate).squaredNorm());
    out.filtered_traces.push_back(filtered.trace());
    out.states.push_back(state);
    out.estimates.push_back(estimate);
  }
  return out;
}

}  // namespace sensorsched
