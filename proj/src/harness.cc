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

#include "sensorsched/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>
#include <utility>

#include "sensorsched/errors.h"
#include "sensorsched/rng.h"

namespace sensorsched {
namespace {

// Runs body(0..count-1) on up to `threads` workers and rethrows the first
// exception.
template <typename Body>
void ParallelFor(int count, int threads, Body&& body) {
  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (std::thread& worker : pool) worker.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t Binomial(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n - k);
  long double value = 1.0L;
  for (std::uint64_t i = 1; i <= k; ++i) value = value * (n - k + i) / i;
  return value > 1.8e19L ? UINT64_MAX
                         : static_cast<std::uint64_t>(std::llround(value));
}

void ValidateDims(const ExperimentConfig& config, int m, int n, int k) {
  if (m < 1 || n < 1) throw ConfigError("m and n must be positive");
  for (Method method : config.methods) {
    SchedulerConfig scheduler{.k = k, .epsilon = config.epsilon,
                              .method = method,
                              .relaxation = config.relaxation};
    scheduler.Validate(n);
    if (method == Method::kOracle &&
        Binomial(static_cast<std::uint64_t>(n),
                 static_cast<std::uint64_t>(k)) > kDefaultBruteForceCap) {
      throw ConfigError("oracle: C(n, k) exceeds the exhaustive search cap");
    }
  }
}

struct Dimensions {
  double param;
  int m;
  int n;
  int k;
};

std::vector<ExperimentRow> RunTrial(const ExperimentConfig& config,
                                    const Dimensions& dims, int trial) {
  const std::uint64_t seed =
      config.seed ^ static_cast<std::uint64_t>(trial);
  const std::vector<MeasurementMatrix> matrices =
      GenerateHorizon(config.ensemble, dims.m, dims.n, config.horizon, seed);
  const SystemModel model =
      SystemModel::Identity(dims.m, dims.n, config.noise, config.noise,
                            Matrix::Identity(dims.m, dims.m));
  std::vector<ExperimentRow> rows;
  rows.reserve(config.methods.size() *
               static_cast<std::size_t>(config.horizon));
  for (Method method : config.methods) {
    SchedulerConfig scheduler{.k = dims.k,
                              .epsilon = config.epsilon,
                              .seed = seed,
                              .method = method,
                              .relaxation = config.relaxation};
    const Schedule schedule = ScheduleHorizon(model, matrices, scheduler);
    for (const ScheduleStep& step : schedule.steps) {
      rows.push_back(ExperimentRow{
          .method = method,
          .trial = trial,
          .t = step.t,
          .param = dims.param,
          .mse = step.mse,
          .objective = step.selection.objective,
          .elapsed_ns = config.timing ? step.selection.elapsed.count() : 0,
          .seed = seed});
    }
  }
  return rows;
}

void Summarize(const ExperimentConfig& config, const Dimensions& dims,
               const std::vector<ExperimentRow>& rows,
               ExperimentResult& result) {
  ParamSummary param{.param = dims.param, .m = dims.m, .n = dims.n,
                     .k = dims.k};
  std::map<Method, const MethodSummary*> by_method;
  const std::size_t first = result.methods.size();
  for (Method method : config.methods) {
    MethodSummary summary{.method = method, .param = dims.param};
    summary.mean_mse_by_t.assign(static_cast<std::size_t>(config.horizon),
                                 0.0);
    double elapsed = 0.0;
    int calls = 0;
    for (const ExperimentRow& row : rows) {
      if (row.method != method) continue;
      summary.mean_mse_by_t[static_cast<std::size_t>(row.t - 1)] += row.mse;
      elapsed += static_cast<double>(row.elapsed_ns);
      ++calls;
    }
    for (double& v : summary.mean_mse_by_t) v /= config.trials;
    summary.final_mse = summary.mean_mse_by_t.back();
    summary.mean_elapsed_ns = calls > 0 ? elapsed / calls : 0.0;
    result.methods.push_back(std::move(summary));
  }
  for (std::size_t i = first; i < result.methods.size(); ++i) {
    by_method[result.methods[i].method] = &result.methods[i];
  }
  const auto greedy = by_method.find(Method::kGreedy);
  const auto randomized = by_method.find(Method::kRandomizedGreedy);
  if (greedy != by_method.end() && randomized != by_method.end()) {
    param.delta_mse_percent =
        (randomized->second->final_mse - greedy->second->final_mse) /
        greedy->second->final_mse * 100.0;
    if (config.timing && randomized->second->mean_elapsed_ns > 0.0) {
      param.runtime_ratio = greedy->second->mean_elapsed_ns /
                            randomized->second->mean_elapsed_ns;
    }
  }
  result.params.push_back(param);
}

void RunAt(const ExperimentConfig& config, const Dimensions& dims,
           ExperimentResult& result) {
  std::vector<std::vector<ExperimentRow>> per_trial(
      static_cast<std::size_t>(config.trials));
  ParallelFor(config.trials, config.threads, [&](int trial) {
    per_trial[static_cast<std::size_t>(trial)] = RunTrial(config, dims, trial);
  });
  std::vector<ExperimentRow> rows;
  for (auto& trial_rows : per_trial) {
    rows.insert(rows.end(), trial_rows.begin(), trial_rows.end());
  }
  std::vector<int> method_rank(5, 0);
  for (std::size_t i = 0; i < config.methods.size(); ++i) {
    method_rank[static_cast<std::size_t>(config.methods[i])] =
        static_cast<int>(i);
  }
  std::sort(rows.begin(), rows.end(),
            [&](const ExperimentRow& a, const ExperimentRow& b) {
              const auto key = [&](const ExperimentRow& r) {
                return std::make_tuple(
                    method_rank[static_cast<std::size_t>(r.method)], r.trial,
                    r.t);
              };
              return key(a) < key(b);
            });
  Summarize(config, dims, rows, result);
  result.rows.insert(result.rows.end(), rows.begin(), rows.end());
}

// Number of adjacent pairs where the sequence increases.
int Increases(const std::vector<double>& values) {
  int count = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1]) ++count;
  }
  return count;
}

std::vector<double> Ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = 0.5 * (i + j);
    i = j + 1;
  }
  return ranks;
}

double Spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const std::vector<double> rx = Ranks(x);
  const std::vector<double> ry = Ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxx > 0.0 && syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

Matrix FirstPredicted(const ExperimentConfig& config) {
  return Matrix::Identity(config.m, config.m) *
         (1.0 + config.noise);
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (horizon < 1) throw ConfigError("T must be positive");
  if (trials < 1) throw ConfigError("trials must be positive");
  if (!(noise > 0.0) || !std::isfinite(noise)) {
    throw ConfigError("noise variance must be positive");
  }
  if (methods.empty()) throw ConfigError("no methods configured");
  if (threads < 0) throw ConfigError("threads must be nonnegative");
  ValidateDims(*this, m, n, k);
}

ExperimentResult RunCompare(const ExperimentConfig& config) {
  config.Validate();
  ExperimentResult result;
  RunAt(config, {static_cast<double>(config.k), config.m, config.n, config.k},
        result);
  return result;
}

ExperimentResult RunSweepK(const ExperimentConfig& config) {
  config.Validate();
  if (config.sweep.empty()) throw ConfigError("sweep-k needs k values");
  std::vector<Dimensions> grid;
  for (double value : config.sweep) {
    const int k = static_cast<int>(value);
    if (k != value) throw ConfigError("sweep-k values must be integers");
    ValidateDims(config, config.m, config.n, k);
    grid.push_back({value, config.m, config.n, k});
  }
  ExperimentResult result;
  for (const Dimensions& dims : grid) RunAt(config, dims, result);

  for (Method method : config.methods) {
    std::vector<double> finals;
    for (const MethodSummary& s : result.methods) {
      if (s.method == method) finals.push_back(s.final_mse);
    }
    if (Increases(finals) > 0) {
      result.warnings.push_back(std::string(MethodName(method)) +
                                ": mean MSE is not nonincreasing in k");
    }
  }
  std::vector<double> gaps;
  for (const ParamSummary& p : result.params) {
    if (p.delta_mse_percent) gaps.push_back(*p.delta_mse_percent);
  }
  if (Increases(gaps) > 1) {
    result.warnings.push_back(
        "randomized greedy / greedy MSE gap is not decreasing in k");
  }
  return result;
}

ExperimentResult RunScale(const ExperimentConfig& config) {
  if (config.sweep.empty()) throw ConfigError("scale needs beta values");
  std::vector<Dimensions> grid;
  for (double beta : config.sweep) {
    if (!(beta > 0.0)) throw ConfigError("scale factors must be positive");
    const auto scaled = [beta](int base) {
      return std::max(1, static_cast<int>(std::lround(base * beta)));
    };
    grid.push_back({beta, scaled(20), scaled(200), scaled(25)});
  }
  for (const Dimensions& dims : grid) {
    ExperimentConfig scaled = config;
    scaled.m = dims.m;
    scaled.n = dims.n;
    scaled.k = dims.k;
    scaled.Validate();
  }
  ExperimentResult result;
  for (const Dimensions& dims : grid) RunAt(config, dims, result);

  std::vector<double> betas;
  std::vector<double> deltas;
  std::vector<double> ratios;
  for (const ParamSummary& p : result.params) {
    if (p.delta_mse_percent) {
      betas.push_back(p.param);
      deltas.push_back(*p.delta_mse_percent);
    }
    if (p.runtime_ratio) ratios.push_back(*p.runtime_ratio);
  }
  if (deltas.size() > 1 && Spearman(betas, deltas) >= 0.0) {
    result.warnings.push_back("%dMSE does not decrease with beta");
  }
  if (ratios.size() > 1 && Increases(ratios) + 1 < static_cast<int>(ratios.size())) {
    result.warnings.push_back(
        "greedy / randomized greedy runtime ratio is not increasing in beta");
  }
  return result;
}

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, end);
}

void WriteExperimentCsv(const ExperimentResult& result, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ExperimentRow& row : result.rows) {
    out << MethodName(row.method) << ',' << row.trial << ',' << row.t << ','
        << FormatDouble(row.param) << ',' << FormatDouble(row.mse) << ','
        << FormatDouble(row.objective) << ',' << row.elapsed_ns << ','
        << row.seed << '\n';
  }
}

void WriteExperimentSummary(const ExperimentResult& result, std::ostream& out) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::left << std::setw(20) << "method" << std::setw(10) << "param"
      << std::setw(16) << "final_mse" << "mean_elapsed_ms\n";
  out << std::setprecision(6);
  for (const MethodSummary& s : result.methods) {
    out << std::setw(20) << MethodName(s.method) << std::setw(10) << s.param
        << std::setw(16) << s.final_mse << s.mean_elapsed_ns / 1e6 << '\n';
  }
  out.flags(flags);
  out.precision(precision);
  for (const ParamSummary& p : result.params) {
    out << "param=" << FormatDouble(p.param) << " (m=" << p.m << ", n=" << p.n
        << ", k=" << p.k << ")";
    if (p.delta_mse_percent) {
      out << " %dMSE=" << FormatDouble(*p.delta_mse_percent);
    }
    if (p.runtime_ratio) {
      out << " runtime_ratio=" << FormatDouble(*p.runtime_ratio);
    }
    out << '\n';
  }
  for (const std::string& warning : result.warnings) {
    out << "warning: " << warning << '\n';
  }
}

CurvatureStudy RunCurvatureStudy(const ExperimentConfig& config) {
  if (config.m < 1 || config.n < 2) {
    throw ConfigError("curvature needs m >= 1 and n >= 2");
  }
  if (config.k < 1 || config.k > config.n) {
    throw ConfigError("k must satisfy 1 <= k <= n");
  }
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
    throw ConfigError("epsilon must lie in (0, 1)");
  }
  if (!(config.noise > 0.0)) throw ConfigError("noise must be positive");
  const bool exhaustive = config.n <= kDefaultCurvatureCap;
  const Matrix predicted = FirstPredicted(config);
  const double sigma_a2 = 1.0 / config.m;
  const double norm_bound = 1.0;

  CurvatureStudy study;
  const EnsembleSpec spec{config.ensemble, config.m, config.n,
                          MixSeed(config.seed, 0)};
  const Matrix rows = GenerateRows(spec).rows;
  if (exhaustive) {
    study.report =
        CurvatureExhaustive(predicted, rows, config.noise, config.epsilon);
    study.lemma1 = Lemma1Check(predicted, rows, config.noise,
                               study.report.per_l, config.pairs,
                               MixSeed(config.seed, 1));
  } else {
    study.report = CurvatureSampled(predicted, rows, config.noise,
                                    config.epsilon, config.samples,
                                    MixSeed(config.seed, 2));
  }
  if (config.q > 0.0) {
    study.q = config.q;
  } else {
    try {
      study.q = QForProbability(config.target_probability, sigma_a2,
                                norm_bound, config.n, config.m);
    } catch (const InvalidInputError& e) {
      throw ConfigError(e.what());
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(predicted, Eigen::EigenvaluesOnly);
  study.report.thm2 = EvaluateThm2Bound(
      eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff(), config.noise,
      sigma_a2, norm_bound, config.n, config.m, study.q);
  const int s = SampleSize(config.n, config.k, config.epsilon, config.n);
  if (s < config.n) {
    study.report.sampling_exponent = SamplingExponent(config.n, s);
  }

  if (exhaustive) {
    std::vector<char> satisfied(static_cast<std::size_t>(config.trials), 0);
    const double bound = study.report.thm2->bound;
    ParallelFor(config.trials, config.threads, [&](int i) {
      const EnsembleSpec draw{config.ensemble, config.m, config.n,
                              MixSeed(config.seed, 100 + static_cast<std::uint64_t>(i))};
      const CurvatureReport r = CurvatureExhaustive(
          predicted, GenerateRows(draw).rows, config.noise, config.epsilon);
      satisfied[static_cast<std::size_t>(i)] = r.c_max <= bound ? 1 : 0;
    });
    study.instances = config.trials;
    study.satisfied = std::accumulate(satisfied.begin(), satisfied.end(), 0);
    study.satisfied_rate =
        static_cast<double>(study.satisfied) / study.instances;
    study.satisfied_se = std::sqrt(
        study.satisfied_rate * (1.0 - study.satisfied_rate) / study.instances);
    study.thm2_pass =
        study.satisfied_rate >= study.report.thm2->probability -
                                    kMonteCarloSigmas * study.satisfied_se;
  }
  return study;
}

void WriteCurvatureCsv(const CurvatureStudy& study, std::ostream& out) {
  const CurvatureReport& r = study.report;
  out << "quantity,index,value\n";
  const auto put = [&out](std::string_view name, int index, double value) {
    out << name << ',' << index << ',' << FormatDouble(value) << '\n';
  };
  for (std::size_t l = 0; l < r.per_l.size(); ++l) {
    put("C_l", static_cast<int>(l) + 1, r.per_l[l]);
  }
  put("c_max", 0, r.c_max);
  put("c", 0, r.c);
  put("epsilon", 0, r.epsilon);
  put("alpha", 0, r.alpha);
  put("lower_bound", 0, r.lower_bound ? 1.0 : 0.0);
  put("triples", 0, static_cast<double>(r.triples));
  put("excluded", 0, static_cast<double>(r.excluded));
  if (study.lemma1) {
    put("lemma1_checked", 0, study.lemma1->checked);
    put("lemma1_violations", 0, study.lemma1->violations);
    put("lemma1_worst_slack", 0, study.lemma1->worst_slack);
  }
  if (r.thm2) {
    put("thm2_q", 0, study.q);
    put("thm2_phi", 0, r.thm2->phi);
    put("thm2_bound", 0, r.thm2->bound);
    put("thm2_probability", 0, r.thm2->probability);
  }
  if (r.sampling_exponent) put("sampling_exponent", 0, *r.sampling_exponent);
  if (study.instances > 0) {
    put("thm2_instances", 0, study.instances);
    put("thm2_satisfied_rate", 0, study.satisfied_rate);
    put("thm2_satisfied_se", 0, study.satisfied_se);
    put("thm2_pass", 0, study.thm2_pass ? 1.0 : 0.0);
  }
}

std::vector<GuaranteeReport> RunGuaranteeStudy(const ExperimentConfig& config) {
  if (config.trials < 1 || config.runs < 1) {
    throw ConfigError("trials and runs must be positive");
  }
  if (config.n > kDefaultCurvatureCap) {
    throw ConfigError("guarantee study needs n <= 12 for exhaustive curvature");
  }
  SchedulerConfig scheduler{.k = config.k, .epsilon = config.epsilon};
  scheduler.Validate(config.n);
  if (config.m < 1 || !(config.noise > 0.0)) {
    throw ConfigError("m and noise must be positive");
  }
  const Matrix predicted = FirstPredicted(config);
  std::vector<GuaranteeReport> reports(static_cast<std::size_t>(config.trials));
  ParallelFor(config.trials, config.threads, [&](int i) {
    const std::uint64_t seed = config.seed ^ static_cast<std::uint64_t>(i);
    const Matrix rows =
        GenerateRows({config.ensemble, config.m, config.n, MixSeed(seed, 0)})
            .rows;
    reports[static_cast<std::size_t>(i)] =
        CheckGuarantee(predicted, rows, config.noise, config.k, config.epsilon,
                       config.runs, MixSeed(seed, 1));
  });
  return reports;
}

void WriteGuaranteeCsv(const std::vector<GuaranteeReport>& reports,
                       std::ostream& out) {
  out << "instance,n,k,epsilon,c_max,c,alpha,factor,deterministic,runs,"
         "optimal_objective,mean_objective,objective_se,objective_bound,"
         "objective_pass,optimal_mse,mean_mse,mse_se,mse_bound,mse_pass\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const GuaranteeReport& r = reports[i];
    out << i << ',' << r.n << ',' << r.k << ',' << FormatDouble(r.epsilon)
        << ',' << FormatDouble(r.c_max) << ',' << FormatDouble(r.c) << ','
        << FormatDouble(r.alpha) << ',' << FormatDouble(r.factor) << ','
        << (r.deterministic ? 1 : 0) << ',' << r.runs << ','
        << FormatDouble(r.optimal_objective) << ','
        << FormatDouble(r.mean_objective) << ','
        << FormatDouble(r.objective_se) << ','
        << FormatDouble(r.objective_bound) << ','
        << (r.objective_pass ? 1 : 0) << ',' << FormatDouble(r.optimal_mse)
        << ',' << FormatDouble(r.mean_mse) << ',' << FormatDouble(r.mse_se)
        << ',' << FormatDouble(r.mse_bound) << ',' << (r.mse_pass ? 1 : 0)
        << '\n';
  }
}

}  // namespace sensorsched
