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

#include "sensorsched/curvature.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "sensorsched/errors.h"
#include "sensorsched/fisher_state.h"
#include "sensorsched/rng.h"

namespace sensorsched {
namespace {

// Direct-factorization objective over sorted index lists, memoized.
class ReferenceObjective {
 public:
  ReferenceObjective(const Matrix& predicted, const Matrix& rows,
                     double noise_var)
      : predicted_(predicted), rows_(rows), noise_var_(noise_var) {}

  double operator()(const std::vector<int>& sorted_set) {
    auto it = memo_.find(sorted_set);
    if (it != memo_.end()) return it->second;
    const double value =
        ObjectiveOfSet(predicted_, SelectRows(rows_, sorted_set), noise_var_);
    memo_.emplace(sorted_set, value);
    return value;
  }

  double Gain(const std::vector<int>& sorted_set, int element) {
    std::vector<int> grown = sorted_set;
    grown.insert(std::upper_bound(grown.begin(), grown.end(), element),
                 element);
    return (*this)(grown) - (*this)(sorted_set);
  }

 private:
  const Matrix& predicted_;
  const Matrix& rows_;
  double noise_var_;
  std::map<std::vector<int>, double> memo_;
};

std::vector<int> MaskToIndices(std::uint32_t mask) {
  std::vector<int> indices;
  while (mask != 0) {
    indices.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return indices;
}

void Finish(CurvatureReport& report, double epsilon) {
  report.c_max = report.per_l.empty()
                     ? 0.0
                     : *std::max_element(report.per_l.begin(),
                                         report.per_l.end());
  report.c = std::max(1.0, report.c_max);
  report.epsilon = epsilon;
  report.alpha = AlphaOf(report.c, epsilon);
}

void RequireShape(const Matrix& predicted, const Matrix& rows) {
  if (rows.cols() != predicted.rows()) {
    throw InvalidInputError("measurement rows: dimension does not match state");
  }
  RequireFinite(rows, "measurement rows");
  if (rows.rows() < 2) {
    throw InvalidInputError("curvature needs at least two sensors");
  }
}

// Random (S, T \ S) split of the elements other than `skip` (or all
// elements for skip < 0) with T \ S nonempty. Each element lands outside
// T, in S, or in T \ S with probability 1/3 each.
void RandomNestedPair(int n, int skip, Engine& engine, std::vector<int>& s,
                      std::vector<int>& t_minus_s) {
  do {
    s.clear();
    t_minus_s.clear();
    for (int j = 0; j < n; ++j) {
      if (j == skip) continue;
      switch (UniformIndex(engine, 3)) {
        case 1:
          s.push_back(j);
          break;
        case 2:
          t_minus_s.push_back(j);
          break;
        default:
          break;
      }
    }
  } while (t_minus_s.empty());
}

std::vector<int> SortedUnion(const std::vector<int>& a,
                             const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

double AlphaOf(double c, double epsilon) {
  return 1.0 - std::exp(-1.0 / c) - epsilon / c;
}

double CurvatureSumFactor(const std::vector<double>& per_l, int r) {
  if (r < 1 || r - 1 > static_cast<int>(per_l.size())) {
    throw InvalidInputError("curvature sum factor: r out of range");
  }
  double sum = 1.0;
  for (int l = 1; l < r; ++l) sum += per_l[static_cast<std::size_t>(l - 1)];
  return sum / r;
}

CurvatureReport CurvatureExhaustive(const Matrix& predicted, const Matrix& rows,
                                    double noise_var, double epsilon,
                                    int size_cap) {
  RequireShape(predicted, rows);
  const int n = static_cast<int>(rows.rows());
  if (n > std::min(size_cap, 20)) {
    throw CapExceededError("exhaustive curvature: n=" + std::to_string(n) +
                           " exceeds cap " + std::to_string(size_cap));
  }
  const std::uint32_t subsets = 1u << n;
  std::vector<double> f(subsets);
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    f[mask] = ObjectiveOfSet(predicted, SelectRows(rows, MaskToIndices(mask)),
                             noise_var);
  }

  CurvatureReport report;
  report.per_l.assign(static_cast<std::size_t>(n - 1), 0.0);
  const std::uint32_t full = subsets - 1;
  for (std::uint32_t t = 0; t < subsets; ++t) {
    const int t_size = std::popcount(t);
    if (t_size == 0 || t_size == n) continue;
    const std::uint32_t outside = full & ~t;
    // Proper submasks of t, including the empty set.
    for (std::uint32_t s = (t - 1) & t;; s = (s - 1) & t) {
      const int l = t_size - std::popcount(s);
      double& slot = report.per_l[static_cast<std::size_t>(l - 1)];
      for (std::uint32_t rest = outside; rest != 0; rest &= rest - 1) {
        const std::uint32_t bit = rest & (~rest + 1);
        ++report.triples;
        const double gain_s = f[s | bit] - f[s];
        if (gain_s < kMinCurvatureGain) {
          ++report.excluded;
          continue;
        }
        slot = std::max(slot, (f[t | bit] - f[t]) / gain_s);
      }
      if (s == 0) break;
    }
  }
  Finish(report, epsilon);
  return report;
}

CurvatureReport CurvatureSampled(const Matrix& predicted, const Matrix& rows,
                                 double noise_var, double epsilon,
                                 std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) {
    throw InvalidInputError("sampled curvature needs at least one sample");
  }
  RequireShape(predicted, rows);
  const int n = static_cast<int>(rows.rows());
  ReferenceObjective f(predicted, rows, noise_var);
  Engine engine(seed);

  CurvatureReport report;
  report.lower_bound = true;
  report.per_l.assign(static_cast<std::size_t>(n - 1), 0.0);
  std::vector<int> s;
  std::vector<int> t_minus_s;
  for (std::int64_t draw = 0; draw < samples; ++draw) {
    const int i = static_cast<int>(UniformIndex(engine, n));
    RandomNestedPair(n, i, engine, s, t_minus_s);
    ++report.triples;
    const double gain_s = f.Gain(s, i);
    if (gain_s < kMinCurvatureGain) {
      ++report.excluded;
      continue;
    }
    const double ratio = f.Gain(SortedUnion(s, t_minus_s), i) / gain_s;
    double& slot = report.per_l[t_minus_s.size() - 1];
    slot = std::max(slot, ratio);
  }
  Finish(report, epsilon);
  return report;
}

Lemma1Report Lemma1Check(const Matrix& predicted, const Matrix& rows,
                         double noise_var, const std::vector<double>& per_l,
                         int trials, std::uint64_t seed) {
  RequireShape(predicted, rows);
  const int n = static_cast<int>(rows.rows());
  if (static_cast<int>(per_l.size()) < n - 1) {
    throw InvalidInputError("lemma check: need C_l for l = 1..n-1");
  }
  ReferenceObjective f(predicted, rows, noise_var);
  Engine engine(seed);
  Lemma1Report report;
  report.worst_slack = std::numeric_limits<double>::infinity();
  std::vector<int> s;
  std::vector<int> t_minus_s;
  for (int trial = 0; trial < trials; ++trial) {
    RandomNestedPair(n, -1, engine, s, t_minus_s);
    const int r = static_cast<int>(t_minus_s.size());
    double gain_sum = 0.0;
    for (int j : t_minus_s) gain_sum += f.Gain(s, j);
    const double increase = f(SortedUnion(s, t_minus_s)) - f(s);
    const double slack = CurvatureSumFactor(per_l, r) * gain_sum - increase;
    ++report.checked;
    if (slack < -kLemma1Tolerance) ++report.violations;
    report.worst_slack = std::min(report.worst_slack, slack);
  }
  if (report.checked == 0) report.worst_slack = 0.0;
  return report;
}

Thm2Bound EvaluateThm2Bound(double lambda_min, double lambda_max,
                            double noise_var, double sigma_a2,
                            double norm_bound, int n, int m, double q) {
  if (!(sigma_a2 > 0.0) || !(norm_bound > sigma_a2)) {
    throw InvalidInputError(
        "curvature bound: need norm bound C > sigma_a^2 > 0");
  }
  if (!(q > 0.0) || !(noise_var > 0.0) || !(lambda_min > 0.0) ||
      lambda_max < lambda_min || n < 1 || m < 1) {
    throw InvalidInputError("curvature bound: invalid parameter");
  }
  const double c = norm_bound;
  Thm2Bound out;
  out.phi = 1.0 / (1.0 / lambda_min + (n * sigma_a2 + q) / noise_var);
  out.bound = lambda_max * lambda_max * (noise_var + lambda_max * c) /
              (out.phi * out.phi * (noise_var + out.phi * c));
  const double exponent =
      -(q * q / 2.0) / ((c - sigma_a2) * (n * sigma_a2 + q / 3.0));
  out.probability = 1.0 - m * std::exp(exponent);
  return out;
}

double QForProbability(double probability, double sigma_a2, double norm_bound,
                       int n, int m) {
  if (!(probability < 1.0) || !(probability > 1.0 - m)) {
    throw InvalidInputError("target probability must lie in (1 - m, 1)");
  }
  if (!(sigma_a2 > 0.0) || !(norm_bound > sigma_a2)) {
    throw InvalidInputError(
        "curvature bound: need norm bound C > sigma_a^2 > 0");
  }
  // Solve q^2/2 = L D (n sigma_a2 + q/3) for the positive root.
  const double log_ratio = std::log(m / (1.0 - probability));
  const double ld = log_ratio * (norm_bound - sigma_a2);
  const double b = 2.0 * ld / 3.0;
  return 0.5 * (b + std::sqrt(b * b + 8.0 * ld * n * sigma_a2));
}

double SamplingExponent(int n, int s) {
  if (s <= 0 || s >= n) {
    throw InvalidInputError("sampling exponent needs 0 < s < n");
  }
  return 1.0 + s / (2.0 * n) - 1.0 / (2.0 * (n - s));
}

}  // namespace sensorsched
