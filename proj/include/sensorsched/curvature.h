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

#ifndef SENSORSCHED_CURVATURE_H_
#define SENSORSCHED_CURVATURE_H_

// Element-wise curvature of the scheduling objective
//
//   C_l = max { f_i(T) / f_i(S) : S strict subset of T, i not in T,
//               |T \ S| = l },     C_max = max_l C_l,
//
// and the approximation constants derived from it: c = max(1, C_max) and
// alpha = 1 - e^(-1/c) - epsilon / c.

#include <cstdint>
#include <optional>
#include <vector>

#include "sensorsched/model.h"

namespace sensorsched {

// Triples whose denominator gain f_i(S) falls below this are skipped.
inline constexpr double kMinCurvatureGain = 1e-14;
inline constexpr int kDefaultCurvatureCap = 12;

struct Thm2Bound {
  double bound = 0.0;
  // Lower bound on the probability that C_max <= bound. Not clamped, so it
  // can be negative (vacuous) for small q.
  double probability = 0.0;
  double phi = 0.0;
};

struct CurvatureReport {
  // per_l[l - 1] = C_l for l = 1..n-1. Sampled reports hold the largest
  // ratio observed at each l (0 where nothing was observed).
  std::vector<double> per_l;
  double c_max = 0.0;
  double c = 1.0;
  double epsilon = 0.0;
  double alpha = 0.0;
  // True for sampled reports: c_max is then only a lower estimate.
  bool lower_bound = false;
  std::int64_t triples = 0;
  std::int64_t excluded = 0;
  std::optional<Thm2Bound> thm2;
  // Informational only: 1 + s/(2n) - 1/(2(n - s)) for the sample size s
  // of the randomized scheduler.
  std::optional<double> sampling_exponent;
};

double AlphaOf(double c, double epsilon);

// C(r) = (1 + sum_{l=1}^{r-1} C_l) / r.
double CurvatureSumFactor(const std::vector<double>& per_l, int r);

// Exact curvatures by enumerating every (S, T, i). Gains come from the
// direct-factorization objective. Throws CapExceededError if n > size_cap
// (size_cap is itself limited to 20).
CurvatureReport CurvatureExhaustive(const Matrix& predicted, const Matrix& rows,
                                    double noise_var, double epsilon,
                                    int size_cap = kDefaultCurvatureCap);

// Largest ratios over `samples` uniformly drawn triples. Throws
// InvalidInputError for samples < 1 or n < 2.
CurvatureReport CurvatureSampled(const Matrix& predicted, const Matrix& rows,
                                 double noise_var, double epsilon,
                                 std::int64_t samples, std::uint64_t seed);

struct Lemma1Report {
  int checked = 0;
  int violations = 0;
  // min over pairs of C(r) sum_{j in T\S} f_j(S) - (f(T) - f(S)).
  double worst_slack = 0.0;
};

inline constexpr double kLemma1Tolerance = 1e-10;

// Checks f(T) - f(S) <= C(r) sum_{j in T\S} f_j(S) on `trials` random
// nested pairs S strict subset of T, with C_l taken from per_l. A pair
// violates when its slack is below -kLemma1Tolerance.
Lemma1Report Lemma1Check(const Matrix& predicted, const Matrix& rows,
                         double noise_var, const std::vector<double>& per_l,
                         int trials, std::uint64_t seed);

// Probabilistic curvature bound for i.i.d. zero-mean rows with covariance
// sigma_a2 I and |a_j|^2 <= norm_bound:
//   phi = (1/lambda_min + (n sigma_a2 + q) / noise_var)^-1
//   bound = lambda_max^2 (noise_var + lambda_max C) / (phi^2 (noise_var +
//   phi C))
//   p = 1 - m exp(-(q^2/2) / ((C - sigma_a2)(n sigma_a2 + q/3)))
// Throws InvalidInputError unless norm_bound > sigma_a2 > 0, q > 0 and the
// spectrum is positive.
Thm2Bound EvaluateThm2Bound(double lambda_min, double lambda_max,
                            double noise_var, double sigma_a2,
                            double norm_bound, int n, int m, double q);

// Smallest q with p(q) >= probability. Requires 1 - m < probability < 1.
double QForProbability(double probability, double sigma_a2, double norm_bound,
                       int n, int m);

// 1 + s/(2n) - 1/(2(n - s)); requires 0 < s < n.
double SamplingExponent(int n, int s);

}  // namespace sensorsched

#endif  // SENSORSCHED_CURVATURE_H_
