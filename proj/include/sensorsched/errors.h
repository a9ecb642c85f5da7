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

#ifndef SENSORSCHED_ERRORS_H_
#define SENSORSCHED_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sensorsched {

// Malformed data: non-finite entries, dimension mismatches, asymmetric
// covariances.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scheduler or experiment configuration that cannot be run (k > n,
// epsilon outside [e^-k, 1), empty method list, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A caller broke an operation precondition, e.g. adding a sensor twice.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A matrix that must be inverted is singular or has a condition estimate
// above kMaxConditionNumber.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive enumeration refused because the search space exceeds its cap.
class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sensorsched

#endif  // SENSORSCHED_ERRORS_H_
