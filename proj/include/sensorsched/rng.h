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

#ifndef SENSORSCHED_RNG_H_
#define SENSORSCHED_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace sensorsched {

using Engine = std::mt19937_64;

// Derives an independent 64-bit seed for substream `stream` of `seed`
// using the SplitMix64 finalizer.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

// Uniform integer in [0, bound). bound must be positive.
std::size_t UniformIndex(Engine& engine, std::size_t bound);

// Partial Fisher-Yates: after the call, pool[0, count) is a uniform sample
// without replacement from the original contents of pool. count is clamped
// to pool.size().
void PartialShuffle(std::span<int> pool, std::size_t count, Engine& engine);

}  // namespace sensorsched

#endif  // SENSORSCHED_RNG_H_
