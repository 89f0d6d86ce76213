// Copyright 2026 The Streamflow Authors.
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

#ifndef STREAMFLOW_RANDOM_H_
#define STREAMFLOW_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace streamflow {

using Rng = std::mt19937_64;

// Derives an independent sub-seed from the master seed, a stream name and an
// index. Every random stream in a run is keyed this way so results do not
// depend on the order in which streams are consumed.
std::uint64_t DeriveSeed(std::uint64_t master, std::string_view stream,
                         std::int64_t index = 0);

inline Rng MakeRng(std::uint64_t master, std::string_view stream,
                   std::int64_t index = 0) {
  return Rng(DeriveSeed(master, stream, index));
}

// Uniform double in [0, 1) with 53 random bits. Unlike
// std::uniform_real_distribution the draw sequence is fixed by the generator
// alone.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
std::uint64_t UniformIndex(Rng& rng, std::uint64_t n);

}  // namespace streamflow

#endif  // STREAMFLOW_RANDOM_H_
