// Copyright 2026 The nliaudit Authors.
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

#ifndef NLIAUDIT_SAMPLING_HPP_
#define NLIAUDIT_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace nliaudit {

// Unbiased draw from [0, bound) by rejection. Unlike
// std::uniform_int_distribution the result is identical on every standard
// library, which keeps seeded selections reproducible across toolchains.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound);

// Forward partial Fisher-Yates over 0..n-1: slot i swaps with
// i + UniformBelow(n - i) for each i < k, and the first k slots are returned.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t k,
                                                  std::mt19937_64& rng);

// Full seeded Fisher-Yates permutation.
template <typename T>
void SeededShuffle(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(UniformBelow(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace nliaudit

#endif  // NLIAUDIT_SAMPLING_HPP_
