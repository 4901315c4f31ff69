// Copyright 2026 The xalign Authors.
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

// Portable seeded randomness.
//
// Every stochastic step in the toolkit goes through these helpers so results
// are identical on every standard library:
//
//  * engine: std::mt19937_64 (its output sequence is fixed by the standard);
//  * bounded draw `below(n)`: rejection sampling, reject x < 2^64 mod n, then
//    return x % n;
//  * sampling k of n without replacement: partial Fisher-Yates from the
//    front, for i in [0, k): j = i + below(n - i); swap(idx[i], idx[j]);
//  * a full shuffle is the same procedure with k = n;
//  * sub-seeds: mix_seed(seed, tag) = splitmix64(seed ^ fnv1a64(tag)).

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace xalign {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// First k indices of a partial Fisher-Yates shuffle of [0, n). k is clamped
/// to n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng);

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(items.size() - i));
    using std::swap;
    swap(items[i], items[j]);
  }
}

std::uint64_t fnv1a64(std::string_view text) noexcept;
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) noexcept;

}  // namespace xalign
