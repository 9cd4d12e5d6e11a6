// Copyright 2026 The Transent Authors.
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

#ifndef TRANSENT_RNG_H_
#define TRANSENT_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace transent {

// Seeded generator whose output sequence is identical on every conforming
// platform. std::mt19937_64 is bit-specified by the standard; the bounded
// draws below avoid std::uniform_int_distribution, whose algorithm is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 bits of resolution.
  double unit();

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer over (seed, stream); used to give independent
// sub-streams (one per pivot, one per stage) a well-mixed seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Indices of a uniform k-subset of [0, n), in draw order (partial
// Fisher-Yates). Requires k <= n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng);

template <typename T>
std::vector<T> sample_without_replacement(std::span<const T> pool,
                                          std::size_t k, Rng& rng) {
  std::vector<T> out;
  out.reserve(k);
  for (std::size_t i : sample_indices(pool.size(), k, rng)) {
    out.push_back(pool[i]);
  }
  return out;
}

}  // namespace transent

#endif  // TRANSENT_RNG_H_
