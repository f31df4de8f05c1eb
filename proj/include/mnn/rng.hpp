// Copyright 2026 The mnn-assoc Authors
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

#ifndef MNN_RNG_HPP_
#define MNN_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace mnn {

// Seeded random source with hand-rolled distributions. The mt19937_64 output
// sequence is fixed by the standard, and the distributions below avoid the
// standard library's (implementation-defined) ones, so identical seeds give
// identical streams on every platform we build on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n); n must be nonzero.
  std::uint64_t uniform_below(std::uint64_t n);

  // Marsaglia polar method, second deviate cached.
  double normal(double mean, double stddev);

  // Fisher-Yates, descending.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Mixes a base seed with a stream tag so that independent consumers of one
// user-supplied seed get decorrelated streams (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace mnn

#endif  // MNN_RNG_HPP_
