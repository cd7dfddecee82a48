// Copyright 2026 The weaksim developers.
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace weaksim {

/// SplitMix64 mixer, used only to expand a (root seed, stream index) pair
/// into an mt19937_64 seed. Stream k of root seed s is
///   mt19937_64(SplitMix64(s + k * 0x9E3779B97F4A7C15).next())
/// which is the documented counter scheme for disjoint parallel streams.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

inline std::mt19937_64 make_engine(std::uint64_t root_seed,
                                   std::uint64_t stream = 0) {
  SplitMix64 mix{root_seed + stream * 0x9E3779B97F4A7C15ull};
  return std::mt19937_64(mix.next());
}

/// Uniform double in [0, 1) with 53 random bits. mt19937_64 output is fully
/// specified by the standard, so sequences are reproducible across platforms
/// (std::uniform_real_distribution is not, which is why it is avoided here).
inline double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF sampler over a fixed finite distribution. Weights need not be
/// normalized; they must be nonnegative with a positive sum.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<double>& weights) {
    cumulative_.resize(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      cumulative_[i] = acc;
    }
    total_ = acc;
  }

  std::size_t size() const { return cumulative_.size(); }
  double total_weight() const { return total_; }

  std::size_t draw(std::mt19937_64& engine) const {
    const double u = uniform01(engine) * total_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

}  // namespace weaksim
