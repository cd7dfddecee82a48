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

#include <cmath>
#include <cstdint>
#include <vector>

namespace weaksim {

/// Kahan-compensated accumulator. Merging two accumulators is associative
/// enough that batch results reduced in a fixed order are independent of the
/// thread schedule that produced them.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  void merge(const KahanSum& other) {
    add(other.sum);
    add(-other.carry);
  }

  double value() const { return sum - carry; }
};

/// First two sample moments with compensated sums.
struct SampleMoments {
  std::uint64_t count = 0;
  KahanSum sum;
  KahanSum sum_sq;

  void add(double x) {
    ++count;
    sum.add(x);
    sum_sq.add(x * x);
  }

  void merge(const SampleMoments& other) {
    count += other.count;
    sum.merge(other.sum);
    sum_sq.merge(other.sum_sq);
  }

  double mean() const { return count == 0 ? 0.0 : sum.value() / count; }

  double variance() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double v = (sum_sq.value() - count * m * m) / (count - 1);
    return v > 0.0 ? v : 0.0;
  }

  double std_dev() const { return std::sqrt(variance()); }

  double std_error() const {
    return count == 0 ? 0.0 : std_dev() / std::sqrt(static_cast<double>(count));
  }
};

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double regularized_gamma_q(double a, double x);

/// p-value of the chi-square goodness-of-fit statistic against an equiprobable
/// multinomial over the given bins.
double chi_square_uniform_pvalue(const std::vector<std::uint64_t>& counts);

/// Pearson correlation of two binary indicator samples from their joint
/// counts. n11, n10, n01, n00 partition the sample.
double binary_pearson_correlation(std::uint64_t n11, std::uint64_t n10,
                                  std::uint64_t n01, std::uint64_t n00);

}  // namespace weaksim
