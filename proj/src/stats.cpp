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

#include "weaksim/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace weaksim {

namespace {

// Series expansion of the regularized lower incomplete gamma P(a, x),
// converging well for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), converging well for x >= a + 1
// (modified Lentz algorithm).
double gamma_q_continued_fraction(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) {
    throw std::invalid_argument("regularized_gamma_q: require a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chi_square_uniform_pvalue(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) {
    throw std::invalid_argument("chi_square_uniform_pvalue: need >= 2 bins");
  }
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  if (n == 0) return 1.0;
  const double expected = static_cast<double>(n) / counts.size();
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  const double dof = static_cast<double>(counts.size() - 1);
  return regularized_gamma_q(dof / 2.0, stat / 2.0);
}

double binary_pearson_correlation(std::uint64_t n11, std::uint64_t n10,
                                  std::uint64_t n01, std::uint64_t n00) {
  const double n = static_cast<double>(n11 + n10 + n01 + n00);
  const double a = static_cast<double>(n11 + n10);  // first indicator positive
  const double b = static_cast<double>(n11 + n01);  // second indicator positive
  const double va = a * (n - a);
  const double vb = b * (n - b);
  if (va <= 0.0 || vb <= 0.0) {
    throw std::invalid_argument(
        "binary_pearson_correlation: a marginal is constant");
  }
  return (n * static_cast<double>(n11) - a * b) / std::sqrt(va * vb);
}

}  // namespace weaksim
