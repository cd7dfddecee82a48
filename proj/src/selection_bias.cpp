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

#include "weaksim/selection_bias.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "weaksim/errors.hpp"
#include "weaksim/rng.hpp"
#include "weaksim/stats.hpp"

namespace weaksim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double circular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return d > std::numbers::pi ? kTwoPi - d : d;
}

// Euclid on real frequencies with a cutoff; commensurate targets get their
// true fundamental, anything else falls back to the slowest component.
double approximate_gcd(const std::vector<TargetComponent>& parts) {
  double g = 0;
  for (const auto& c : parts) {
    double a = g;
    double b = std::abs(c.frequency);
    while (b > 1e-9) {
      const double r = std::fmod(a, b);
      a = b;
      b = r;
    }
    g = a;
  }
  return g;
}

// Normalized match distance: < 1 means inside every tolerance window.
double match_distance(const Pendulum& p, const TargetComponent& c,
                      const MatchTolerance& tolerance) {
  const double da =
      std::abs(p.amplitude - c.amplitude) / (tolerance.amplitude_rel * c.amplitude);
  const double df =
      std::abs(p.frequency - c.frequency) / (tolerance.frequency_rel * c.frequency);
  const double dp = circular_distance(p.phase, c.phase) / tolerance.phase_abs;
  return std::max(da, std::max(df, dp));
}

// Squared L2 distance over [0, T] between the candidate's waveform and the
// target component's, in closed form. This ranks matched candidates by the
// quantity the demo actually reports, so a slightly-off frequency with a
// compensating phase is preferred over a nominally closer parameter triple.
double waveform_distance_sq(const Pendulum& p, const TargetComponent& c,
                            double period) {
  const auto cross = [period](double w1, double f1, double w2, double f2) {
    // integral of cos(w1 t + f1) cos(w2 t + f2) over [0, period]
    const auto half_int = [period](double w, double f) {
      if (std::abs(w) < 1e-12) return period * std::cos(f);
      return (std::sin(w * period + f) - std::sin(f)) / w;
    };
    return 0.5 * (half_int(w1 + w2, f1 + f2) + half_int(w1 - w2, f1 - f2));
  };
  return p.amplitude * p.amplitude * cross(p.frequency, p.phase, p.frequency, p.phase) -
         2.0 * p.amplitude * c.amplitude *
             cross(p.frequency, p.phase, c.frequency, c.phase) +
         c.amplitude * c.amplitude * cross(c.frequency, c.phase, c.frequency, c.phase);
}

double relative_l2_distance(const std::vector<double>& candidate,
                            const std::vector<double>& reference) {
  double diff = 0;
  double norm = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = candidate[i] - reference[i];
    diff += d * d;
    norm += reference[i] * reference[i];
  }
  return std::sqrt(diff / norm);
}

}  // namespace

FourierTarget default_chord() {
  FourierTarget target;
  target.components = {{1.0, 1.0, 0.0}, {2.0, 0.8, 1.1}, {3.0, 0.6, 2.3}};
  return target;
}

double target_period(const FourierTarget& target) {
  const double g = approximate_gcd(target.components);
  if (g > 1e-9) return kTwoPi / g;
  double min_freq = std::numeric_limits<double>::infinity();
  for (const auto& c : target.components) {
    min_freq = std::min(min_freq, std::abs(c.frequency));
  }
  return kTwoPi / min_freq;
}

std::vector<double> render_waveform(const std::vector<TargetComponent>& parts,
                                    double period, int n_samples) {
  std::vector<double> out(static_cast<std::size_t>(n_samples), 0.0);
  for (int i = 0; i < n_samples; ++i) {
    const double t = period * i / n_samples;
    double value = 0;
    for (const auto& c : parts) {
      value += c.amplitude * std::cos(c.frequency * t + c.phase);
    }
    out[static_cast<std::size_t>(i)] = value;
  }
  return out;
}

PendulumDemoResult pendulum_postselect(std::uint64_t n,
                                       const FourierTarget& target,
                                       std::uint64_t seed,
                                       const ParameterRanges& ranges) {
  if (n < 1) {
    throw InvalidState("pendulum_postselect: need at least one draw");
  }
  if (target.components.empty()) {
    throw InvalidState("pendulum_postselect: target is empty");
  }
  for (std::size_t i = 0; i < target.components.size(); ++i) {
    for (std::size_t j = i + 1; j < target.components.size(); ++j) {
      if (target.components[i].frequency == target.components[j].frequency) {
        throw InvalidState("pendulum_postselect: target frequencies must differ");
      }
    }
  }

  PendulumDemoResult result;
  result.n_total = n;
  for (auto& histogram : result.marginal_histograms) {
    histogram.assign(kMarginalHistogramBins, 0);
  }

  const std::size_t n_components = target.components.size();
  const double period = target_period(target);
  std::vector<Pendulum> best(n_components);
  std::vector<double> best_distance(n_components,
                                    std::numeric_limits<double>::infinity());

  const auto histogram_bin = [](double value, double lo, double hi) {
    int b = static_cast<int>((value - lo) / (hi - lo) * kMarginalHistogramBins);
    if (b < 0) b = 0;
    if (b >= kMarginalHistogramBins) b = kMarginalHistogramBins - 1;
    return static_cast<std::size_t>(b);
  };

  auto engine = make_engine(seed);
  for (std::uint64_t draw = 0; draw < n; ++draw) {
    Pendulum p;
    p.amplitude = ranges.amplitude_lo +
                  (ranges.amplitude_hi - ranges.amplitude_lo) * uniform01(engine);
    p.frequency = ranges.frequency_lo +
                  (ranges.frequency_hi - ranges.frequency_lo) * uniform01(engine);
    p.phase = kTwoPi * uniform01(engine);

    result.marginal_histograms[0][histogram_bin(
        p.amplitude, ranges.amplitude_lo, ranges.amplitude_hi)]++;
    result.marginal_histograms[1][histogram_bin(
        p.frequency, ranges.frequency_lo, ranges.frequency_hi)]++;
    result.marginal_histograms[2][histogram_bin(p.phase, 0.0, kTwoPi)]++;

    bool matched = false;
    for (std::size_t c = 0; c < n_components; ++c) {
      if (match_distance(p, target.components[c], target.tolerance) <= 1.0) {
        matched = true;
        const double d = waveform_distance_sq(p, target.components[c], period);
        if (d < best_distance[c]) {
          best_distance[c] = d;
          best[c] = p;
        }
      }
    }
    if (matched) result.subensemble.push_back(p);
  }

  std::string unmatched;
  for (std::size_t c = 0; c < n_components; ++c) {
    if (!std::isfinite(best_distance[c])) {
      if (!unmatched.empty()) unmatched += ", ";
      unmatched += "component " + std::to_string(c) +
                   " (frequency " + std::to_string(target.components[c].frequency) +
                   ")";
    }
  }
  if (!unmatched.empty()) {
    throw TargetUnmatched("no pendulum within tolerance of: " + unmatched);
  }

  result.representatives = best;
  std::vector<TargetComponent> reconstructed;
  reconstructed.reserve(n_components);
  for (const auto& p : best) {
    reconstructed.push_back({p.frequency, p.amplitude, p.phase});
  }
  const std::vector<double> reference =
      render_waveform(target.components, period, 512);
  const std::vector<double> candidate =
      render_waveform(reconstructed, period, 512);
  result.reconstruction_error = relative_l2_distance(candidate, reference);
  return result;
}

BerksonResult berkson_demo(std::uint64_t n, double rate1, double rate2,
                           std::uint64_t seed) {
  if (n < 1000) {
    throw InvalidState("berkson_demo: need at least 1000 subjects");
  }
  if (!(rate1 >= 0) || rate1 > 1 || !(rate2 >= 0) || rate2 > 1) {
    throw InvalidState("berkson_demo: base rates must lie in [0, 1]");
  }

  // Joint counts over (d1, d2), full sample and admitted subsample.
  std::uint64_t full[2][2] = {{0, 0}, {0, 0}};
  std::uint64_t admitted[2][2] = {{0, 0}, {0, 0}};
  auto engine = make_engine(seed);
  for (std::uint64_t i = 0; i < n; ++i) {
    const int d1 = uniform01(engine) < rate1 ? 1 : 0;
    const int d2 = uniform01(engine) < rate2 ? 1 : 0;
    ++full[d1][d2];
    if (d1 == 1 || d2 == 1) ++admitted[d1][d2];
  }

  BerksonResult result;
  result.n_total = n;
  result.n_admitted = admitted[1][1] + admitted[1][0] + admitted[0][1];
  try {
    result.r_unconditional = binary_pearson_correlation(
        full[1][1], full[1][0], full[0][1], full[0][0]);
    result.r_conditional = binary_pearson_correlation(
        admitted[1][1], admitted[1][0], admitted[0][1], admitted[0][0]);
  } catch (const std::invalid_argument& e) {
    throw DegenerateSample(e.what());
  }
  return result;
}

}  // namespace weaksim
