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

// Classical demonstrations that post-selection manufactures ensemble-level
// patterns:
//
//  * pendulum_postselect draws oscillators with uniform parameters and culls
//    them down to a subensemble whose components reconstruct a chosen chord.
//    The pattern lives entirely in the selection: the full-ensemble parameter
//    marginals stay uniform.
//
//  * berkson_demo draws two independent binary indicators and conditions on
//    their OR (admission), which induces a negative correlation between
//    causes that are unconditionally independent.

#include <array>
#include <cstdint>
#include <vector>

namespace weaksim {

struct Pendulum {
  double amplitude = 0;  // >= 0
  double frequency = 0;  // radians per unit time, > 0
  double phase = 0;      // [0, 2*pi)
};

struct TargetComponent {
  double frequency = 0;
  double amplitude = 0;
  double phase = 0;
};

struct MatchTolerance {
  double amplitude_rel = 0.02;
  double frequency_rel = 0.02;
  double phase_abs = 0.1;  // radians, circular distance
};

/// Component list the experimenter post-selects for; frequencies must be
/// distinct.
struct FourierTarget {
  std::vector<TargetComponent> components;
  MatchTolerance tolerance;
};

/// Uniform sampling ranges for the generated pendulums (phases always cover
/// the full circle).
struct ParameterRanges {
  double amplitude_lo = 0.5;
  double amplitude_hi = 1.5;
  double frequency_lo = 0.5;
  double frequency_hi = 3.5;
};

inline constexpr int kMarginalHistogramBins = 32;

struct PendulumDemoResult {
  std::vector<Pendulum> subensemble;      // every pendulum matching a component
  std::vector<Pendulum> representatives;  // one nearest match per component
  double reconstruction_error = 0;        // relative L2 over one period
  std::uint64_t n_total = 0;
  // Full-ensemble parameter histograms (amplitude, frequency, phase), for
  // uniformity checks against the configured ranges.
  std::array<std::vector<std::uint64_t>, 3> marginal_histograms;
};

/// Default three-component chord with commensurate frequencies.
FourierTarget default_chord();

/// One fundamental period of the target (2*pi over the approximate gcd of the
/// component frequencies).
double target_period(const FourierTarget& target);

/// Waveform samples of the summed components over one fundamental period.
std::vector<double> render_waveform(const std::vector<TargetComponent>& parts,
                                    double period, int n_samples);

PendulumDemoResult pendulum_postselect(std::uint64_t n,
                                       const FourierTarget& target,
                                       std::uint64_t seed,
                                       const ParameterRanges& ranges = {});

struct BerksonResult {
  double r_unconditional = 0;
  double r_conditional = 0;
  std::uint64_t n_total = 0;
  std::uint64_t n_admitted = 0;
};

/// Admission rule: at least one indicator positive.
BerksonResult berkson_demo(std::uint64_t n, double rate1, double rate2,
                           std::uint64_t seed);

}  // namespace weaksim
