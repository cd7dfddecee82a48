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

// Two case studies built on the kernel and the pointer protocol:
//
//  * A four-dimensional pre/post pair whose path and polarization projectors
//    have the weak-value pattern (1, 0, 0, 1): path weak values place the
//    particle entirely in the left arm while the polarization-weighted weak
//    values place the polarization entirely in the right arm.
//
//  * The operational velocity field built from a weak position probe followed
//    by a strong position readout a time tau later, binned by the strong
//    outcome, against the velocity field read off the wavefunction's
//    logarithmic derivative.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "weaksim/aav.hpp"
#include "weaksim/errors.hpp"
#include "weaksim/pointer.hpp"
#include "weaksim/qkernel.hpp"
#include "weaksim/rng.hpp"
#include "weaksim/stats.hpp"
#include "weaksim/types.hpp"
#include "weaksim/weakvalue.hpp"

namespace weaksim {

// ---------------------------------------------------------------------------
// Cheshire-cat weak-value pattern
// ---------------------------------------------------------------------------

/// Basis ordering |L,H>, |L,V>, |R,H>, |R,V> (path outermost). The
/// polarization operator is sigma_z on the inner factor; physically it stands
/// for angular momentum in the circular-polarization basis, but only the
/// weak-value pattern matters here.
template <typename Scalar = double>
struct CheshireSetup {
  StateVector<Scalar> pre;
  StateVector<Scalar> post;
  Operator<Scalar> path_left;     // |L><L| (x) 1
  Operator<Scalar> path_right;    // |R><R| (x) 1
  Operator<Scalar> polarization;  // 1 (x) sigma_z
};

template <typename Scalar = double>
CheshireSetup<Scalar> cheshire_setup() {
  ComplexVec<Scalar> pre(4), post(4);
  pre << Complex<Scalar>(0.5, 0), Complex<Scalar>(0.5, 0),
      Complex<Scalar>(0.5, 0), Complex<Scalar>(0.5, 0);
  post << Complex<Scalar>(0.5, 0), Complex<Scalar>(0.5, 0),
      Complex<Scalar>(0.5, 0), Complex<Scalar>(-0.5, 0);
  const Operator<Scalar> id2 = Operator<Scalar>::identity(2);
  const Operator<Scalar> proj0 =
      Operator<Scalar>::projector(StateVector<Scalar>::basis(2, 0));
  const Operator<Scalar> proj1 =
      Operator<Scalar>::projector(StateVector<Scalar>::basis(2, 1));
  return CheshireSetup<Scalar>{StateVector<Scalar>(std::move(pre)),
                               StateVector<Scalar>(std::move(post)),
                               tensor(proj0, id2), tensor(proj1, id2),
                               tensor(id2, sigma_z<Scalar>())};
}

/// The four probed observables, in reporting order. The polarization-path
/// products are self-adjoint as they stand because the factors commute.
template <typename Scalar>
std::vector<std::pair<std::string, Operator<Scalar>>> cheshire_observables(
    const CheshireSetup<Scalar>& setup) {
  return {{"pi_left", setup.path_left},
          {"pi_right", setup.path_right},
          {"s_pi_left", Operator<Scalar>(ComplexMat<Scalar>(
                            setup.polarization.entries() *
                            setup.path_left.entries()))},
          {"s_pi_right", Operator<Scalar>(ComplexMat<Scalar>(
                             setup.polarization.entries() *
                             setup.path_right.entries()))}};
}

template <typename Scalar = double>
struct CheshireEstimate {
  Complex<Scalar> exact{};
  WeakValueResult<Scalar> estimate{};  // Re from the p run, Im from the q run
  Scalar success_prob = 0;
  std::uint64_t n_postselected_p = 0;
  std::uint64_t n_postselected_q = 0;
};

/// Runs the pointer protocol for each observable, once per readout, and pairs
/// the Monte Carlo estimates with the exact ratios.
template <typename Scalar>
std::map<std::string, CheshireEstimate<Scalar>> cheshire_report(
    const CheshireSetup<Scalar>& setup, Scalar sigma_q, std::uint64_t attempts,
    std::uint64_t seed, const ProtocolOptions<Scalar>& opts = {}) {
  std::map<std::string, CheshireEstimate<Scalar>> report;
  SplitMix64 seeder{seed};
  for (const auto& [label, observable] : cheshire_observables(setup)) {
    const std::uint64_t seed_p = seeder.next();
    const std::uint64_t seed_q = seeder.next();
    const ProtocolReport<Scalar> run_p = run_protocol(
        observable, setup.pre, setup.post, sigma_q, attempts, seed_p,
        Representation::momentum, opts);
    const ProtocolReport<Scalar> run_q = run_protocol(
        observable, setup.pre, setup.post, sigma_q, attempts, seed_q,
        Representation::coordinate, opts);

    CheshireEstimate<Scalar> entry;
    entry.exact = run_p.exact_weak_value;
    entry.success_prob = run_p.success_prob;
    entry.n_postselected_p = run_p.n_postselected;
    entry.n_postselected_q = run_q.n_postselected;
    entry.estimate.value = Complex<Scalar>(std::real(run_p.estimate.value),
                                           std::imag(run_q.estimate.value));
    entry.estimate.overlap = run_p.estimate.overlap;
    entry.estimate.method = Method::monte_carlo;
    entry.estimate.stderr_re = run_p.estimate.stderr_re;
    entry.estimate.stderr_im = run_q.estimate.stderr_im;
    report.emplace(label, std::move(entry));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Operational velocity field
// ---------------------------------------------------------------------------

template <typename Scalar = double>
struct Binning {
  Scalar lo = 0;
  Scalar hi = 0;
  int nbins = 21;

  Scalar width() const { return (hi - lo) / Scalar(nbins); }
  Scalar center(int b) const { return lo + (Scalar(b) + Scalar(0.5)) * width(); }
  int bin_of(Scalar x) const {
    if (!(x >= lo) || !(x < hi)) return -1;
    const int b = static_cast<int>((x - lo) / width());
    return b >= nbins ? nbins - 1 : b;
  }
};

template <typename Scalar = double>
struct VelocityField {
  std::vector<Scalar> bin_centers;
  std::vector<std::optional<Scalar>> velocities;  // absent under-occupied bins
  std::vector<std::uint64_t> counts;
  Scalar tau = 0;
  Scalar sigma_q = 0;
  Binning<Scalar> binning;
};

template <typename Scalar = double>
struct WisemanOptions {
  Index probe_n = 1024;
  Scalar probe_length = 0;  // 0 selects 16 * sigma_q
  std::uint64_t min_occupancy = 100;
  Scalar bin_span_stds = 2;
  std::uint64_t batch_size = 1 << 16;
  unsigned threads = 1;
};

/// Exact per-grid-point statistics of one probe-then-evolve-then-measure
/// round: the distribution of the strong position outcome, and the mean probe
/// momentum conditional on each outcome.
template <typename Scalar = double>
struct WisemanStatistics {
  RealVec<Scalar> position_probability;  // per system grid point, sums to 1
  RealVec<Scalar> conditional_probe_mean;
};

namespace detail {

// Momentum of a raw DFT bin, k in [-n/2, n/2), so spectra can be weighted
// without reordering.
template <typename Scalar>
Scalar fft_bin_momentum(const Grid<Scalar>& grid, Index bin) {
  const Index k = bin < grid.n / 2 ? bin : bin - grid.n;
  return Scalar(k) * grid.spacing_p();
}

}  // namespace detail

template <typename Scalar>
WisemanStatistics<Scalar> wiseman_statistics(const PointerState<Scalar>& psi,
                                             Scalar m, Scalar tau,
                                             Scalar sigma_q,
                                             const WisemanOptions<Scalar>& opts = {}) {
  if (psi.representation() != Representation::coordinate) {
    throw InvalidState("wiseman_statistics: psi must be in coordinate form");
  }
  if (!(m > Scalar(0)) || !(tau > Scalar(0))) {
    throw InvalidState("wiseman_statistics: require m > 0 and tau > 0");
  }
  const Grid<Scalar>& sys = psi.grid();
  const Scalar probe_length =
      opts.probe_length > Scalar(0) ? opts.probe_length : Scalar(16) * sigma_q;
  const Grid<Scalar> probe_grid(opts.probe_n, probe_length, sys.hbar);
  const PointerState<Scalar> probe = gaussian_pointer(probe_grid, sigma_q);

  // Joint amplitudes after the impulsive position coupling,
  // M(i, j) = psi(x_i) phi(q_j) e^{i q_j x_i / hbar}.
  ComplexMat<Scalar> joint(sys.n, probe_grid.n);
  for (Index i = 0; i < sys.n; ++i) {
    const Scalar x = sys.coordinate(i);
    for (Index j = 0; j < probe_grid.n; ++j) {
      const Scalar phase = probe_grid.coordinate(j) * x / sys.hbar;
      joint(i, j) = psi.amplitudes()(i) * probe.amplitudes()(j) *
                    Complex<Scalar>(std::cos(phase), std::sin(phase));
    }
  }

  // Free evolution of the system factor for tau.
  {
    Eigen::FFT<Scalar> fft;
    ComplexVec<Scalar> column(sys.n), spectrum(sys.n);
    for (Index j = 0; j < probe_grid.n; ++j) {
      column = joint.col(j);
      fft.fwd(spectrum, column);
      for (Index b = 0; b < sys.n; ++b) {
        const Scalar p = detail::fft_bin_momentum(sys, b);
        const Scalar phase = -p * p * tau / (Scalar(2) * m * sys.hbar);
        spectrum(b) *= Complex<Scalar>(std::cos(phase), std::sin(phase));
      }
      fft.inv(column, spectrum);
      joint.col(j) = column;
    }
  }

  // Probe rows to momentum space; moduli are all that is needed, so the DFT
  // ordering can be kept and weighted by the matching momentum values.
  WisemanStatistics<Scalar> stats;
  stats.position_probability = RealVec<Scalar>::Zero(sys.n);
  stats.conditional_probe_mean = RealVec<Scalar>::Zero(sys.n);
  {
    Eigen::FFT<Scalar> fft;
    ComplexVec<Scalar> row(probe_grid.n), spectrum(probe_grid.n);
    Scalar total = 0;
    for (Index i = 0; i < sys.n; ++i) {
      row = joint.row(i).transpose();
      fft.fwd(spectrum, row);
      Scalar weight = 0;
      Scalar first_moment = 0;
      for (Index b = 0; b < probe_grid.n; ++b) {
        const Scalar density = std::norm(spectrum(b));
        weight += density;
        first_moment += density * detail::fft_bin_momentum(probe_grid, b);
      }
      stats.position_probability(i) = weight;
      stats.conditional_probe_mean(i) =
          weight > Scalar(0) ? first_moment / weight : Scalar(0);
      total += weight;
    }
    stats.position_probability /= total;
  }
  return stats;
}

/// Derives the reporting bins from a discrete position distribution: uniform
/// bins over mean +/- span_stds standard deviations.
template <typename Scalar>
Binning<Scalar> central_binning(const Grid<Scalar>& grid,
                                const RealVec<Scalar>& probability, int nbins,
                                Scalar span_stds) {
  Scalar mean_x = 0;
  for (Index i = 0; i < grid.n; ++i) {
    mean_x += probability(i) * grid.coordinate(i);
  }
  Scalar var = 0;
  for (Index i = 0; i < grid.n; ++i) {
    const Scalar d = grid.coordinate(i) - mean_x;
    var += probability(i) * d * d;
  }
  const Scalar std_x = std::sqrt(var);
  return Binning<Scalar>{mean_x - span_stds * std_x, mean_x + span_stds * std_x,
                         nbins};
}

/// Monte Carlo velocity field: each trial draws a strong position outcome
/// x_strong from the exact post-interaction distribution and accumulates
/// (x_strong - x_weak) / tau into x_strong's bin, where x_weak is the exact
/// mean probe readout conditional on that outcome. Averaging the conditional
/// mean instead of per-trial probe draws estimates the same post-selected
/// ensemble average with the probe's sampling noise (of order
/// hbar / (2 sigma_q tau) per draw) removed.
template <typename Scalar>
VelocityField<Scalar> wiseman_velocity(const PointerState<Scalar>& psi, Scalar m,
                                       Scalar tau, Scalar sigma_q,
                                       std::uint64_t attempts, int nbins,
                                       std::uint64_t seed,
                                       const WisemanOptions<Scalar>& opts = {}) {
  if (nbins < 1) {
    throw InvalidState("wiseman_velocity: need at least one bin");
  }
  const WisemanStatistics<Scalar> stats =
      wiseman_statistics(psi, m, tau, sigma_q, opts);
  const Grid<Scalar>& sys = psi.grid();
  const Binning<Scalar> binning = central_binning(
      sys, stats.position_probability, nbins, opts.bin_span_stds);

  std::vector<double> weights(sys.n);
  for (Index i = 0; i < sys.n; ++i) {
    weights[i] = static_cast<double>(stats.position_probability(i));
  }
  const DiscreteSampler sampler(weights);

  struct BinAccumulator {
    std::uint64_t count = 0;
    KahanSum displacement;
    void merge(const BinAccumulator& other) {
      count += other.count;
      displacement.merge(other.displacement);
    }
  };
  struct BatchResult {
    std::vector<BinAccumulator> bins;
  };

  const std::uint64_t batch_size = std::max<std::uint64_t>(1, opts.batch_size);
  const std::uint64_t n_batches =
      attempts == 0 ? 0 : (attempts + batch_size - 1) / batch_size;

  auto run_batch = [&](std::uint64_t b) {
    BatchResult result;
    result.bins.resize(static_cast<std::size_t>(nbins));
    const std::uint64_t n =
        std::min<std::uint64_t>(batch_size, attempts - b * batch_size);
    auto engine = make_engine(seed, b);
    for (std::uint64_t t = 0; t < n; ++t) {
      const Index i = static_cast<Index>(sampler.draw(engine));
      const Scalar x_strong = sys.coordinate(i);
      const int bin = binning.bin_of(x_strong);
      if (bin < 0) continue;
      auto& acc = result.bins[static_cast<std::size_t>(bin)];
      ++acc.count;
      acc.displacement.add(
          static_cast<double>(x_strong - stats.conditional_probe_mean(i)));
    }
    return result;
  };

  std::vector<BinAccumulator> merged(static_cast<std::size_t>(nbins));
  for (const auto& batch : detail::run_batches(n_batches, opts.threads, run_batch)) {
    for (int b = 0; b < nbins; ++b) {
      merged[static_cast<std::size_t>(b)].merge(
          batch.bins[static_cast<std::size_t>(b)]);
    }
  }

  VelocityField<Scalar> field;
  field.tau = tau;
  field.sigma_q = sigma_q;
  field.binning = binning;
  for (int b = 0; b < nbins; ++b) {
    const auto& acc = merged[static_cast<std::size_t>(b)];
    field.bin_centers.push_back(binning.center(b));
    field.counts.push_back(acc.count);
    if (acc.count >= opts.min_occupancy) {
      field.velocities.push_back(Scalar(acc.displacement.value()) /
                                 (Scalar(acc.count) * tau));
    } else {
      field.velocities.push_back(std::nullopt);
    }
  }
  return field;
}

/// Velocity field read off the wavefunction: v = (hbar/m) Im(psi'/psi) with
/// periodic central differences, density-averaged over each bin. Grid points
/// with |psi|^2 below 1e-8 of the peak density are masked, so nodes never
/// produce division blowups; bins with no unmasked support are absent.
template <typename Scalar>
VelocityField<Scalar> guidance_velocity_oracle(const PointerState<Scalar>& psi,
                                               Scalar m,
                                               const Binning<Scalar>& binning) {
  if (psi.representation() != Representation::coordinate) {
    throw InvalidState("guidance_velocity_oracle: psi must be in coordinate form");
  }
  if (!(m > Scalar(0))) {
    throw InvalidState("guidance_velocity_oracle: mass must be positive");
  }
  const Grid<Scalar>& grid = psi.grid();
  const RealVec<Scalar> density = psi.density();
  const Scalar mask_threshold = Scalar(1e-8) * density.maxCoeff();

  VelocityField<Scalar> field;
  field.tau = 0;
  field.sigma_q = 0;
  field.binning = binning;

  std::vector<Scalar> weight(static_cast<std::size_t>(binning.nbins), Scalar(0));
  std::vector<Scalar> weighted_v(static_cast<std::size_t>(binning.nbins),
                                 Scalar(0));
  std::vector<std::uint64_t> support(static_cast<std::size_t>(binning.nbins), 0);
  for (Index j = 0; j < grid.n; ++j) {
    if (density(j) < mask_threshold) continue;
    const int b = binning.bin_of(grid.coordinate(j));
    if (b < 0) continue;
    const Index prev = (j + grid.n - 1) % grid.n;
    const Index next = (j + 1) % grid.n;
    const Complex<Scalar> derivative =
        (psi.amplitudes()(next) - psi.amplitudes()(prev)) /
        Complex<Scalar>(Scalar(2) * grid.spacing_q(), 0);
    const Scalar v = grid.hbar / m *
                     std::imag(derivative / psi.amplitudes()(j));
    weight[static_cast<std::size_t>(b)] += density(j);
    weighted_v[static_cast<std::size_t>(b)] += density(j) * v;
    ++support[static_cast<std::size_t>(b)];
  }
  for (int b = 0; b < binning.nbins; ++b) {
    field.bin_centers.push_back(binning.center(b));
    field.counts.push_back(support[static_cast<std::size_t>(b)]);
    if (support[static_cast<std::size_t>(b)] > 0 &&
        weight[static_cast<std::size_t>(b)] > Scalar(0)) {
      field.velocities.push_back(weighted_v[static_cast<std::size_t>(b)] /
                                 weight[static_cast<std::size_t>(b)]);
    } else {
      field.velocities.push_back(std::nullopt);
    }
  }
  return field;
}

template <typename Scalar>
VelocityField<Scalar> guidance_velocity_oracle(const PointerState<Scalar>& psi,
                                               Scalar m, int nbins = 21,
                                               Scalar span_stds = Scalar(2)) {
  const Binning<Scalar> binning =
      central_binning(psi.grid(), RealVec<Scalar>(psi.density() *
                                                  psi.grid().spacing_q()),
                      nbins, span_stds);
  return guidance_velocity_oracle(psi, m, binning);
}

/// Mean absolute difference between two fields' velocities over bins defined
/// in both; empty optional when no bin is shared.
template <typename Scalar>
std::optional<Scalar> mean_absolute_deviation(const VelocityField<Scalar>& a,
                                              const VelocityField<Scalar>& b) {
  Scalar sum = 0;
  std::size_t n = 0;
  const std::size_t size = std::min(a.velocities.size(), b.velocities.size());
  for (std::size_t i = 0; i < size; ++i) {
    if (a.velocities[i] && b.velocities[i]) {
      sum += std::abs(*a.velocities[i] - *b.velocities[i]);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / Scalar(n);
}

}  // namespace weaksim
