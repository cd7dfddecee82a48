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

// Weak-measurement-plus-post-selection protocol with a Gaussian pointer.
//
// The impulsive coupling -g(t) q A integrates to the unitary e^{i q A / hbar},
// which is applied exactly through the spectral decomposition of A: the
// first-order (weak) approximation is never baked in, so its error is
// observable (see first_order_bias). After post-selecting the system on
// |post>, the pointer's momentum distribution is centered near Re A_w and its
// coordinate distribution near -2 sigma_q^2 Im A_w / hbar.
//
// Monte Carlo trials use per-trial Bernoulli post-selection with probability
// equal to the exact success probability, followed by one readout drawn from
// the exact conditional pointer distribution; the trial statistics match a
// simulation of the full joint outcome. Expect n_postselected to concentrate
// around n_attempts * success_prob.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "weaksim/errors.hpp"
#include "weaksim/pointer.hpp"
#include "weaksim/qkernel.hpp"
#include "weaksim/rng.hpp"
#include "weaksim/stats.hpp"
#include "weaksim/types.hpp"
#include "weaksim/weakvalue.hpp"

namespace weaksim {

/// Entangled system-pointer state; amplitudes(i, j) multiplies
/// |system basis i> |grid point j>.
template <typename Scalar = double>
class JointState {
 public:
  JointState(Index sys_dim, Grid<Scalar> grid, ComplexMat<Scalar> amplitudes,
             Representation rep)
      : sys_dim_(sys_dim),
        grid_(grid),
        amplitudes_(std::move(amplitudes)),
        rep_(rep) {
    if (amplitudes_.rows() != sys_dim_ || amplitudes_.cols() != grid_.n) {
      throw DimensionMismatch("joint amplitudes do not match system/grid dims");
    }
    const Scalar dx = rep_ == Representation::coordinate ? grid_.spacing_q()
                                                         : grid_.spacing_p();
    const Scalar norm = amplitudes_.squaredNorm() * dx;
    if (std::abs(norm - Scalar(1)) > Scalar(tol::kGridNorm)) {
      throw InvalidState("joint state norm differs from 1 by " +
                         std::to_string(std::abs(norm - Scalar(1))));
    }
  }

  Index sys_dim() const { return sys_dim_; }
  const Grid<Scalar>& grid() const { return grid_; }
  const ComplexMat<Scalar>& amplitudes() const { return amplitudes_; }
  Representation representation() const { return rep_; }

 private:
  Index sys_dim_;
  Grid<Scalar> grid_;
  ComplexMat<Scalar> amplitudes_;
  Representation rep_;
};

/// Applies the exact coupling unitary: each (eigencomponent a, grid point q)
/// amplitude is multiplied by e^{i q a / hbar}.
template <typename Scalar>
JointState<Scalar> couple(const StateVector<Scalar>& sys,
                          const Operator<Scalar>& a,
                          const PointerState<Scalar>& ps) {
  require_self_adjoint(a, "coupled observable");
  if (a.dim() != sys.dim()) {
    throw DimensionMismatch("couple: observable and system dims differ");
  }
  if (ps.representation() != Representation::coordinate) {
    throw InvalidState("couple requires the pointer in coordinate form");
  }
  const Grid<Scalar>& grid = ps.grid();
  const Pvm<Scalar> pvm = spectral_decompose(a);
  ComplexMat<Scalar> amplitudes = ComplexMat<Scalar>::Zero(sys.dim(), grid.n);
  for (std::size_t m = 0; m < pvm.size(); ++m) {
    const ComplexVec<Scalar> component =
        pvm.projectors[m].entries() * sys.coeffs();
    const Scalar eigenvalue = pvm.eigenvalues[m];
    ComplexVec<Scalar> row(grid.n);
    for (Index j = 0; j < grid.n; ++j) {
      const Scalar phase = grid.coordinate(j) * eigenvalue / grid.hbar;
      row(j) = ps.amplitudes()(j) *
               Complex<Scalar>(std::cos(phase), std::sin(phase));
    }
    amplitudes.noalias() += component * row.transpose();
  }
  return JointState<Scalar>(sys.dim(), grid, std::move(amplitudes),
                            Representation::coordinate);
}

/// Projects the system factor onto |post> and renormalizes the pointer.
/// Returns the conditional pointer state and the success probability.
template <typename Scalar>
std::pair<PointerState<Scalar>, Scalar> post_select(
    const JointState<Scalar>& js, const StateVector<Scalar>& post) {
  if (post.dim() != js.sys_dim()) {
    throw DimensionMismatch("post_select: post state dim differs from system");
  }
  const ComplexVec<Scalar> reduced =
      (post.coeffs().adjoint() * js.amplitudes()).transpose();
  const Scalar dx = js.representation() == Representation::coordinate
                        ? js.grid().spacing_q()
                        : js.grid().spacing_p();
  const Scalar success = reduced.squaredNorm() * dx;
  if (success < Scalar(tol::kZeroProbability)) {
    throw ZeroPostSelectionProbability(
        "post-selection succeeds with probability " + std::to_string(success));
  }
  return {PointerState<Scalar>(js.grid(),
                               ComplexVec<Scalar>(reduced / std::sqrt(success)),
                               js.representation()),
          success};
}

template <typename Scalar = double>
struct ProtocolOptions {
  Scalar hbar = Scalar(kDefaultHbar);
  Index grid_n = 1024;
  Scalar grid_length = 0;  // 0 selects 16 * sigma_q
  std::uint64_t batch_size = 1 << 16;
  unsigned threads = 1;
};

template <typename Scalar = double>
struct ProtocolReport {
  Complex<Scalar> exact_weak_value{};
  WeakValueResult<Scalar> estimate{};
  Scalar success_prob = 0;
  std::uint64_t n_attempts = 0;
  std::uint64_t n_postselected = 0;
  // Exact means of the post-selected pointer distribution on the grid.
  Scalar pointer_mean_p = 0;
  Scalar pointer_mean_q = 0;
  // First-order predictions: (Re A_w, -2 sigma_q^2 Im A_w / hbar).
  Scalar predicted_mean_p = 0;
  Scalar predicted_mean_q = 0;
  Representation readout = Representation::momentum;
  Scalar sigma_q = 0;
  std::uint64_t seed = 0;
};

namespace detail {

template <typename Scalar>
Grid<Scalar> protocol_grid(Scalar sigma_q, const ProtocolOptions<Scalar>& opts) {
  const Scalar length =
      opts.grid_length > Scalar(0) ? opts.grid_length : Scalar(16) * sigma_q;
  return Grid<Scalar>(opts.grid_n, length, opts.hbar);
}

struct BatchStats {
  std::uint64_t attempts = 0;
  SampleMoments readouts;
};

/// Runs fn(batch_index) for every batch and returns the results indexed by
/// batch, independent of how work was scheduled across threads.
template <typename Fn>
auto run_batches(std::uint64_t n_batches, unsigned threads, Fn&& fn)
    -> std::vector<decltype(fn(std::uint64_t{}))> {
  using Result = decltype(fn(std::uint64_t{}));
  std::vector<Result> results(n_batches);
  if (threads <= 1 || n_batches <= 1) {
    for (std::uint64_t b = 0; b < n_batches; ++b) results[b] = fn(b);
    return results;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_batches) return;
      results[b] = fn(b);
    }
  };
  std::vector<std::future<void>> futures;
  const unsigned n_workers =
      static_cast<unsigned>(std::min<std::uint64_t>(threads, n_batches));
  futures.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) {
    futures.push_back(std::async(std::launch::async, worker));
  }
  for (auto& f : futures) f.get();
  return results;
}

}  // namespace detail

/// Full protocol: exact coupling and post-selection, then n_attempts
/// independent Bernoulli/post-selected-readout trials. The p readout
/// estimates Re A_w directly from the sample mean; the q readout estimates
/// Im A_w as -hbar * mean(q) / (2 sigma_q^2). Run once per readout.
template <typename Scalar>
ProtocolReport<Scalar> run_protocol(const Operator<Scalar>& a,
                                    const StateVector<Scalar>& pre,
                                    const StateVector<Scalar>& post,
                                    Scalar sigma_q, std::uint64_t n_attempts,
                                    std::uint64_t seed, Representation readout,
                                    const ProtocolOptions<Scalar>& opts = {}) {
  if (n_attempts < 1) {
    throw InvalidState("run_protocol: n_attempts must be >= 1");
  }
  const Grid<Scalar> grid = detail::protocol_grid(sigma_q, opts);
  const PointerState<Scalar> pointer = gaussian_pointer(grid, sigma_q);
  const WeakValueResult<Scalar> exact = weak_value(a, pre, post);

  const JointState<Scalar> js = couple(pre, a, pointer);
  auto [selected_q, success] = post_select(js, post);
  const PointerState<Scalar> selected_p = to_momentum(selected_q);

  ProtocolReport<Scalar> report;
  report.exact_weak_value = exact.value;
  report.success_prob = success;
  report.n_attempts = n_attempts;
  report.pointer_mean_q = mean(selected_q);
  report.pointer_mean_p = mean(selected_p);
  report.predicted_mean_p = std::real(exact.value);
  report.predicted_mean_q = -Scalar(2) * sigma_q * sigma_q *
                            std::imag(exact.value) / grid.hbar;
  report.readout = readout;
  report.sigma_q = sigma_q;
  report.seed = seed;

  const PointerState<Scalar>& readout_state =
      readout == Representation::momentum ? selected_p : selected_q;
  const RealVec<Scalar> density = readout_state.density();
  std::vector<double> weights(density.size());
  for (Index i = 0; i < density.size(); ++i) {
    weights[i] = static_cast<double>(density(i));
  }
  const DiscreteSampler sampler(weights);

  const std::uint64_t batch_size = std::max<std::uint64_t>(1, opts.batch_size);
  const std::uint64_t n_batches = (n_attempts + batch_size - 1) / batch_size;
  const double success_d = static_cast<double>(success);

  auto run_batch = [&](std::uint64_t b) {
    detail::BatchStats stats;
    stats.attempts = std::min(batch_size, n_attempts - b * batch_size);
    auto engine = make_engine(seed, b);
    for (std::uint64_t t = 0; t < stats.attempts; ++t) {
      if (uniform01(engine) < success_d) {
        const Index idx = static_cast<Index>(sampler.draw(engine));
        stats.readouts.add(static_cast<double>(readout_state.axis_value(idx)));
      }
    }
    return stats;
  };

  SampleMoments merged;
  for (const auto& stats :
       detail::run_batches(n_batches, opts.threads, run_batch)) {
    merged.merge(stats.readouts);
  }

  report.n_postselected = merged.count;
  if (merged.count == 0) {
    throw ZeroPostSelectionProbability(
        "no trials survived post-selection (success_prob = " +
        std::to_string(success) + ")");
  }

  WeakValueResult<Scalar> estimate;
  estimate.overlap = exact.overlap;
  estimate.method = Method::monte_carlo;
  if (readout == Representation::momentum) {
    estimate.value = Complex<Scalar>(Scalar(merged.mean()), 0);
    if (merged.count > 1) estimate.stderr_re = Scalar(merged.std_error());
  } else {
    const Scalar scale = grid.hbar / (Scalar(2) * sigma_q * sigma_q);
    estimate.value = Complex<Scalar>(0, -scale * Scalar(merged.mean()));
    if (merged.count > 1) estimate.stderr_im = scale * Scalar(merged.std_error());
  }
  report.estimate = estimate;
  return report;
}

/// |exact post-selected momentum mean - Re A_w|, from the grid state alone.
/// Quantifies the error of the first-order (weak) approximation at finite
/// sigma_q; it shrinks as sigma_q shrinks.
template <typename Scalar>
Scalar first_order_bias(const Operator<Scalar>& a, const StateVector<Scalar>& pre,
                        const StateVector<Scalar>& post, Scalar sigma_q,
                        const ProtocolOptions<Scalar>& opts = {}) {
  const Grid<Scalar> grid = detail::protocol_grid(sigma_q, opts);
  const PointerState<Scalar> pointer = gaussian_pointer(grid, sigma_q);
  const WeakValueResult<Scalar> exact = weak_value(a, pre, post);
  const JointState<Scalar> js = couple(pre, a, pointer);
  auto [selected, success] = post_select(js, post);
  (void)success;
  return std::abs(mean(to_momentum(selected)) - std::real(exact.value));
}

/// Several observables coupled in sequence to their own pointers, one
/// post-selection at the end, every pointer read out exactly.
///
/// The joint pointer wavefunction is sum_m c_m prod_alpha f_{alpha,m_alpha}
/// with c_m = <post| P_{k,m_k} ... P_{1,m_1} |pre> and
/// f_{alpha,m}(q) = e^{i q a_{alpha,m} / hbar} phi_alpha(q), so every marginal
/// moment reduces to Gram and moment matrices of the f's; nothing is sampled
/// or truncated. Reported values pair the exact momentum mean with the exact
/// coordinate mean via the first-order dictionary
/// (Re ~ mean_p, Im ~ -hbar mean_q / (2 sigma^2)).
template <typename Scalar>
std::vector<WeakValueResult<Scalar>> multi_weak_values(
    const std::vector<Operator<Scalar>>& observables,
    const StateVector<Scalar>& pre, const StateVector<Scalar>& post,
    const std::vector<Scalar>& sigmas, const ProtocolOptions<Scalar>& opts = {}) {
  if (observables.size() != sigmas.size()) {
    throw DimensionMismatch("multi_weak_values: one sigma per observable");
  }
  if (observables.empty()) return {};
  const std::size_t n_obs = observables.size();
  for (const auto& a : observables) {
    require_self_adjoint(a, "coupled observable");
    if (a.dim() != pre.dim()) {
      throw DimensionMismatch("multi_weak_values: observable/state dims differ");
    }
  }
  const Complex<Scalar> overlap =
      checked_overlap(pre, post, Scalar(tol::kOverlap));

  // Spectral data and pointer profiles per observable.
  std::vector<Pvm<Scalar>> pvms;
  pvms.reserve(n_obs);
  std::size_t total = 1;
  for (const auto& a : observables) {
    pvms.push_back(spectral_decompose(a));
    total *= pvms.back().size();
    if (total > 4096) {
      throw InvalidState("multi_weak_values: too many spectral components");
    }
  }

  struct PointerData {
    std::vector<ComplexMat<Scalar>> moments;  // gram, q-moment, p-moment
  };
  std::vector<PointerData> pointers(n_obs);
  for (std::size_t alpha = 0; alpha < n_obs; ++alpha) {
    const Grid<Scalar> grid = detail::protocol_grid(sigmas[alpha], opts);
    const PointerState<Scalar> phi = gaussian_pointer(grid, sigmas[alpha]);
    const std::size_t d = pvms[alpha].size();
    std::vector<ComplexVec<Scalar>> f_q(d), f_p(d);
    for (std::size_t m = 0; m < d; ++m) {
      ComplexVec<Scalar> f(grid.n);
      for (Index j = 0; j < grid.n; ++j) {
        const Scalar phase =
            grid.coordinate(j) * pvms[alpha].eigenvalues[m] / grid.hbar;
        f(j) = phi.amplitudes()(j) *
               Complex<Scalar>(std::cos(phase), std::sin(phase));
      }
      f_p[m] = detail::dft_to_momentum(grid, f);
      f_q[m] = std::move(f);
    }
    ComplexMat<Scalar> gram(d, d), q_moment(d, d), p_moment(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        Complex<Scalar> g{}, qm{}, pm{};
        for (Index j = 0; j < grid.n; ++j) {
          const Complex<Scalar> w = std::conj(f_q[r](j)) * f_q[c](j);
          g += w;
          qm += w * grid.coordinate(j);
        }
        for (Index j = 0; j < grid.n; ++j) {
          pm += std::conj(f_p[r](j)) * f_p[c](j) * grid.momentum(j);
        }
        gram(r, c) = g * grid.spacing_q();
        q_moment(r, c) = qm * grid.spacing_q();
        p_moment(r, c) = pm * grid.spacing_p();
      }
    }
    pointers[alpha].moments = {std::move(gram), std::move(q_moment),
                               std::move(p_moment)};
  }

  // Coefficient tensor over the multi-index of spectral components,
  // flattened with the first observable's index fastest.
  std::vector<Complex<Scalar>> coeff(total);
  std::vector<std::size_t> index(n_obs, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    ComplexVec<Scalar> v = pre.coeffs();
    for (std::size_t alpha = 0; alpha < n_obs; ++alpha) {
      v = pvms[alpha].projectors[index[alpha]].entries() * v;
    }
    coeff[flat] = post.coeffs().dot(v);
    for (std::size_t alpha = 0; alpha < n_obs; ++alpha) {
      if (++index[alpha] < pvms[alpha].size()) break;
      index[alpha] = 0;
    }
  }

  const auto decode = [&](std::size_t flat, std::vector<std::size_t>& out) {
    for (std::size_t alpha = 0; alpha < n_obs; ++alpha) {
      out[alpha] = flat % pvms[alpha].size();
      flat /= pvms[alpha].size();
    }
  };

  // Accumulate the normalizer and each pointer's two moments in one sweep
  // over coefficient pairs.
  Complex<Scalar> normalizer{};
  std::vector<Complex<Scalar>> q_sums(n_obs), p_sums(n_obs);
  std::vector<std::size_t> mi(n_obs), mj(n_obs);
  std::vector<Complex<Scalar>> gram_factors(n_obs);
  for (std::size_t i = 0; i < total; ++i) {
    if (coeff[i] == Complex<Scalar>{}) continue;
    decode(i, mi);
    for (std::size_t j = 0; j < total; ++j) {
      if (coeff[j] == Complex<Scalar>{}) continue;
      decode(j, mj);
      const Complex<Scalar> pair_weight = coeff[i] * std::conj(coeff[j]);
      Complex<Scalar> gram_all(1, 0);
      for (std::size_t alpha = 0; alpha < n_obs; ++alpha) {
        gram_factors[alpha] = pointers[alpha].moments[0](mj[alpha], mi[alpha]);
        gram_all *= gram_factors[alpha];
      }
      normalizer += pair_weight * gram_all;
      for (std::size_t alpha = 0; alpha < n_obs; ++alpha) {
        Complex<Scalar> rest(1, 0);
        for (std::size_t beta = 0; beta < n_obs; ++beta) {
          if (beta != alpha) rest *= gram_factors[beta];
        }
        q_sums[alpha] +=
            pair_weight * rest * pointers[alpha].moments[1](mj[alpha], mi[alpha]);
        p_sums[alpha] +=
            pair_weight * rest * pointers[alpha].moments[2](mj[alpha], mi[alpha]);
      }
    }
  }

  const Scalar success = std::real(normalizer);
  if (!(success > Scalar(tol::kZeroProbability))) {
    throw ZeroPostSelectionProbability(
        "multi_weak_values: post-selection probability is zero");
  }

  std::vector<WeakValueResult<Scalar>> results(n_obs);
  for (std::size_t alpha = 0; alpha < n_obs; ++alpha) {
    const Scalar mean_q = std::real(q_sums[alpha]) / success;
    const Scalar mean_p = std::real(p_sums[alpha]) / success;
    results[alpha].value = Complex<Scalar>(
        mean_p, -opts.hbar * mean_q / (Scalar(2) * sigmas[alpha] * sigmas[alpha]));
    results[alpha].overlap = overlap;
    results[alpha].method = Method::pointer_exact;
  }
  return results;
}

}  // namespace weaksim
