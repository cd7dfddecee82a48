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

// Discretized 1-D wavefunctions on a periodic grid.
//
// Conventions, fixed once for the whole library:
//   coordinates  q_j = (j - n/2) * dq,          dq = L / n
//   momenta      p_k = 2*pi*hbar*k / L,          k = r - n/2 (r = 0..n-1)
//   forward map  phi(p_k) = dq / sqrt(2*pi*hbar) * sum_j psi_j e^{-i p_k q_j / hbar}
// which is exactly unitary between the normalizations
//   sum_j |psi_j|^2 dq = 1   and   sum_k |phi_k|^2 dp = 1,  dp = 2*pi*hbar / L.
// A Gaussian of coordinate width sigma_q maps to one of momentum width
// hbar / (2 sigma_q).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "weaksim/errors.hpp"
#include "weaksim/rng.hpp"
#include "weaksim/types.hpp"

namespace weaksim {

template <typename Scalar = double>
struct Grid {
  Index n;        // number of points, power of two, >= 64
  Scalar length;  // L, coordinate extent
  Scalar hbar;

  Grid(Index n_points, Scalar len, Scalar hbar_value = Scalar(kDefaultHbar))
      : n(n_points), length(len), hbar(hbar_value) {
    if (n < 64 || (n & (n - 1)) != 0) {
      throw GridTooCoarse("grid size must be a power of two >= 64");
    }
    if (!(length > Scalar(0)) || !(hbar > Scalar(0))) {
      throw GridTooSmall("grid length and hbar must be positive");
    }
  }

  Scalar spacing_q() const { return length / Scalar(n); }
  Scalar spacing_p() const {
    return Scalar(2) * std::numbers::pi_v<Scalar> * hbar / length;
  }
  Scalar coordinate(Index j) const { return Scalar(j - n / 2) * spacing_q(); }
  Scalar momentum(Index r) const { return Scalar(r - n / 2) * spacing_p(); }

  bool operator==(const Grid& other) const {
    return n == other.n && length == other.length && hbar == other.hbar;
  }
};

enum class Representation { coordinate, momentum };

template <typename Scalar = double>
class PointerState {
 public:
  PointerState(Grid<Scalar> grid, ComplexVec<Scalar> amplitudes,
               Representation rep)
      : grid_(grid), amplitudes_(std::move(amplitudes)), rep_(rep) {
    if (amplitudes_.size() != grid_.n) {
      throw DimensionMismatch("pointer amplitudes do not match the grid");
    }
    const Scalar norm = amplitudes_.squaredNorm() * spacing();
    if (std::abs(norm - Scalar(1)) > Scalar(tol::kGridNorm)) {
      throw InvalidState("pointer state norm differs from 1 by " +
                         std::to_string(std::abs(norm - Scalar(1))));
    }
  }

  static PointerState normalized(Grid<Scalar> grid, const ComplexVec<Scalar>& v,
                                 Representation rep) {
    const Scalar dx = rep == Representation::coordinate
                          ? grid.spacing_q()
                          : grid.spacing_p();
    const Scalar norm = std::sqrt(v.squaredNorm() * dx);
    if (!(norm > Scalar(0))) {
      throw InvalidState("cannot normalize a zero pointer state");
    }
    return PointerState(grid, ComplexVec<Scalar>(v / norm), rep);
  }

  const Grid<Scalar>& grid() const { return grid_; }
  const ComplexVec<Scalar>& amplitudes() const { return amplitudes_; }
  Representation representation() const { return rep_; }

  Scalar spacing() const {
    return rep_ == Representation::coordinate ? grid_.spacing_q()
                                              : grid_.spacing_p();
  }
  Scalar axis_value(Index i) const {
    return rep_ == Representation::coordinate ? grid_.coordinate(i)
                                              : grid_.momentum(i);
  }

  /// |psi_i|^2, a density against the active axis (integrates to 1 with the
  /// active spacing).
  RealVec<Scalar> density() const { return amplitudes_.cwiseAbs2(); }

 private:
  Grid<Scalar> grid_;
  ComplexVec<Scalar> amplitudes_;
  Representation rep_;
};

template <typename Scalar>
Scalar mean(const PointerState<Scalar>& ps) {
  const RealVec<Scalar> d = ps.density();
  Scalar m = 0;
  for (Index i = 0; i < d.size(); ++i) m += ps.axis_value(i) * d(i);
  return m * ps.spacing();
}

template <typename Scalar>
Scalar std_dev(const PointerState<Scalar>& ps) {
  const RealVec<Scalar> d = ps.density();
  const Scalar m = mean(ps);
  Scalar v = 0;
  for (Index i = 0; i < d.size(); ++i) {
    const Scalar x = ps.axis_value(i) - m;
    v += x * x * d(i);
  }
  return std::sqrt(v * ps.spacing());
}

/// Gaussian centered at q = 0 with coordinate standard deviation sigma_q,
/// normalized on the grid. Rejects grids that cannot resolve the profile or
/// hold its tails.
template <typename Scalar>
PointerState<Scalar> gaussian_pointer(const Grid<Scalar>& grid, Scalar sigma_q) {
  if (!(sigma_q > Scalar(2) * grid.spacing_q())) {
    throw GridTooCoarse("sigma_q must exceed two grid spacings");
  }
  if (!(Scalar(4) * sigma_q < grid.length / Scalar(2))) {
    throw GridTooSmall("grid length too small: need 4*sigma_q < L/2");
  }
  ComplexVec<Scalar> amp(grid.n);
  for (Index j = 0; j < grid.n; ++j) {
    const Scalar q = grid.coordinate(j);
    amp(j) = Complex<Scalar>(std::exp(-q * q / (Scalar(4) * sigma_q * sigma_q)), 0);
  }
  return PointerState<Scalar>::normalized(grid, amp, Representation::coordinate);
}

namespace detail {

// phi_r = pref * (-1)^(r + n/2) * F_{(r + n/2) mod n}, F = forward DFT.
template <typename Scalar>
ComplexVec<Scalar> dft_to_momentum(const Grid<Scalar>& grid,
                                   const ComplexVec<Scalar>& psi) {
  const Index n = grid.n;
  Eigen::FFT<Scalar> fft;
  ComplexVec<Scalar> f(n);
  fft.fwd(f, psi);
  const Scalar pref = grid.spacing_q() /
                      std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * grid.hbar);
  ComplexVec<Scalar> phi(n);
  for (Index r = 0; r < n; ++r) {
    const Index m = (r + n / 2) % n;
    const Scalar sign = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
    phi(r) = pref * sign * f(m);
  }
  return phi;
}

template <typename Scalar>
ComplexVec<Scalar> dft_to_coordinate(const Grid<Scalar>& grid,
                                     const ComplexVec<Scalar>& phi) {
  const Index n = grid.n;
  ComplexVec<Scalar> g(n);
  for (Index r = 0; r < n; ++r) {
    const Index m = (r + n / 2) % n;
    const Scalar sign = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
    g(m) = sign * phi(r);
  }
  Eigen::FFT<Scalar> fft;
  ComplexVec<Scalar> psi(n);
  fft.inv(psi, g);  // includes the 1/n factor
  const Scalar pref = Scalar(n) * grid.spacing_p() /
                      std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * grid.hbar);
  return ComplexVec<Scalar>(pref * psi);
}

}  // namespace detail

template <typename Scalar>
PointerState<Scalar> to_momentum(const PointerState<Scalar>& ps) {
  if (ps.representation() == Representation::momentum) return ps;
  return PointerState<Scalar>(ps.grid(),
                              detail::dft_to_momentum(ps.grid(), ps.amplitudes()),
                              Representation::momentum);
}

template <typename Scalar>
PointerState<Scalar> to_coordinate(const PointerState<Scalar>& ps) {
  if (ps.representation() == Representation::coordinate) return ps;
  return PointerState<Scalar>(
      ps.grid(), detail::dft_to_coordinate(ps.grid(), ps.amplitudes()),
      Representation::coordinate);
}

/// i.i.d. draws from the discrete distribution |psi_i|^2 * spacing over the
/// grid points of the active representation. No interpolation between grid
/// points is attempted; the discretization bias is O(spacing).
template <typename Scalar>
std::vector<Scalar> sample(const PointerState<Scalar>& ps, std::uint64_t seed,
                           std::size_t count) {
  const RealVec<Scalar> d = ps.density();
  std::vector<double> weights(d.size());
  for (Index i = 0; i < d.size(); ++i) weights[i] = static_cast<double>(d(i));
  const DiscreteSampler sampler(weights);
  auto engine = make_engine(seed);
  std::vector<Scalar> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(ps.axis_value(static_cast<Index>(sampler.draw(engine))));
  }
  return out;
}

/// Gaussian packet of width sigma_x centered at x0 carrying momentum
/// hbar * k, in coordinate form.
template <typename Scalar>
PointerState<Scalar> gaussian_packet(const Grid<Scalar>& grid, Scalar sigma_x,
                                     Scalar x0, Scalar k) {
  ComplexVec<Scalar> amp(grid.n);
  for (Index j = 0; j < grid.n; ++j) {
    const Scalar x = grid.coordinate(j);
    const Scalar envelope =
        std::exp(-(x - x0) * (x - x0) / (Scalar(4) * sigma_x * sigma_x));
    const Scalar phase = k * x;
    amp(j) = envelope * Complex<Scalar>(std::cos(phase), std::sin(phase));
  }
  return PointerState<Scalar>::normalized(grid, amp, Representation::coordinate);
}

/// Free-particle evolution: multiplies momentum amplitudes by
/// e^{-i p^2 t / (2 m hbar)}. The returned state keeps the input
/// representation.
template <typename Scalar>
PointerState<Scalar> free_evolve(const PointerState<Scalar>& ps, Scalar t,
                                 Scalar m) {
  if (!(m > Scalar(0))) {
    throw InvalidState("free_evolve: mass must be positive");
  }
  const bool was_coordinate = ps.representation() == Representation::coordinate;
  PointerState<Scalar> mom = to_momentum(ps);
  ComplexVec<Scalar> amp = mom.amplitudes();
  const Grid<Scalar>& grid = ps.grid();
  for (Index r = 0; r < grid.n; ++r) {
    const Scalar p = grid.momentum(r);
    const Scalar phase = -p * p * t / (Scalar(2) * m * grid.hbar);
    amp(r) *= Complex<Scalar>(std::cos(phase), std::sin(phase));
  }
  PointerState<Scalar> evolved(grid, std::move(amp), Representation::momentum);
  return was_coordinate ? to_coordinate(evolved) : evolved;
}

}  // namespace weaksim
