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

// Finite-dimensional quantum kernel: state vectors, density matrices,
// observables, projection-valued measures, Born probabilities and collapse.
// Everything is a dense Eigen object; dimensions stay small (<= ~64), so
// exactness is preferred over scalability throughout.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "weaksim/errors.hpp"
#include "weaksim/types.hpp"

namespace weaksim {

namespace detail {

template <typename Scalar>
Scalar max_abs_diff(const ComplexMat<Scalar>& a, const ComplexMat<Scalar>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

template <typename Scalar>
bool is_self_adjoint(const ComplexMat<Scalar>& m, Scalar tolerance) {
  return max_abs_diff<Scalar>(m, m.adjoint()) <= tolerance;
}

}  // namespace detail

/// Unit-norm complex coefficient vector over a finite Hilbert space. The
/// global phase is kept as given; derived scalars must not depend on it.
template <typename Scalar = double>
class StateVector {
 public:
  explicit StateVector(ComplexVec<Scalar> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) {
      throw InvalidState("state vector must have positive dimension");
    }
    const Scalar norm_sq = coeffs_.squaredNorm();
    if (std::abs(norm_sq - Scalar(1)) > Scalar(tol::kNorm)) {
      throw InvalidState("state vector is not unit-norm (|norm^2 - 1| = " +
                         std::to_string(std::abs(norm_sq - Scalar(1))) + ")");
    }
  }

  /// Rescales an arbitrary nonzero vector to unit norm.
  static StateVector normalized(const ComplexVec<Scalar>& v) {
    const Scalar n = v.norm();
    if (!(n > Scalar(0))) {
      throw InvalidState("cannot normalize the zero vector");
    }
    return StateVector(ComplexVec<Scalar>(v / n));
  }

  static StateVector basis(Index dim, Index k) {
    ComplexVec<Scalar> v = ComplexVec<Scalar>::Zero(dim);
    v(k) = Complex<Scalar>(1, 0);
    return StateVector(std::move(v));
  }

  Index dim() const { return coeffs_.size(); }
  const ComplexVec<Scalar>& coeffs() const { return coeffs_; }

 private:
  ComplexVec<Scalar> coeffs_;
};

/// Self-adjoint, positive semidefinite, unit-trace matrix.
template <typename Scalar = double>
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMat<Scalar> entries)
      : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
      throw InvalidDensityMatrix("density matrix must be square and nonempty");
    }
    if (!detail::is_self_adjoint<Scalar>(entries_, Scalar(tol::kSelfAdjoint))) {
      throw InvalidDensityMatrix("density matrix is not self-adjoint");
    }
    const Complex<Scalar> tr = entries_.trace();
    if (std::abs(tr - Complex<Scalar>(1, 0)) > Scalar(tol::kNorm)) {
      throw InvalidDensityMatrix("density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMat<Scalar>> solver(
        entries_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < Scalar(tol::kPsdFloor)) {
      throw InvalidDensityMatrix("density matrix has a negative eigenvalue");
    }
  }

  static DensityMatrix from_state(const StateVector<Scalar>& psi) {
    return DensityMatrix(
        ComplexMat<Scalar>(psi.coeffs() * psi.coeffs().adjoint()));
  }

  Index dim() const { return entries_.rows(); }
  const ComplexMat<Scalar>& entries() const { return entries_; }

 private:
  ComplexMat<Scalar> entries_;
};

/// Dense square matrix with its self-adjointness measured once on
/// construction. Inputs that fail the tolerance are reported, never
/// symmetrized.
template <typename Scalar = double>
class Operator {
 public:
  explicit Operator(ComplexMat<Scalar> entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
      throw DimensionMismatch("operator must be square and nonempty");
    }
    self_adjoint_ =
        detail::is_self_adjoint<Scalar>(entries_, Scalar(tol::kSelfAdjoint));
  }

  static Operator identity(Index dim) {
    return Operator(ComplexMat<Scalar>(ComplexMat<Scalar>::Identity(dim, dim)));
  }

  /// Rank-one projector |psi><psi|.
  static Operator projector(const StateVector<Scalar>& psi) {
    return Operator(ComplexMat<Scalar>(psi.coeffs() * psi.coeffs().adjoint()));
  }

  Index dim() const { return entries_.rows(); }
  const ComplexMat<Scalar>& entries() const { return entries_; }
  bool self_adjoint() const { return self_adjoint_; }

 private:
  ComplexMat<Scalar> entries_;
  bool self_adjoint_ = false;
};

template <typename Scalar>
void require_self_adjoint(const Operator<Scalar>& a,
                          const char* context = "operator") {
  if (!a.self_adjoint()) {
    throw NotSelfAdjoint(std::string(context) + " is not self-adjoint");
  }
}

template <typename Scalar>
void require_projector(const Operator<Scalar>& p) {
  require_self_adjoint(p, "projector");
  const ComplexMat<Scalar>& m = p.entries();
  if (detail::max_abs_diff<Scalar>(m * m, m) > Scalar(tol::kSelfAdjoint)) {
    throw NotProjector("operator is not idempotent");
  }
}

/// Projection-valued measure: mutually exclusive projectors summing to the
/// identity, with one real eigenvalue per projector.
template <typename Scalar = double>
struct Pvm {
  std::vector<Operator<Scalar>> projectors;
  std::vector<Scalar> eigenvalues;

  Pvm(std::vector<Operator<Scalar>> projs, std::vector<Scalar> values)
      : projectors(std::move(projs)), eigenvalues(std::move(values)) {
    if (projectors.empty() || projectors.size() != eigenvalues.size()) {
      throw BadPvm("PVM needs matching, nonempty projector/eigenvalue lists");
    }
    const Index d = projectors.front().dim();
    ComplexMat<Scalar> sum = ComplexMat<Scalar>::Zero(d, d);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
      if (projectors[i].dim() != d) {
        throw BadPvm("PVM projectors have mixed dimensions");
      }
      require_projector(projectors[i]);
      for (std::size_t j = i + 1; j < projectors.size(); ++j) {
        const ComplexMat<Scalar> cross =
            projectors[i].entries() * projectors[j].entries();
        if (cross.cwiseAbs().maxCoeff() > Scalar(tol::kSelfAdjoint)) {
          throw BadPvm("PVM projectors are not mutually exclusive");
        }
      }
      sum += projectors[i].entries();
    }
    if (detail::max_abs_diff<Scalar>(
            sum, ComplexMat<Scalar>::Identity(d, d)) >
        Scalar(tol::kSelfAdjoint)) {
      throw BadPvm("PVM does not resolve the identity");
    }
  }

  Index dim() const { return projectors.front().dim(); }
  std::size_t size() const { return projectors.size(); }
};

/// <bra|ket>, conjugate-linear in the first argument.
template <typename Scalar>
Complex<Scalar> inner(const StateVector<Scalar>& bra,
                      const StateVector<Scalar>& ket) {
  if (bra.dim() != ket.dim()) {
    throw DimensionMismatch("inner product of states with different dims");
  }
  return bra.coeffs().dot(ket.coeffs());
}

/// Kronecker product with the left factor outermost:
/// index(i, j) = i * dim_b + j.
template <typename Scalar>
StateVector<Scalar> tensor(const StateVector<Scalar>& a,
                           const StateVector<Scalar>& b) {
  const Index da = a.dim();
  const Index db = b.dim();
  ComplexVec<Scalar> out(da * db);
  for (Index i = 0; i < da; ++i) {
    out.segment(i * db, db) = a.coeffs()(i) * b.coeffs();
  }
  return StateVector<Scalar>(std::move(out));
}

template <typename Scalar>
Operator<Scalar> tensor(const Operator<Scalar>& a, const Operator<Scalar>& b) {
  const Index da = a.dim();
  const Index db = b.dim();
  ComplexMat<Scalar> out(da * db, da * db);
  for (Index i = 0; i < da; ++i) {
    for (Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.entries()(i, j) * b.entries();
    }
  }
  return Operator<Scalar>(std::move(out));
}

template <typename Scalar>
DensityMatrix<Scalar> tensor(const DensityMatrix<Scalar>& a,
                             const DensityMatrix<Scalar>& b) {
  const Index da = a.dim();
  const Index db = b.dim();
  ComplexMat<Scalar> out(da * db, da * db);
  for (Index i = 0; i < da; ++i) {
    for (Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.entries()(i, j) * b.entries();
    }
  }
  return DensityMatrix<Scalar>(std::move(out));
}

/// Traces out every tensor factor except `keep`. `dims` lists the factor
/// dimensions outermost-first and must multiply to rho's dimension.
template <typename Scalar>
DensityMatrix<Scalar> partial_trace(const DensityMatrix<Scalar>& rho,
                                    const std::vector<Index>& dims,
                                    std::size_t keep) {
  if (dims.empty()) {
    throw BadFactorization("factor list is empty");
  }
  Index product = 1;
  for (Index d : dims) {
    if (d < 1) throw BadFactorization("factor dimensions must be >= 1");
    product *= d;
  }
  if (product != rho.dim()) {
    throw BadFactorization("factor dimensions do not multiply to rho's dim");
  }
  if (keep >= dims.size()) {
    throw BadFactorization("keep index is out of range");
  }

  // Strides for mixed-radix flattening with the left factor outermost.
  std::vector<Index> strides(dims.size());
  Index stride = 1;
  for (std::size_t f = dims.size(); f-- > 0;) {
    strides[f] = stride;
    stride *= dims[f];
  }

  const Index dk = dims[keep];
  const Index rest = product / dk;
  ComplexMat<Scalar> out = ComplexMat<Scalar>::Zero(dk, dk);

  // Iterate over the joint index of the traced-out factors.
  for (Index r = 0; r < rest; ++r) {
    Index rem = r;
    Index base = 0;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      if (f == keep) continue;
      const Index v = rem % dims[f];
      rem /= dims[f];
      base += v * strides[f];
    }
    for (Index a = 0; a < dk; ++a) {
      for (Index b = 0; b < dk; ++b) {
        out(a, b) +=
            rho.entries()(base + a * strides[keep], base + b * strides[keep]);
      }
    }
  }
  return DensityMatrix<Scalar>(std::move(out));
}

/// Spectral decomposition into a PVM, merging eigenvalues separated by less
/// than the degeneracy threshold into a single projector.
template <typename Scalar>
Pvm<Scalar> spectral_decompose(const Operator<Scalar>& a) {
  require_self_adjoint(a);
  Eigen::SelfAdjointEigenSolver<ComplexMat<Scalar>> solver(a.entries());
  const RealVec<Scalar>& values = solver.eigenvalues();  // ascending
  const ComplexMat<Scalar>& vectors = solver.eigenvectors();

  std::vector<Operator<Scalar>> projectors;
  std::vector<Scalar> eigenvalues;
  const Index d = a.dim();
  Index start = 0;
  while (start < d) {
    Index stop = start + 1;
    while (stop < d &&
           values(stop) - values(stop - 1) < Scalar(tol::kSpectralMerge)) {
      ++stop;
    }
    ComplexMat<Scalar> proj = ComplexMat<Scalar>::Zero(d, d);
    Scalar value_sum = 0;
    for (Index i = start; i < stop; ++i) {
      proj += vectors.col(i) * vectors.col(i).adjoint();
      value_sum += values(i);
    }
    projectors.emplace_back(std::move(proj));
    eigenvalues.push_back(value_sum / Scalar(stop - start));
    start = stop;
  }
  return Pvm<Scalar>(std::move(projectors), std::move(eigenvalues));
}

template <typename Scalar>
Scalar born_probability(const Operator<Scalar>& p,
                        const StateVector<Scalar>& psi) {
  require_projector(p);
  if (p.dim() != psi.dim()) {
    throw DimensionMismatch("projector and state dims differ");
  }
  return std::real(
      Complex<Scalar>(psi.coeffs().dot(p.entries() * psi.coeffs())));
}

template <typename Scalar>
Scalar born_probability(const Operator<Scalar>& p,
                        const DensityMatrix<Scalar>& rho) {
  require_projector(p);
  if (p.dim() != rho.dim()) {
    throw DimensionMismatch("projector and density matrix dims differ");
  }
  return std::real(Complex<Scalar>((p.entries() * rho.entries()).trace()));
}

template <typename Scalar>
Scalar expectation(const Operator<Scalar>& a, const StateVector<Scalar>& psi) {
  require_self_adjoint(a, "observable");
  if (a.dim() != psi.dim()) {
    throw DimensionMismatch("observable and state dims differ");
  }
  const Complex<Scalar> value = psi.coeffs().dot(a.entries() * psi.coeffs());
  if (std::abs(std::imag(value)) > Scalar(tol::kSelfAdjoint)) {
    throw NotSelfAdjoint("expectation has a non-negligible imaginary part");
  }
  return std::real(value);
}

template <typename Scalar>
Scalar expectation(const Operator<Scalar>& a, const DensityMatrix<Scalar>& rho) {
  require_self_adjoint(a, "observable");
  if (a.dim() != rho.dim()) {
    throw DimensionMismatch("observable and density matrix dims differ");
  }
  const Complex<Scalar> value = (a.entries() * rho.entries()).trace();
  if (std::abs(std::imag(value)) > Scalar(tol::kSelfAdjoint)) {
    throw NotSelfAdjoint("expectation has a non-negligible imaginary part");
  }
  return std::real(value);
}

/// Projects onto the outcome subspace and renormalizes.
template <typename Scalar>
StateVector<Scalar> collapse(const Operator<Scalar>& p,
                             const StateVector<Scalar>& psi) {
  const Scalar prob = born_probability(p, psi);
  if (prob <= Scalar(tol::kZeroProbability)) {
    throw ZeroProbabilityBranch("collapse onto a zero-probability branch");
  }
  return StateVector<Scalar>(
      ComplexVec<Scalar>((p.entries() * psi.coeffs()) / std::sqrt(prob)));
}

template <typename Scalar>
DensityMatrix<Scalar> collapse(const Operator<Scalar>& p,
                               const DensityMatrix<Scalar>& rho) {
  const Scalar prob = born_probability(p, rho);
  if (prob <= Scalar(tol::kZeroProbability)) {
    throw ZeroProbabilityBranch("collapse onto a zero-probability branch");
  }
  return DensityMatrix<Scalar>(
      ComplexMat<Scalar>(p.entries() * rho.entries() * p.entries() / prob));
}

// Qubit observables used by the CLI presets and throughout the tests.

template <typename Scalar = double>
Operator<Scalar> sigma_x() {
  ComplexMat<Scalar> m(2, 2);
  m << Complex<Scalar>(0, 0), Complex<Scalar>(1, 0),  //
      Complex<Scalar>(1, 0), Complex<Scalar>(0, 0);
  return Operator<Scalar>(std::move(m));
}

template <typename Scalar = double>
Operator<Scalar> sigma_y() {
  ComplexMat<Scalar> m(2, 2);
  m << Complex<Scalar>(0, 0), Complex<Scalar>(0, -1),  //
      Complex<Scalar>(0, 1), Complex<Scalar>(0, 0);
  return Operator<Scalar>(std::move(m));
}

template <typename Scalar = double>
Operator<Scalar> sigma_z() {
  ComplexMat<Scalar> m(2, 2);
  m << Complex<Scalar>(1, 0), Complex<Scalar>(0, 0),  //
      Complex<Scalar>(0, 0), Complex<Scalar>(-1, 0);
  return Operator<Scalar>(std::move(m));
}

}  // namespace weaksim
