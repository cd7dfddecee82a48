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

// Weak values between a pre-selected and a post-selected pure state:
// the defining ratio <post|A|pre> / <post|pre>, the exact extraction through
// weak-operator expectation values, and the projector identities.

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weaksim/errors.hpp"
#include "weaksim/qkernel.hpp"
#include "weaksim/types.hpp"

namespace weaksim {

enum class Method { direct, weak_operator, monte_carlo, pointer_exact };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::weak_operator: return "weak-operator";
    case Method::monte_carlo: return "monte-carlo";
    case Method::pointer_exact: return "pointer-exact";
  }
  return "unknown";
}

template <typename Scalar = double>
struct WeakValueResult {
  Complex<Scalar> value{};
  Complex<Scalar> overlap{};  // <post|pre>
  Method method = Method::direct;
  std::optional<Scalar> stderr_re;
  std::optional<Scalar> stderr_im;
};

template <typename Scalar>
Complex<Scalar> checked_overlap(const StateVector<Scalar>& pre,
                                const StateVector<Scalar>& post,
                                Scalar epsilon_overlap) {
  const Complex<Scalar> overlap = inner(post, pre);
  if (std::abs(overlap) < epsilon_overlap) {
    throw OverlapTooSmall("|<post|pre>| = " +
                          std::to_string(std::abs(overlap)) +
                          " is below the configured threshold; the weak value "
                          "is undefined for (near-)orthogonal selections");
  }
  return overlap;
}

/// The defining ratio. Invariant under independent global phases of both
/// states; reduces to the expectation value for post == pre.
template <typename Scalar>
WeakValueResult<Scalar> weak_value(const Operator<Scalar>& a,
                                   const StateVector<Scalar>& pre,
                                   const StateVector<Scalar>& post,
                                   Scalar epsilon_overlap = Scalar(tol::kOverlap)) {
  require_self_adjoint(a, "observable");
  if (a.dim() != pre.dim() || pre.dim() != post.dim()) {
    throw DimensionMismatch("weak_value: operator/state dims differ");
  }
  const Complex<Scalar> overlap = checked_overlap(pre, post, epsilon_overlap);
  const Complex<Scalar> numerator = post.coeffs().dot(a.entries() * pre.coeffs());
  WeakValueResult<Scalar> result;
  result.value = numerator / overlap;
  result.overlap = overlap;
  result.method = Method::direct;
  return result;
}

/// E(z) = (1 + zA) |psi><psi| (1 + conj(z)A). Self-adjoint and positive
/// semidefinite for every complex z.
template <typename Scalar>
Operator<Scalar> weak_operator(const Operator<Scalar>& a,
                               const StateVector<Scalar>& psi,
                               Complex<Scalar> z) {
  require_self_adjoint(a, "observable");
  if (a.dim() != psi.dim()) {
    throw DimensionMismatch("weak_operator: operator/state dims differ");
  }
  const Index d = a.dim();
  const ComplexMat<Scalar> left =
      ComplexMat<Scalar>::Identity(d, d) + z * a.entries();
  const ComplexVec<Scalar> v = left * psi.coeffs();
  return Operator<Scalar>(ComplexMat<Scalar>(v * v.adjoint()));
}

/// Recovers the weak value exactly from the four weak-operator expectation
/// values at z in {1, -1, i, -i}, all evaluated in the post state:
///   Re = <E(1) - E(-1)> / (4 |<post|pre>|^2)
///   Im = <E(-i) - E(i)> / (4 |<post|pre>|^2)
/// Pure matrix algebra; no sampling is involved.
template <typename Scalar>
WeakValueResult<Scalar> extract_via_weak_operators(
    const Operator<Scalar>& a, const StateVector<Scalar>& pre,
    const StateVector<Scalar>& post,
    Scalar epsilon_overlap = Scalar(tol::kOverlap)) {
  require_self_adjoint(a, "observable");
  const Complex<Scalar> overlap = checked_overlap(pre, post, epsilon_overlap);
  const Scalar overlap_sq = std::norm(overlap);
  if (overlap_sq < epsilon_overlap * epsilon_overlap) {
    throw OverlapTooSmall("|<post|pre>|^2 below threshold");
  }

  const auto expect_in_post = [&](Complex<Scalar> z) {
    return expectation(weak_operator(a, pre, z), post);
  };
  const Scalar re = (expect_in_post(Complex<Scalar>(1, 0)) -
                     expect_in_post(Complex<Scalar>(-1, 0))) /
                    (Scalar(4) * overlap_sq);
  const Scalar im = (expect_in_post(Complex<Scalar>(0, -1)) -
                     expect_in_post(Complex<Scalar>(0, 1))) /
                    (Scalar(4) * overlap_sq);

  WeakValueResult<Scalar> result;
  result.value = Complex<Scalar>(re, im);
  result.overlap = overlap;
  result.method = Method::weak_operator;
  return result;
}

/// The self-adjoint pair ((A P + P A)/2, (A P - P A)/2i) with P = |psi><psi|.
/// Their expectation values in the post state, divided by |<post|pre>|^2,
/// give Re and Im of the weak value.
template <typename Scalar>
std::pair<Operator<Scalar>, Operator<Scalar>> flux_commutator_ops(
    const Operator<Scalar>& a, const StateVector<Scalar>& psi) {
  require_self_adjoint(a, "observable");
  if (a.dim() != psi.dim()) {
    throw DimensionMismatch("flux_commutator_ops: operator/state dims differ");
  }
  const ComplexMat<Scalar> p = psi.coeffs() * psi.coeffs().adjoint();
  const ComplexMat<Scalar> ap = a.entries() * p;
  const ComplexMat<Scalar> pa = p * a.entries();
  const Complex<Scalar> half(Scalar(0.5), 0);
  const Complex<Scalar> half_over_i(0, Scalar(-0.5));  // 1/(2i)
  return {Operator<Scalar>(ComplexMat<Scalar>(half * (ap + pa))),
          Operator<Scalar>(ComplexMat<Scalar>(half_over_i * (ap - pa)))};
}

/// Weak values of every PVM element. They sum to exactly 1 but are otherwise
/// unconstrained complex numbers.
template <typename Scalar>
std::vector<Complex<Scalar>> projector_weak_values(
    const Pvm<Scalar>& pvm, const StateVector<Scalar>& pre,
    const StateVector<Scalar>& post,
    Scalar epsilon_overlap = Scalar(tol::kOverlap)) {
  if (pvm.dim() != pre.dim() || pre.dim() != post.dim()) {
    throw DimensionMismatch("projector_weak_values: dims differ");
  }
  const Complex<Scalar> overlap = checked_overlap(pre, post, epsilon_overlap);
  std::vector<Complex<Scalar>> values;
  values.reserve(pvm.size());
  for (const auto& p : pvm.projectors) {
    values.push_back(post.coeffs().dot(p.entries() * pre.coeffs()) / overlap);
  }
  return values;
}

}  // namespace weaksim
