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

#include <cmath>
#include <complex>

#include <doctest.h>

#include "test_helpers.hpp"
#include "weaksim/qkernel.hpp"

using namespace weaksim;
using testutil::kron_oracle;
using testutil::random_self_adjoint;
using testutil::random_state;
using testutil::sv;
using C = std::complex<double>;

TEST_CASE("state vectors validate their norm") {
  CHECK_THROWS_AS(StateVector<double>(
                      (ComplexVec<double>(2) << C(1, 0), C(1, 0)).finished()),
                  InvalidState);
  CHECK_THROWS_AS(StateVector<double>::normalized(ComplexVec<double>::Zero(3)),
                  InvalidState);
  const auto psi = sv({C(1, 0), C(1, 0)});
  CHECK(psi.coeffs()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("inner product") {
  auto engine = make_engine(101);
  for (Index dim : {2, 3, 5, 8}) {
    const auto psi = random_state(engine, dim);
    CHECK(std::abs(inner(psi, psi) - C(1, 0)) < 1e-12);
  }
  CHECK(std::abs(inner(StateVector<double>::basis(2, 0),
                       StateVector<double>::basis(2, 1))) == 0.0);

  // <psi'|psi> for psi = (1,1)/sqrt(2), psi' = (1,-2)/sqrt(5) is -1/sqrt(10).
  const auto psi = sv({C(1, 0), C(1, 0)});
  const auto psi_prime = sv({C(1, 0), C(-2, 0)});
  CHECK(std::abs(inner(psi_prime, psi) - C(-1.0 / std::sqrt(10.0), 0)) < 1e-15);

  // Conjugate symmetry and the unit bound.
  for (int i = 0; i < 20; ++i) {
    const auto a = random_state(engine, 4);
    const auto b = random_state(engine, 4);
    CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) < 1e-14);
    CHECK(std::abs(inner(a, b)) <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(inner(StateVector<double>::basis(2, 0),
                        StateVector<double>::basis(3, 0)),
                  DimensionMismatch);
}

TEST_CASE("tensor products use left-outermost ordering") {
  const auto b00 = tensor(StateVector<double>::basis(2, 0),
                          StateVector<double>::basis(2, 0));
  CHECK(b00.dim() == 4);
  CHECK(std::abs(b00.coeffs()(0) - C(1, 0)) < 1e-15);

  const auto b01 = tensor(StateVector<double>::basis(2, 0),
                          StateVector<double>::basis(2, 1));
  CHECK(std::abs(b01.coeffs()(1) - C(1, 0)) < 1e-15);

  const auto id4 = tensor(Operator<double>::identity(2),
                          Operator<double>::identity(2));
  CHECK((id4.entries() - ComplexMat<double>::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-15);

  // (sigma_z (x) 1)|0>|1> = +|0>|1>, against a brute-force Kronecker oracle.
  const auto zs = tensor(sigma_z<double>(), Operator<double>::identity(2));
  const ComplexVec<double> applied = zs.entries() * b01.coeffs();
  CHECK((applied - b01.coeffs()).cwiseAbs().maxCoeff() < 1e-15);
  const ComplexMat<double> oracle =
      kron_oracle(sigma_z<double>().entries(),
                  ComplexMat<double>::Identity(2, 2));
  CHECK((zs.entries() - oracle).cwiseAbs().maxCoeff() == 0.0);

  auto engine = make_engine(55);
  for (int i = 0; i < 10; ++i) {
    const auto a = random_self_adjoint(engine, 3);
    const auto b = random_self_adjoint(engine, 2);
    CHECK((tensor(a, b).entries() - kron_oracle(a.entries(), b.entries()))
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  }
}

TEST_CASE("partial trace recovers tensor factors") {
  auto engine = make_engine(77);
  const auto rho_a = DensityMatrix<double>::from_state(random_state(engine, 3));
  const auto rho_b = DensityMatrix<double>::from_state(random_state(engine, 4));
  const auto joint = tensor(rho_a, rho_b);

  const auto back_a = partial_trace(joint, {3, 4}, 0);
  const auto back_b = partial_trace(joint, {3, 4}, 1);
  CHECK((back_a.entries() - rho_a.entries()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((back_b.entries() - rho_b.entries()).cwiseAbs().maxCoeff() < 1e-12);

  SUBCASE("Bell state reduces to the maximally mixed qubit") {
    const auto bell = sv({C(1, 0), C(0, 0), C(0, 0), C(1, 0)});
    const auto rho = DensityMatrix<double>::from_state(bell);
    for (std::size_t keep : {0u, 1u}) {
      const auto reduced = partial_trace(rho, {2, 2}, keep);
      CHECK((reduced.entries() - 0.5 * ComplexMat<double>::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    }
  }

  SUBCASE("three factors, keep the middle one") {
    const auto rho_c = DensityMatrix<double>::from_state(random_state(engine, 2));
    const auto all = tensor(tensor(rho_a, rho_b), rho_c);
    const auto mid = partial_trace(all, {3, 4, 2}, 1);
    CHECK((mid.entries() - rho_b.entries()).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("error paths") {
    CHECK_THROWS_AS(partial_trace(joint, {3, 5}, 0), BadFactorization);
    CHECK_THROWS_AS(partial_trace(joint, {3, 4}, 2), BadFactorization);
    CHECK_THROWS_AS(partial_trace(joint, {}, 0), BadFactorization);
  }
}

TEST_CASE("spectral decomposition") {
  const auto pvm = spectral_decompose(sigma_z<double>());
  REQUIRE(pvm.size() == 2);
  CHECK(pvm.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(pvm.eigenvalues[1] == doctest::Approx(1.0));
  const auto p1 = Operator<double>::projector(StateVector<double>::basis(2, 1));
  CHECK((pvm.projectors[0].entries() - p1.entries()).cwiseAbs().maxCoeff() <
        1e-12);

  SUBCASE("full degeneracy merges into one projector") {
    const auto pvm_id = spectral_decompose(Operator<double>::identity(3));
    REQUIRE(pvm_id.size() == 1);
    CHECK(pvm_id.eigenvalues[0] == doctest::Approx(1.0));
    CHECK((pvm_id.projectors[0].entries() - ComplexMat<double>::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }

  SUBCASE("near-degenerate eigenvalues merge below the threshold") {
    ComplexMat<double> m = ComplexMat<double>::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0 + 1e-9;
    m(2, 2) = 2.0;
    const auto merged = spectral_decompose(Operator<double>(m));
    CHECK(merged.size() == 2);
  }

  SUBCASE("reconstruction residual on random instances") {
    auto engine = make_engine(31);
    for (int i = 0; i < 20; ++i) {
      const auto a = random_self_adjoint(engine, 6);
      const auto decomposition = spectral_decompose(a);
      ComplexMat<double> rebuilt = ComplexMat<double>::Zero(6, 6);
      for (std::size_t k = 0; k < decomposition.size(); ++k) {
        rebuilt += decomposition.eigenvalues[k] *
                   decomposition.projectors[k].entries();
      }
      CHECK((rebuilt - a.entries()).cwiseAbs().maxCoeff() < 1e-8);
    }
  }

  SUBCASE("non-self-adjoint input is rejected, not symmetrized") {
    ComplexMat<double> m(2, 2);
    m << C(0, 0), C(1, 0), C(0, 0), C(0, 0);
    CHECK_THROWS_AS(spectral_decompose(Operator<double>(m)), NotSelfAdjoint);
  }
}

TEST_CASE("born probabilities") {
  const auto p0 = Operator<double>::projector(StateVector<double>::basis(2, 0));
  CHECK(born_probability(p0, StateVector<double>::basis(2, 0)) ==
        doctest::Approx(1.0));
  CHECK(born_probability(p0, sv({C(1, 0), C(1, 0)})) == doctest::Approx(0.5));

  SUBCASE("a full PVM's probabilities sum to one") {
    auto engine = make_engine(13);
    for (int i = 0; i < 25; ++i) {
      const Index dim = 2 + static_cast<Index>(uniform01(engine) * 7);
      const auto a = random_self_adjoint(engine, dim);
      const auto psi = random_state(engine, dim);
      const auto pvm = spectral_decompose(a);
      double total = 0;
      for (const auto& p : pvm.projectors) total += born_probability(p, psi);
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }

  SUBCASE("density-matrix route agrees with the pure route") {
    auto engine = make_engine(14);
    const auto psi = random_state(engine, 4);
    const auto rho = DensityMatrix<double>::from_state(psi);
    const auto proj =
        Operator<double>::projector(StateVector<double>::basis(4, 2));
    CHECK(born_probability(proj, rho) ==
          doctest::Approx(born_probability(proj, psi)).epsilon(1e-12));
  }

  SUBCASE("non-projectors are rejected") {
    const Operator<double> doubled(ComplexMat<double>(2.0 * p0.entries()));
    CHECK_THROWS_AS(born_probability(doubled, StateVector<double>::basis(2, 0)),
                    NotProjector);
  }
}

TEST_CASE("expectation values") {
  CHECK(expectation(sigma_z<double>(), StateVector<double>::basis(2, 0)) ==
        doctest::Approx(1.0));
  CHECK(std::abs(expectation(sigma_z<double>(), sv({C(1, 0), C(1, 0)}))) <
        1e-12);

  SUBCASE("agrees with the spectral average") {
    auto engine = make_engine(17);
    for (int i = 0; i < 10; ++i) {
      const auto a = random_self_adjoint(engine, 5);
      const auto psi = random_state(engine, 5);
      const auto pvm = spectral_decompose(a);
      double avg = 0;
      for (std::size_t k = 0; k < pvm.size(); ++k) {
        avg += pvm.eigenvalues[k] * born_probability(pvm.projectors[k], psi);
      }
      CHECK(std::abs(avg - expectation(a, psi)) < 1e-8);
    }
  }

  SUBCASE("density-matrix route") {
    auto engine = make_engine(18);
    const auto psi = random_state(engine, 3);
    const auto a = random_self_adjoint(engine, 3);
    CHECK(expectation(a, DensityMatrix<double>::from_state(psi)) ==
          doctest::Approx(expectation(a, psi)).epsilon(1e-12));
  }

  SUBCASE("non-self-adjoint observables are rejected") {
    ComplexMat<double> m(2, 2);
    m << C(0, 0), C(1, 0), C(0, 0), C(0, 0);
    CHECK_THROWS_AS(expectation(Operator<double>(m),
                                StateVector<double>::basis(2, 0)),
                    NotSelfAdjoint);
  }
}

TEST_CASE("collapse") {
  const auto p0 = Operator<double>::projector(StateVector<double>::basis(2, 0));
  const auto collapsed = collapse(p0, sv({C(1, 0), C(1, 0)}));
  CHECK(std::abs(collapsed.coeffs()(0) - C(1, 0)) < 1e-12);
  CHECK(std::abs(collapsed.coeffs()(1)) < 1e-12);

  SUBCASE("idempotence") {
    auto engine = make_engine(19);
    for (int i = 0; i < 10; ++i) {
      const auto psi = random_state(engine, 4);
      const auto pvm = spectral_decompose(random_self_adjoint(engine, 4));
      const auto& proj = pvm.projectors.front();
      if (born_probability(proj, psi) < 1e-6) continue;
      const auto once = collapse(proj, psi);
      const auto twice = collapse(proj, once);
      CHECK((once.coeffs() - twice.coeffs()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("orthogonal branch") {
    CHECK_THROWS_AS(collapse(p0, StateVector<double>::basis(2, 1)),
                    ZeroProbabilityBranch);
  }

  SUBCASE("density matrices collapse and stay valid") {
    auto engine = make_engine(20);
    const auto rho = DensityMatrix<double>::from_state(random_state(engine, 3));
    const auto proj =
        Operator<double>::projector(StateVector<double>::basis(3, 1));
    const auto after = collapse(proj, rho);
    CHECK(std::abs(after.entries().trace() - C(1, 0)) < 1e-12);
    const auto again = collapse(proj, after);
    CHECK((again.entries() - after.entries()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("derived scalars are phase invariant") {
  auto engine = make_engine(23);
  for (int i = 0; i < 30; ++i) {
    const Index dim = 2 + static_cast<Index>(uniform01(engine) * 7);
    const auto psi = random_state(engine, dim);
    const double theta = 6.283185307179586 * uniform01(engine);
    const StateVector<double> rotated(
        ComplexVec<double>(psi.coeffs() * std::polar(1.0, theta)));
    const auto a = random_self_adjoint(engine, dim);
    CHECK(std::abs(expectation(a, psi) - expectation(a, rotated)) < 1e-12);
    const auto pvm = spectral_decompose(a);
    CHECK(std::abs(born_probability(pvm.projectors[0], psi) -
                   born_probability(pvm.projectors[0], rotated)) < 1e-12);
  }
}

TEST_CASE("density matrix invariants are enforced") {
  ComplexMat<double> bad_trace = 0.5 * ComplexMat<double>::Identity(2, 2);
  bad_trace(1, 1) = C(0.6, 0);
  CHECK_THROWS_AS(DensityMatrix<double>{bad_trace}, InvalidDensityMatrix);

  ComplexMat<double> negative(2, 2);
  negative << C(1.5, 0), C(0, 0), C(0, 0), C(-0.5, 0);
  CHECK_THROWS_AS(DensityMatrix<double>{negative}, InvalidDensityMatrix);

  ComplexMat<double> skew(2, 2);
  skew << C(0.5, 0), C(0.1, 0.1), C(0.1, 0.1), C(0.5, 0);
  CHECK_THROWS_AS(DensityMatrix<double>{skew}, InvalidDensityMatrix);
}

TEST_CASE("pvm construction validates exclusivity and completeness") {
  const auto p0 = Operator<double>::projector(StateVector<double>::basis(2, 0));
  const auto p1 = Operator<double>::projector(StateVector<double>::basis(2, 1));
  CHECK_NOTHROW(Pvm<double>({p0, p1}, {1.0, -1.0}));
  CHECK_THROWS_AS(Pvm<double>({p0, p0}, {1.0, -1.0}), BadPvm);
  CHECK_THROWS_AS(Pvm<double>({p0}, {1.0}), BadPvm);
}
