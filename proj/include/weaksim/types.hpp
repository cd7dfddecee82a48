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

#include <complex>

#include <Eigen/Dense>

namespace weaksim {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using ComplexVec = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMat =
    Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Numerical tolerances shared across the library. They are part of the
/// contracts of the operations below, not tuning knobs.
namespace tol {

// Unit-norm check for state vectors and trace check for density matrices.
inline constexpr double kNorm = 1e-12;
// Entrywise self-adjointness, idempotence and PVM checks.
inline constexpr double kSelfAdjoint = 1e-10;
// Eigenvalue floor for positive semidefiniteness checks.
inline constexpr double kPsdFloor = -1e-10;
// Eigenvalues closer than this are treated as one degenerate level.
inline constexpr double kSpectralMerge = 1e-8;
// Branch probabilities below this are treated as zero.
inline constexpr double kZeroProbability = 1e-12;
// Default smallest admissible |<post|pre>| for weak-value ratios.
inline constexpr double kOverlap = 1e-12;
// Norm check for grid wavefunctions (sum |psi|^2 * spacing).
inline constexpr double kGridNorm = 1e-10;

}  // namespace tol

// All formulas carry hbar explicitly; 1 is the working default.
inline constexpr double kDefaultHbar = 1.0;

}  // namespace weaksim
