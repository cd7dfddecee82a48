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

#include <stdexcept>
#include <string>
#include <utility>

namespace weaksim {

/// Base class for every domain error. Each subclass carries a stable
/// machine-readable code that the CLI echoes in structured error output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg)
      : Error("DIMENSION_MISMATCH", msg) {}
};

struct InvalidState : Error {
  explicit InvalidState(const std::string& msg) : Error("INVALID_STATE", msg) {}
};

struct InvalidDensityMatrix : Error {
  explicit InvalidDensityMatrix(const std::string& msg)
      : Error("INVALID_DENSITY_MATRIX", msg) {}
};

struct NotSelfAdjoint : Error {
  explicit NotSelfAdjoint(const std::string& msg)
      : Error("NOT_SELF_ADJOINT", msg) {}
};

struct NotProjector : Error {
  explicit NotProjector(const std::string& msg) : Error("NOT_PROJECTOR", msg) {}
};

struct BadPvm : Error {
  explicit BadPvm(const std::string& msg) : Error("BAD_PVM", msg) {}
};

struct BadFactorization : Error {
  explicit BadFactorization(const std::string& msg)
      : Error("BAD_FACTORIZATION", msg) {}
};

struct ZeroProbabilityBranch : Error {
  explicit ZeroProbabilityBranch(const std::string& msg)
      : Error("ZERO_PROBABILITY_BRANCH", msg) {}
};

struct OverlapTooSmall : Error {
  explicit OverlapTooSmall(const std::string& msg)
      : Error("OVERLAP_TOO_SMALL", msg) {}
};

struct ZeroPostSelectionProbability : Error {
  explicit ZeroPostSelectionProbability(const std::string& msg)
      : Error("ZERO_POST_SELECTION_PROBABILITY", msg) {}
};

struct GridTooCoarse : Error {
  explicit GridTooCoarse(const std::string& msg)
      : Error("GRID_TOO_COARSE", msg) {}
};

struct GridTooSmall : Error {
  explicit GridTooSmall(const std::string& msg) : Error("GRID_TOO_SMALL", msg) {}
};

struct TargetUnmatched : Error {
  explicit TargetUnmatched(const std::string& msg)
      : Error("TARGET_UNMATCHED", msg) {}
};

struct DegenerateSample : Error {
  explicit DegenerateSample(const std::string& msg)
      : Error("DEGENERATE_SAMPLE", msg) {}
};

}  // namespace weaksim
