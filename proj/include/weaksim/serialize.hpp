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

// JSON and CSV views of the library's result types. Complex numbers are
// always [re, im] pairs; matrices are row-major nested lists.

#include <map>
#include <string>

#include <json.hpp>

#include "weaksim/aav.hpp"
#include "weaksim/pointer.hpp"
#include "weaksim/scenarios.hpp"
#include "weaksim/selection_bias.hpp"
#include "weaksim/types.hpp"
#include "weaksim/weakvalue.hpp"

namespace weaksim::io {

nlohmann::json complex_to_json(const Complex<double>& z);
Complex<double> complex_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const ComplexVec<double>& v);
ComplexVec<double> vector_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const ComplexMat<double>& m);
ComplexMat<double> matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WeakValueResult<double>& result);
nlohmann::json to_json(const ProtocolReport<double>& report);
nlohmann::json to_json(const VelocityField<double>& field);
nlohmann::json to_json(const CheshireEstimate<double>& entry);
nlohmann::json to_json(const std::map<std::string, CheshireEstimate<double>>& report);
nlohmann::json to_json(const BerksonResult& result);
nlohmann::json to_json(const PendulumDemoResult& result);

/// Columns: coordinate_or_momentum, density.
std::string density_csv(const PointerState<double>& ps);

/// Columns: bin_center, velocity, count. Bins without a velocity are skipped.
std::string velocity_csv(const VelocityField<double>& field);

/// Columns: label, exact_re, exact_im, estimate_re, estimate_im,
/// stderr_re, stderr_im.
std::string cheshire_csv(const std::map<std::string, CheshireEstimate<double>>& report);

/// Columns: t, reconstructed, target, over one fundamental period.
std::string waveform_csv(const FourierTarget& target,
                         const PendulumDemoResult& result, int n_samples = 512);

}  // namespace weaksim::io
