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

#include "weaksim/serialize.hpp"

#include <iomanip>
#include <sstream>

#include "weaksim/errors.hpp"

namespace weaksim::io {

using nlohmann::json;

namespace {

std::ostringstream csv_stream() {
  std::ostringstream out;
  out << std::setprecision(17);
  return out;
}

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json complex_to_json(const Complex<double>& z) {
  return json::array({z.real(), z.imag()});
}

Complex<double> complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidState("complex values must be [re, im] number pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const ComplexVec<double>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

ComplexVec<double> vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw InvalidState("state vectors must be nonempty arrays of [re, im]");
  }
  ComplexVec<double> v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = complex_from_json(j[i]);
  }
  return v;
}

json matrix_to_json(const ComplexMat<double>& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

ComplexMat<double> matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw InvalidState("matrices must be nonempty row-major nested arrays");
  }
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  ComplexMat<double> m;
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) {
      throw InvalidState("matrix rows must be arrays");
    }
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<Index>(row.size()) != cols) {
      throw InvalidState("matrix rows have inconsistent lengths");
    }
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

json to_json(const WeakValueResult<double>& result) {
  return json{{"re", result.value.real()},
              {"im", result.value.imag()},
              {"overlap", complex_to_json(result.overlap)},
              {"overlap_abs", std::abs(result.overlap)},
              {"method", method_name(result.method)},
              {"stderr_re", optional_to_json(result.stderr_re)},
              {"stderr_im", optional_to_json(result.stderr_im)}};
}

json to_json(const ProtocolReport<double>& report) {
  return json{
      {"exact_weak_value", complex_to_json(report.exact_weak_value)},
      {"estimate", to_json(report.estimate)},
      {"success_prob", report.success_prob},
      {"n_attempts", report.n_attempts},
      {"n_postselected", report.n_postselected},
      {"pointer_means", json{{"mean_p", report.pointer_mean_p},
                             {"mean_q", report.pointer_mean_q}}},
      {"predicted_means", json{{"mean_p", report.predicted_mean_p},
                               {"mean_q", report.predicted_mean_q}}},
      {"readout",
       report.readout == Representation::momentum ? "p" : "q"},
      {"sigma_q", report.sigma_q},
      {"seed", report.seed}};
}

json to_json(const VelocityField<double>& field) {
  json velocities = json::array();
  for (const auto& v : field.velocities) velocities.push_back(optional_to_json(v));
  return json{{"bin_centers", field.bin_centers},
              {"velocities", velocities},
              {"counts", field.counts},
              {"tau", field.tau},
              {"sigma_q", field.sigma_q},
              {"bin_width", field.binning.width()}};
}

json to_json(const CheshireEstimate<double>& entry) {
  return json{{"exact", complex_to_json(entry.exact)},
              {"estimate", to_json(entry.estimate)},
              {"success_prob", entry.success_prob},
              {"n_postselected_p", entry.n_postselected_p},
              {"n_postselected_q", entry.n_postselected_q}};
}

json to_json(const std::map<std::string, CheshireEstimate<double>>& report) {
  json out = json::object();
  for (const auto& [label, entry] : report) out[label] = to_json(entry);
  return out;
}

json to_json(const BerksonResult& result) {
  return json{{"r_unconditional", result.r_unconditional},
              {"r_conditional", result.r_conditional},
              {"n_total", result.n_total},
              {"n_admitted", result.n_admitted}};
}

json to_json(const PendulumDemoResult& result) {
  json reps = json::array();
  for (const auto& p : result.representatives) {
    reps.push_back(json{{"amplitude", p.amplitude},
                        {"frequency", p.frequency},
                        {"phase", p.phase}});
  }
  return json{{"reconstruction_error", result.reconstruction_error},
              {"n_total", result.n_total},
              {"n_matched", result.subensemble.size()},
              {"representatives", reps}};
}

std::string density_csv(const PointerState<double>& ps) {
  auto out = csv_stream();
  out << "coordinate_or_momentum,density\n";
  const RealVec<double> d = ps.density();
  for (Index i = 0; i < d.size(); ++i) {
    out << ps.axis_value(i) << "," << d(i) << "\n";
  }
  return out.str();
}

std::string velocity_csv(const VelocityField<double>& field) {
  auto out = csv_stream();
  out << "bin_center,velocity,count\n";
  for (std::size_t i = 0; i < field.bin_centers.size(); ++i) {
    if (!field.velocities[i]) continue;
    out << field.bin_centers[i] << "," << *field.velocities[i] << ","
        << field.counts[i] << "\n";
  }
  return out.str();
}

std::string cheshire_csv(
    const std::map<std::string, CheshireEstimate<double>>& report) {
  auto out = csv_stream();
  out << "label,exact_re,exact_im,estimate_re,estimate_im,stderr_re,stderr_im\n";
  for (const auto& [label, entry] : report) {
    out << label << "," << entry.exact.real() << "," << entry.exact.imag() << ","
        << entry.estimate.value.real() << "," << entry.estimate.value.imag()
        << "," << entry.estimate.stderr_re.value_or(0) << ","
        << entry.estimate.stderr_im.value_or(0) << "\n";
  }
  return out.str();
}

std::string waveform_csv(const FourierTarget& target,
                         const PendulumDemoResult& result, int n_samples) {
  const double period = target_period(target);
  std::vector<TargetComponent> reconstructed;
  reconstructed.reserve(result.representatives.size());
  for (const auto& p : result.representatives) {
    reconstructed.push_back({p.frequency, p.amplitude, p.phase});
  }
  const std::vector<double> reference =
      render_waveform(target.components, period, n_samples);
  const std::vector<double> candidate =
      render_waveform(reconstructed, period, n_samples);
  auto out = csv_stream();
  out << "t,reconstructed,target\n";
  for (int i = 0; i < n_samples; ++i) {
    out << period * i / n_samples << "," << candidate[static_cast<std::size_t>(i)]
        << "," << reference[static_cast<std::size_t>(i)] << "\n";
  }
  return out.str();
}

}  // namespace weaksim::io
