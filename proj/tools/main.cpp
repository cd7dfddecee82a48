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

// Command-line front end. Subcommands: weak-value, aav-sim, cheshire,
// bohmian, bias. Every JSON report embeds the tool version, the effective
// configuration, the seed, and the wall-clock duration; with a fixed seed the
// report is reproducible except for the duration field. Exit codes: 0 on
// success, 1 on usage errors, 2 on domain errors (with a structured JSON
// object on standard error).

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "weaksim/aav.hpp"
#include "weaksim/errors.hpp"
#include "weaksim/qkernel.hpp"
#include "weaksim/scenarios.hpp"
#include "weaksim/selection_bias.hpp"
#include "weaksim/serialize.hpp"
#include "weaksim/version.hpp"
#include "weaksim/weakvalue.hpp"

namespace {

using json = nlohmann::json;
using namespace weaksim;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalConfig {
  std::uint64_t seed = 12345;
  double hbar = kDefaultHbar;
  std::string out = "-";
  std::string format = "json";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

json parse_json_flag(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

StateVector<double> parse_state(const std::string& text, const char* what) {
  const json j = parse_json_flag(text, what);
  // Input vectors may arrive unnormalized, e.g. (1, 1) for a balanced qubit.
  return StateVector<double>::normalized(io::vector_from_json(j));
}

Operator<double> parse_observable(const std::string& name, Index dim) {
  if (name == "sigma_x") return sigma_x<double>();
  if (name == "sigma_y") return sigma_y<double>();
  if (name == "sigma_z") return sigma_z<double>();
  if (name == "identity") return Operator<double>::identity(dim);
  if (name == "projector0") {
    return Operator<double>::projector(StateVector<double>::basis(dim, 0));
  }
  if (name == "projector1") {
    return Operator<double>::projector(StateVector<double>::basis(dim, 1));
  }
  if (!name.empty() && name.front() == '[') {
    return Operator<double>(
        io::matrix_from_json(parse_json_flag(name, "--observable")));
  }
  throw UsageError("unknown observable preset: " + name);
}

void write_output(const GlobalConfig& global, const std::string& text) {
  if (global.out == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream file(global.out);
  if (!file) throw UsageError("cannot open output path: " + global.out);
  file << text;
  if (text.empty() || text.back() != '\n') file << "\n";
}

void emit_report(const GlobalConfig& global, const std::string& subcommand,
                 const json& config_echo, const json& result,
                 std::chrono::steady_clock::time_point start) {
  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const json report{{"tool", "weaksim"},
                    {"version", kVersion},
                    {"subcommand", subcommand},
                    {"seed", global.seed},
                    {"hbar", global.hbar},
                    {"config", config_echo},
                    {"duration_seconds", duration},
                    {"result", result}};
  write_output(global, report.dump(2));
}

ProtocolOptions<double> protocol_options(const GlobalConfig& global) {
  ProtocolOptions<double> opts;
  opts.hbar = global.hbar;
  opts.threads = global.threads;
  return opts;
}

int run(int argc, char** argv) {
  CLI::App app{"weak-value and post-selection simulator"};
  app.set_version_flag("--version", std::string("weaksim ") + kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalConfig global;
  app.add_option("--seed", global.seed, "root seed echoed into every report");
  app.add_option("--hbar", global.hbar, "reduced Planck constant")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", global.out, "output path, '-' for standard output");
  app.add_option("--format", global.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", global.threads, "worker threads for trials")
      ->check(CLI::PositiveNumber);

  // weak-value --------------------------------------------------------------
  auto* weak = app.add_subcommand("weak-value",
                                  "weak value of an observable between a "
                                  "pre- and a post-selected state");
  std::string wv_observable = "sigma_z";
  Index wv_dim = 2;
  std::string wv_pre, wv_post;
  std::string wv_method = "direct";
  weak->add_option("--observable", wv_observable,
                   "preset name or JSON matrix of [re, im] pairs");
  weak->add_option("--dim", wv_dim, "dimension for identity/projector presets");
  weak->add_option("--pre", wv_pre, "pre-selected state, JSON [re, im] list")
      ->required();
  weak->add_option("--post", wv_post, "post-selected state, JSON [re, im] list")
      ->required();
  weak->add_option("--method", wv_method, "direct ratio or weak-operator solve")
      ->check(CLI::IsMember({"direct", "weak-operator"}));

  // aav-sim -------------------------------------------------------------
  auto* aav = app.add_subcommand(
      "aav-sim", "Gaussian-pointer protocol with post-selection");
  std::string aav_observable = "sigma_z";
  Index aav_dim = 2;
  std::string aav_pre, aav_post;
  double aav_sigma_q = 0.05;
  std::uint64_t aav_attempts = 100000;
  std::string aav_readout = "p";
  aav->add_option("--observable", aav_observable,
                  "preset name or JSON matrix of [re, im] pairs");
  aav->add_option("--dim", aav_dim, "dimension for identity/projector presets");
  aav->add_option("--pre", aav_pre, "pre-selected state, JSON")->required();
  aav->add_option("--post", aav_post, "post-selected state, JSON")->required();
  aav->add_option("--sigma-q", aav_sigma_q, "pointer coordinate width")
      ->check(CLI::PositiveNumber);
  aav->add_option("--attempts", aav_attempts, "number of protocol trials");
  aav->add_option("--readout", aav_readout,
                  "pointer readout: p estimates Re, q estimates Im")
      ->check(CLI::IsMember({"p", "q"}));

  // cheshire ------------------------------------------------------------
  auto* cheshire = app.add_subcommand(
      "cheshire", "path/polarization weak-value pattern, exact and sampled");
  double ch_sigma_q = 0.05;
  std::uint64_t ch_attempts = 450000;
  cheshire->add_option("--sigma-q", ch_sigma_q, "pointer coordinate width")
      ->check(CLI::PositiveNumber);
  cheshire->add_option("--attempts", ch_attempts, "trials per protocol run");

  // bohmian -------------------------------------------------------------
  auto* bohmian = app.add_subcommand(
      "bohmian", "operational velocity field against the guidance field");
  Index bo_grid_n = 1024;
  double bo_length = 32.0, bo_sigma_x = 1.0, bo_k = 1.0, bo_x0 = 0.0;
  double bo_mass = 1.0, bo_tau = 0.025, bo_sigma_q = 0.05;
  std::uint64_t bo_attempts = 1000000;
  int bo_bins = 21;
  std::uint64_t bo_min_occupancy = 100;
  bohmian->add_option("--grid-n", bo_grid_n, "system grid points");
  bohmian->add_option("--length", bo_length, "system grid length");
  bohmian->add_option("--sigma-x", bo_sigma_x, "packet width");
  bohmian->add_option("--k", bo_k, "carrier wavenumber (momentum hbar*k)");
  bohmian->add_option("--x0", bo_x0, "packet center");
  bohmian->add_option("--mass", bo_mass, "particle mass")
      ->check(CLI::PositiveNumber);
  bohmian->add_option("--tau", bo_tau, "delay before the strong readout")
      ->check(CLI::PositiveNumber);
  bohmian->add_option("--sigma-q", bo_sigma_q, "probe coordinate width")
      ->check(CLI::PositiveNumber);
  bohmian->add_option("--attempts", bo_attempts, "number of trials");
  bohmian->add_option("--bins", bo_bins, "velocity bins");
  bohmian->add_option("--min-occupancy", bo_min_occupancy,
                      "bins with fewer samples are reported without velocity");

  // bias ----------------------------------------------------------------
  auto* bias = app.add_subcommand(
      "bias", "classical post-selection demonstrations");
  std::string bias_mode;
  std::uint64_t bias_n = 0;
  std::string bias_target;
  double bias_tol_amplitude = 0.02, bias_tol_frequency = 0.02,
         bias_tol_phase = 0.1;
  double bias_amp_lo = 0.5, bias_amp_hi = 1.5;
  double bias_freq_lo = 0.5, bias_freq_hi = 3.5;
  double bias_rate1 = 0.2, bias_rate2 = 0.2;
  bias->add_option("--mode", bias_mode, "pendulum or berkson")
      ->required()
      ->check(CLI::IsMember({"pendulum", "berkson"}));
  bias->add_option("--n", bias_n, "ensemble size (defaults per mode)");
  bias->add_option("--target", bias_target,
                   "pendulum target, JSON [[frequency, amplitude, phase], ...]");
  bias->add_option("--tol-amplitude", bias_tol_amplitude,
                   "relative amplitude tolerance");
  bias->add_option("--tol-frequency", bias_tol_frequency,
                   "relative frequency tolerance");
  bias->add_option("--tol-phase", bias_tol_phase, "phase tolerance, radians");
  bias->add_option("--amplitude-lo", bias_amp_lo, "amplitude range, lower");
  bias->add_option("--amplitude-hi", bias_amp_hi, "amplitude range, upper");
  bias->add_option("--frequency-lo", bias_freq_lo, "frequency range, lower");
  bias->add_option("--frequency-hi", bias_freq_hi, "frequency range, upper");
  bias->add_option("--rate1", bias_rate1, "first indicator base rate");
  bias->add_option("--rate2", bias_rate2, "second indicator base rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto start = std::chrono::steady_clock::now();
  const bool csv = global.format == "csv";

  if (weak->parsed()) {
    const Operator<double> a = parse_observable(wv_observable, wv_dim);
    const StateVector<double> pre = parse_state(wv_pre, "--pre");
    const StateVector<double> post = parse_state(wv_post, "--post");
    if (csv) throw UsageError("weak-value has no CSV form; use --format json");
    const WeakValueResult<double> result =
        wv_method == "direct" ? weak_value(a, pre, post)
                              : extract_via_weak_operators(a, pre, post);
    const json config{{"observable", wv_observable},
                      {"dim", wv_dim},
                      {"pre", wv_pre},
                      {"post", wv_post},
                      {"method", wv_method}};
    emit_report(global, "weak-value", config,
                json{{"re", result.value.real()},
                     {"im", result.value.imag()},
                     {"overlap_abs", std::abs(result.overlap)},
                     {"method", method_name(result.method)}},
                start);
    return 0;
  }

  if (aav->parsed()) {
    const Operator<double> a = parse_observable(aav_observable, aav_dim);
    const StateVector<double> pre = parse_state(aav_pre, "--pre");
    const StateVector<double> post = parse_state(aav_post, "--post");
    const Representation readout = aav_readout == "p"
                                       ? Representation::momentum
                                       : Representation::coordinate;
    const ProtocolReport<double> report =
        run_protocol(a, pre, post, aav_sigma_q, aav_attempts, global.seed,
                     readout, protocol_options(global));
    if (csv) {
      // Post-selected pointer density in the readout representation.
      const Grid<double> grid(1024, 16 * aav_sigma_q, global.hbar);
      const JointState<double> js =
          couple(pre, a, gaussian_pointer(grid, aav_sigma_q));
      auto [selected, success] = post_select(js, post);
      (void)success;
      write_output(global, io::density_csv(readout == Representation::momentum
                                               ? to_momentum(selected)
                                               : selected));
      return 0;
    }
    const json config{{"observable", aav_observable}, {"dim", aav_dim},
                      {"pre", aav_pre},               {"post", aav_post},
                      {"sigma_q", aav_sigma_q},       {"attempts", aav_attempts},
                      {"readout", aav_readout}};
    emit_report(global, "aav-sim", config, io::to_json(report), start);
    return 0;
  }

  if (cheshire->parsed()) {
    const auto setup = cheshire_setup<double>();
    const auto report = cheshire_report(setup, ch_sigma_q, ch_attempts,
                                        global.seed, protocol_options(global));
    if (csv) {
      write_output(global, io::cheshire_csv(report));
      return 0;
    }
    const json config{{"sigma_q", ch_sigma_q}, {"attempts", ch_attempts}};
    emit_report(global, "cheshire", config, io::to_json(report), start);
    return 0;
  }

  if (bohmian->parsed()) {
    const Grid<double> grid(bo_grid_n, bo_length, global.hbar);
    const PointerState<double> psi =
        gaussian_packet(grid, bo_sigma_x, bo_x0, bo_k);
    WisemanOptions<double> opts;
    opts.min_occupancy = bo_min_occupancy;
    opts.threads = global.threads;
    const VelocityField<double> field = wiseman_velocity(
        psi, bo_mass, bo_tau, bo_sigma_q, bo_attempts, bo_bins, global.seed,
        opts);
    if (csv) {
      write_output(global, io::velocity_csv(field));
      return 0;
    }
    const VelocityField<double> oracle =
        guidance_velocity_oracle(psi, bo_mass, field.binning);
    const auto deviation = mean_absolute_deviation(field, oracle);
    const json config{{"grid_n", bo_grid_n},   {"length", bo_length},
                      {"sigma_x", bo_sigma_x}, {"k", bo_k},
                      {"x0", bo_x0},           {"mass", bo_mass},
                      {"tau", bo_tau},         {"sigma_q", bo_sigma_q},
                      {"attempts", bo_attempts}, {"bins", bo_bins},
                      {"min_occupancy", bo_min_occupancy}};
    json result{{"velocity_field", io::to_json(field)},
                {"guidance_oracle", io::to_json(oracle)}};
    result["mean_absolute_deviation"] =
        deviation ? json(*deviation) : json(nullptr);
    emit_report(global, "bohmian", config, result, start);
    return 0;
  }

  if (bias->parsed()) {
    if (bias_mode == "berkson") {
      if (csv) throw UsageError("berkson has no CSV form; use --format json");
      const std::uint64_t n = bias_n == 0 ? 100000 : bias_n;
      const BerksonResult result =
          berkson_demo(n, bias_rate1, bias_rate2, global.seed);
      const json config{{"mode", bias_mode},
                        {"n", n},
                        {"rate1", bias_rate1},
                        {"rate2", bias_rate2}};
      emit_report(global, "bias", config, io::to_json(result), start);
      return 0;
    }
    FourierTarget target = default_chord();
    if (!bias_target.empty()) {
      target.components.clear();
      for (const auto& row : parse_json_flag(bias_target, "--target")) {
        if (!row.is_array() || row.size() != 3) {
          throw UsageError("--target rows must be [frequency, amplitude, phase]");
        }
        target.components.push_back({row[0].get<double>(), row[1].get<double>(),
                                     row[2].get<double>()});
      }
    }
    target.tolerance = {bias_tol_amplitude, bias_tol_frequency, bias_tol_phase};
    const ParameterRanges ranges{bias_amp_lo, bias_amp_hi, bias_freq_lo,
                                 bias_freq_hi};
    const std::uint64_t n = bias_n == 0 ? 1000000 : bias_n;
    const PendulumDemoResult result =
        pendulum_postselect(n, target, global.seed, ranges);
    if (csv) {
      write_output(global, io::waveform_csv(target, result));
      return 0;
    }
    json config{{"mode", bias_mode},
                {"n", n},
                {"tolerance",
                 json{{"amplitude_rel", bias_tol_amplitude},
                      {"frequency_rel", bias_tol_frequency},
                      {"phase_abs", bias_tol_phase}}},
                {"ranges", json{{"amplitude", {bias_amp_lo, bias_amp_hi}},
                                {"frequency", {bias_freq_lo, bias_freq_hi}}}}};
    json target_echo = json::array();
    for (const auto& c : target.components) {
      target_echo.push_back({c.frequency, c.amplitude, c.phase});
    }
    config["target"] = target_echo;
    emit_report(global, "bias", config, io::to_json(result), start);
    return 0;
  }

  throw UsageError("no subcommand selected");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const weaksim::Error& e) {
    std::cerr << json{{"error", {{"code", e.code()}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
