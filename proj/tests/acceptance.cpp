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

// Acceptance suite. Each criterion is a self-contained check with pinned
// tolerances and seeds; the binary prints one PASS/FAIL line per criterion
// and exits nonzero if any selected criterion fails.
//
//   weaksim_acceptance              runs everything
//   weaksim_acceptance --criterion N  runs one
//   weaksim_acceptance --list         lists criteria

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "weaksim/aav.hpp"
#include "weaksim/qkernel.hpp"
#include "weaksim/rng.hpp"
#include "weaksim/scenarios.hpp"
#include "weaksim/selection_bias.hpp"
#include "weaksim/stats.hpp"
#include "weaksim/weakvalue.hpp"

namespace {

using namespace weaksim;
using C = std::complex<double>;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& message) {
    if (!condition) {
      ok = false;
      detail << "    failed: " << message << "\n";
    }
  }
};

StateVector<double> sv2(C a, C b) {
  ComplexVec<double> v(2);
  v << a, b;
  return StateVector<double>::normalized(v);
}

StateVector<double> random_state(std::mt19937_64& engine, Index dim) {
  ComplexVec<double> v(dim);
  for (Index i = 0; i < dim; ++i) {
    v(i) = C(2 * uniform01(engine) - 1, 2 * uniform01(engine) - 1);
  }
  return StateVector<double>::normalized(v);
}

Operator<double> random_self_adjoint(std::mt19937_64& engine, Index dim) {
  ComplexMat<double> m(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      m(r, c) = C(2 * uniform01(engine) - 1, 2 * uniform01(engine) - 1);
    }
  }
  return Operator<double>(ComplexMat<double>(0.5 * (m + m.adjoint())));
}

// 1. Weak-operator extraction agrees with the direct ratio.
void criterion_extraction(Check& check) {
  auto engine = make_engine(1001);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const Index dim = 2 + static_cast<Index>(uniform01(engine) * 7);
    const auto a = random_self_adjoint(engine, dim);
    StateVector<double> pre = random_state(engine, dim);
    StateVector<double> post = random_state(engine, dim);
    while (std::abs(inner(post, pre)) <= 0.05) {
      pre = random_state(engine, dim);
      post = random_state(engine, dim);
    }
    const C direct = weak_value(a, pre, post).value;
    const C extracted = extract_via_weak_operators(a, pre, post).value;
    worst = std::max(worst, std::abs(extracted - direct));
  }
  check.detail << "    max |extracted - direct| = " << worst << "\n";
  check.require(worst < 1e-10, "cross-method deviation exceeds 1e-10");
}

// 2. Projector weak values sum to one; the pinned qubit instance hits -1.
void criterion_projectors(Check& check) {
  auto engine = make_engine(1002);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Index dim = 2 + static_cast<Index>(uniform01(engine) * 7);
    const auto pvm = spectral_decompose(random_self_adjoint(engine, dim));
    StateVector<double> pre = random_state(engine, dim);
    StateVector<double> post = random_state(engine, dim);
    while (std::abs(inner(post, pre)) <= 1e-3) {
      pre = random_state(engine, dim);
      post = random_state(engine, dim);
    }
    C total{};
    for (const auto& v : projector_weak_values(pvm, pre, post)) total += v;
    worst = std::max(worst, std::abs(total - C(1, 0)));
  }
  check.detail << "    max |sum - 1| = " << worst << "\n";
  check.require(worst < 1e-12, "projector weak values do not sum to 1");

  const auto p0 = Operator<double>::projector(StateVector<double>::basis(2, 0));
  const C value =
      weak_value(p0, sv2(C(1, 0), C(1, 0)), sv2(C(1, 0), C(-2, 0))).value;
  check.detail << "    pinned projector weak value = " << value << "\n";
  check.require(std::abs(value - C(-1, 0)) < 1e-12,
                "pinned projector instance is not -1");
}

// 3. Symmetric and eigenvector selections reduce to expectation/eigenvalue.
void criterion_special_cases(Check& check) {
  auto engine = make_engine(1003);
  double worst_sym = 0, worst_eig = 0;
  for (int i = 0; i < 50; ++i) {
    const Index dim = 2 + static_cast<Index>(uniform01(engine) * 7);
    const auto a = random_self_adjoint(engine, dim);
    const auto psi = random_state(engine, dim);
    worst_sym = std::max(
        worst_sym, std::abs(weak_value(a, psi, psi).value -
                            C(expectation(a, psi), 0)));
    Eigen::SelfAdjointEigenSolver<ComplexMat<double>> solver(a.entries());
    const Index k = static_cast<Index>(uniform01(engine) * dim);
    const StateVector<double> eig(
        ComplexVec<double>(solver.eigenvectors().col(k)));
    worst_eig = std::max(worst_eig,
                         std::abs(weak_value(a, eig, eig).value -
                                  C(solver.eigenvalues()(k), 0)));
  }
  check.detail << "    max symmetric deviation = " << worst_sym
               << ", max eigenvector deviation = " << worst_eig << "\n";
  check.require(worst_sym < 1e-12, "symmetric reduction exceeds 1e-12");
  check.require(worst_eig < 1e-12, "eigenvector reduction exceeds 1e-12");
}

// 4. Pointer statistics reproduce Re and Im through the two readouts.
void criterion_pointer_statistics(Check& check) {
  const auto plus = sv2(C(1, 0), C(1, 0));
  const auto report_p =
      run_protocol(sigma_z<double>(), plus, StateVector<double>::basis(2, 0),
                   0.05, 220000, 42, Representation::momentum);
  const double sigma_p = 1.0 / (2 * 0.05);
  const double band_p =
      3.0 * sigma_p / std::sqrt(double(report_p.n_postselected));
  check.detail << "    p readout: estimate " << report_p.estimate.value.real()
               << " target 1, band " << band_p << ", n = "
               << report_p.n_postselected << "\n";
  check.require(report_p.n_postselected >= 100000,
                "fewer than 1e5 post-selected p-samples");
  check.require(std::abs(report_p.estimate.value.real() - 1.0) < band_p,
                "p-readout estimate outside 3 sigma_p/sqrt(n)");

  const auto report_q =
      run_protocol(sigma_z<double>(), plus, sv2(C(1, 0), C(0, 1)), 0.05,
                   220000, 43, Representation::coordinate);
  const double band_q = 3.0 * *report_q.estimate.stderr_im;
  check.detail << "    q readout: estimate " << report_q.estimate.value.imag()
               << " target 1, band " << band_q << ", n = "
               << report_q.n_postselected << "\n";
  check.require(report_q.n_postselected >= 100000,
                "fewer than 1e5 post-selected q-samples");
  check.require(std::abs(report_q.estimate.value.imag() - 1.0) < band_q,
                "q-readout estimate outside 3 stderr");
}

// 5. The first-order approximation error shrinks strictly with sigma_q.
void criterion_first_order_ladder(Check& check) {
  const auto pre = sv2(C(0.8, 0), C(0.6, 0));
  const auto post = StateVector<double>::basis(2, 0);
  double previous = 1e100;
  for (const double sigma_q : {0.2, 0.1, 0.05}) {
    const double bias = first_order_bias(sigma_x<double>(), pre, post, sigma_q);
    check.detail << "    sigma_q " << sigma_q << ": bias " << bias << "\n";
    check.require(bias < previous, "bias is not strictly decreasing");
    previous = bias;
  }
}

// 6. Duplicated observables in a pointer chain replicate exactly.
void criterion_robustness(Check& check) {
  const auto pre = sv2(C(0.8, 0), C(0.6, 0));
  const auto post = sv2(C(1, 0), C(0, 1));
  const auto pair_z = multi_weak_values<double>(
      {sigma_z<double>(), sigma_z<double>()}, pre, post, {0.05, 0.05});
  const auto pair_x = multi_weak_values<double>(
      {sigma_x<double>(), sigma_x<double>()}, pre, post, {0.1, 0.1});
  auto engine = make_engine(1006);
  const auto a3 = random_self_adjoint(engine, 3);
  const auto pre3 = random_state(engine, 3);
  StateVector<double> post3 = random_state(engine, 3);
  while (std::abs(inner(post3, pre3)) <= 0.2) post3 = random_state(engine, 3);
  const auto pair_r =
      multi_weak_values<double>({a3, a3}, pre3, post3, {0.05, 0.05});
  const double d1 = std::abs(pair_z[0].value - pair_z[1].value);
  const double d2 = std::abs(pair_x[0].value - pair_x[1].value);
  const double d3 = std::abs(pair_r[0].value - pair_r[1].value);
  check.detail << "    replication gaps: " << d1 << ", " << d2 << ", " << d3
               << "\n";
  check.require(d1 < 1e-12 && d2 < 1e-12 && d3 < 1e-12,
                "duplicated observables disagree beyond 1e-12");
}

// 7. Cheshire pattern: exact values and protocol estimates.
void criterion_cheshire(Check& check) {
  const auto setup = cheshire_setup<double>();
  const double expected[4] = {1.0, 0.0, 0.0, 1.0};
  const auto observables = cheshire_observables(setup);
  for (int i = 0; i < 4; ++i) {
    const C value = weak_value(observables[i].second, setup.pre, setup.post).value;
    check.require(std::abs(value - C(expected[i], 0)) < 1e-12,
                  "exact pattern violated at " + observables[i].first);
  }
  const auto report = cheshire_report(setup, 0.05, 450000ull, 2026);
  for (const auto& [label, entry] : report) {
    const double dre = std::abs(entry.estimate.value.real() - entry.exact.real());
    const double dim = std::abs(entry.estimate.value.imag() - entry.exact.imag());
    check.detail << "    " << label << ": exact " << entry.exact << ", estimate "
                 << entry.estimate.value << ", n_p = " << entry.n_postselected_p
                 << ", n_q = " << entry.n_postselected_q << "\n";
    check.require(entry.n_postselected_p >= 100000 &&
                      entry.n_postselected_q >= 100000,
                  label + ": fewer than 1e5 post-selected samples");
    check.require(dre <= 3.0 * *entry.estimate.stderr_re,
                  label + ": Re estimate outside 3 stderr");
    check.require(dim <= 3.0 * *entry.estimate.stderr_im,
                  label + ": Im estimate outside 3 stderr");
  }
}

// 8. Operational velocity versus the guidance field on a sigma/tau ladder.
void criterion_velocity(Check& check) {
  const Grid<double> grid(1024, 32.0, 1.0);
  const auto psi = gaussian_packet(grid, 1.0, 0.0, 1.0);
  double previous = 1e100;
  VelocityField<double> finest;
  for (const auto& [tau, sigma_q] :
       {std::pair{0.1, 0.2}, std::pair{0.05, 0.1}, std::pair{0.025, 0.05}}) {
    const auto field =
        wiseman_velocity(psi, 1.0, tau, sigma_q, 1000000ull, 21, 777);
    const auto oracle = guidance_velocity_oracle(psi, 1.0, field.binning);
    const auto deviation = mean_absolute_deviation(field, oracle);
    check.require(deviation.has_value(), "no shared occupied bins");
    check.detail << "    tau " << tau << ", sigma_q " << sigma_q
                 << ": mean |v - oracle| = " << *deviation << "\n";
    check.require(*deviation <= previous, "ladder deviation increased");
    previous = *deviation;
    finest = field;
  }
  for (int b = 8; b <= 12; ++b) {
    check.require(finest.velocities[b].has_value(),
                  "central bin lost its velocity");
    if (finest.velocities[b]) {
      check.require(std::abs(*finest.velocities[b] - 1.0) < 0.05,
                    "central-bin velocity off by more than 5%");
    }
  }
}

// 9. Classical selection-bias demonstrations.
void criterion_selection_bias(Check& check) {
  const auto berkson = berkson_demo(100000, 0.2, 0.2, 7);
  // Closed form for the OR rule at 0.2/0.2 is exactly -0.8.
  check.detail << "    berkson: r_unconditional " << berkson.r_unconditional
               << ", r_conditional " << berkson.r_conditional << "\n";
  check.require(std::abs(berkson.r_unconditional) < 0.05,
                "unconditional correlation too large");
  check.require(berkson.r_conditional < -0.2,
                "conditional correlation not negative enough");
  check.require(std::abs(berkson.r_conditional - (-0.8)) < 0.05,
                "conditional correlation far from the closed form");

  const auto pendulum = pendulum_postselect(1000000ull, default_chord(), 99);
  check.detail << "    pendulum: reconstruction error "
               << pendulum.reconstruction_error << ", matched "
               << pendulum.subensemble.size() << ", marginal p-values";
  bool uniform = true;
  for (const auto& histogram : pendulum.marginal_histograms) {
    const double p = chi_square_uniform_pvalue(histogram);
    check.detail << " " << p;
    uniform = uniform && p > 0.01;
  }
  check.detail << "\n";
  check.require(pendulum.reconstruction_error < 0.05,
                "reconstruction error at or above 0.05");
  check.require(uniform, "a full-ensemble marginal failed uniformity");
}

// 10. Kernel invariants on random instances.
void criterion_kernel(Check& check) {
  auto engine = make_engine(1010);
  double worst_born = 0, worst_collapse = 0, worst_trace = 0, worst_spec = 0;
  for (int i = 0; i < 100; ++i) {
    const Index dim = 2 + static_cast<Index>(uniform01(engine) * 7);
    const auto a = random_self_adjoint(engine, dim);
    const auto psi = random_state(engine, dim);
    const auto pvm = spectral_decompose(a);

    double total = 0;
    for (const auto& p : pvm.projectors) total += born_probability(p, psi);
    worst_born = std::max(worst_born, std::abs(total - 1.0));

    ComplexMat<double> rebuilt = ComplexMat<double>::Zero(dim, dim);
    for (std::size_t k = 0; k < pvm.size(); ++k) {
      rebuilt += pvm.eigenvalues[k] * pvm.projectors[k].entries();
    }
    worst_spec =
        std::max(worst_spec, (rebuilt - a.entries()).cwiseAbs().maxCoeff());

    for (const auto& p : pvm.projectors) {
      if (born_probability(p, psi) > 1e-6) {
        const auto once = collapse(p, psi);
        const auto twice = collapse(p, once);
        worst_collapse = std::max(
            worst_collapse,
            double((once.coeffs() - twice.coeffs()).cwiseAbs().maxCoeff()));
        break;
      }
    }

    const Index da = 2 + static_cast<Index>(uniform01(engine) * 3);
    const Index db = 2 + static_cast<Index>(uniform01(engine) * 3);
    const auto rho_a = DensityMatrix<double>::from_state(random_state(engine, da));
    const auto rho_b = DensityMatrix<double>::from_state(random_state(engine, db));
    const auto joint = tensor(rho_a, rho_b);
    worst_trace = std::max(
        worst_trace, double((partial_trace(joint, {da, db}, 0).entries() -
                             rho_a.entries())
                                .cwiseAbs()
                                .maxCoeff()));
    worst_trace = std::max(
        worst_trace, double((partial_trace(joint, {da, db}, 1).entries() -
                             rho_b.entries())
                                .cwiseAbs()
                                .maxCoeff()));
  }
  check.detail << "    born " << worst_born << ", collapse " << worst_collapse
               << ", partial trace " << worst_trace << ", spectral "
               << worst_spec << "\n";
  check.require(worst_born < 1e-12, "Born probabilities do not sum to 1");
  check.require(worst_collapse < 1e-12, "collapse is not idempotent");
  check.require(worst_trace < 1e-12, "partial trace does not recover factors");
  check.require(worst_spec < 1e-8, "spectral reconstruction residual too large");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Check&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "exact-extraction equivalence", criterion_extraction},
      {2, "projector identities", criterion_projectors},
      {3, "special-case reductions", criterion_special_cases},
      {4, "pointer statistics", criterion_pointer_statistics},
      {5, "first-order validity ladder", criterion_first_order_ladder},
      {6, "robustness/replicability", criterion_robustness},
      {7, "cheshire pattern", criterion_cheshire},
      {8, "operational velocity vs guidance", criterion_velocity},
      {9, "selection-bias demos", criterion_selection_bias},
      {10, "kernel invariant suite", criterion_kernel},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--list") {
      for (const auto& criterion : criteria()) {
        std::cout << criterion.id << "  " << criterion.name << "\n";
      }
      return 0;
    }
    if (arg == "--criterion" && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: weaksim_acceptance [--list] [--criterion N]\n";
      return 1;
    }
  }

  bool all_ok = true;
  for (const auto& criterion : criteria()) {
    if (selected != 0 && criterion.id != selected) continue;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail << "    exception: " << e.what() << "\n";
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (check.ok ? "PASS" : "FAIL") << "  criterion " << criterion.id
              << ": " << criterion.name << " (" << seconds << " s)\n"
              << check.detail.str();
    all_ok = all_ok && check.ok;
  }
  return all_ok ? 0 : 1;
}
