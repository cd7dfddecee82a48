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

#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "test_helpers.hpp"
#include "weaksim/serialize.hpp"

using namespace weaksim;
using testutil::random_self_adjoint;
using testutil::random_state;
using C = std::complex<double>;

TEST_CASE("complex, vector and matrix round trips are exact") {
  auto engine = make_engine(301);
  for (int i = 0; i < 10; ++i) {
    const auto psi = random_state(engine, 5);
    const auto back = io::vector_from_json(io::vector_to_json(psi.coeffs()));
    CHECK(back == psi.coeffs());

    const auto a = random_self_adjoint(engine, 4);
    const auto m = io::matrix_from_json(io::matrix_to_json(a.entries()));
    CHECK(m == a.entries());
  }
  CHECK(io::complex_from_json(io::complex_to_json(C(-1.5, 2.25))) ==
        C(-1.5, 2.25));
}

TEST_CASE("malformed payloads are rejected") {
  CHECK_THROWS_AS(io::complex_from_json(nlohmann::json::array({1.0})),
                  InvalidState);
  CHECK_THROWS_AS(io::vector_from_json(nlohmann::json::array()), InvalidState);
  CHECK_THROWS_AS(
      io::matrix_from_json(nlohmann::json::parse("[[[1,0]],[[1,0],[2,0]]]")),
      InvalidState);
}

TEST_CASE("weak value results serialize with [re, im] pairs") {
  WeakValueResult<double> result;
  result.value = C(0.5, -0.25);
  result.overlap = C(0.0, 0.5);
  result.method = Method::weak_operator;
  result.stderr_re = 0.01;
  const auto j = io::to_json(result);
  CHECK(j["re"] == 0.5);
  CHECK(j["im"] == -0.25);
  CHECK(j["overlap"][0] == 0.0);
  CHECK(j["overlap"][1] == 0.5);
  CHECK(j["overlap_abs"] == 0.5);
  CHECK(j["method"] == "weak-operator");
  CHECK(j["stderr_re"] == 0.01);
  CHECK(j["stderr_im"].is_null());
}

TEST_CASE("csv exports") {
  SUBCASE("pointer density has the documented header") {
    const Grid<double> grid(64, 8.0, 1.0);
    const auto csv = io::density_csv(gaussian_pointer(grid, 0.5));
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "coordinate_or_momentum,density");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 64);
  }

  SUBCASE("velocity csv skips absent bins") {
    VelocityField<double> field;
    field.binning = {0.0, 3.0, 3};
    field.bin_centers = {0.5, 1.5, 2.5};
    field.velocities = {1.0, std::nullopt, 2.0};
    field.counts = {500, 3, 700};
    const auto csv = io::velocity_csv(field);
    CHECK(csv == "bin_center,velocity,count\n0.5,1,500\n2.5,2,700\n");
  }
}
