// Copyright 2026 The mpsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mpsim/dense_oracle.hpp"
#include "mpsim/errors.hpp"
#include "mpsim/gates.hpp"
#include "test_util.hpp"

using namespace mpsim;
namespace mt = mpsim::testing;

TEST_CASE("single-qubit gates act on the right bit") {
  DenseState psi = DenseState::basis_state(3, 0b000);
  dense_apply_single_qubit(psi, 1, pauli_x());
  CHECK(std::abs(psi.amp[0b010] - Complex(1.0, 0.0)) < 1e-15);

  DenseState same = DenseState::basis_state(2, 0b01);
  dense_apply_single_qubit(same, 0, Matrix::Identity(2, 2));
  CHECK(std::abs(same.amp[0b01] - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("cphase flips the sign of |11> and squares to identity") {
  DenseState psi = DenseState::basis_state(2, 0b11);
  dense_cphase(psi, 0, 1);
  CHECK(std::abs(psi.amp[3] + Complex(1.0, 0.0)) < 1e-15);

  std::mt19937_64 rng(7);
  DenseState random = mt::random_state(rng, 4);
  DenseState twice = random;
  dense_cphase(twice, 1, 3);
  dense_cphase(twice, 1, 3);
  CHECK(mt::dist_up_to_phase(twice, random) < 1e-14);
}

TEST_CASE("cphase on |+>|+> yields the two-qubit cluster state") {
  DenseState psi = DenseState::plus_state(2);
  dense_cphase(psi, 0, 1);
  for (std::size_t x = 0; x < 4; ++x) {
    const double expected = x == 3 ? -0.5 : 0.5;
    CHECK(std::abs(psi.amp[x] - Complex(expected, 0.0)) < 1e-15);
  }
}

TEST_CASE("measurement probabilities and projection") {
  DenseState plus = DenseState::plus_state(1);
  auto [p0, p1] = dense_probabilities(plus, 0);
  CHECK(p0 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p1 == doctest::Approx(0.5).epsilon(1e-12));

  DenseState zero = DenseState::basis_state(1, 0);
  auto probs = dense_probabilities(zero, 0);
  CHECK(probs.first == doctest::Approx(1.0));
  CHECK(probs.second == doctest::Approx(0.0));
  CHECK_THROWS_AS(dense_measure(zero, 0, 1), ValidationError);

  // Self-consistency: probabilities equal |amplitude|^2 marginals.
  std::mt19937_64 rng(11);
  DenseState psi = mt::random_state(rng, 5);
  for (int k = 0; k < 5; ++k) {
    auto [q0, q1] = dense_probabilities(psi, k);
    double direct0 = 0.0;
    for (std::size_t x = 0; x < psi.amp.size(); ++x) {
      if (!(x & (std::size_t{1} << k))) {
        direct0 += std::norm(psi.amp[x]);
      }
    }
    CHECK(std::abs(q0 - direct0) < 1e-12);
    CHECK(std::abs(q0 + q1 - 1.0) < 1e-12);

    DenseMeasurement m = dense_measure(psi, k, 0);
    CHECK(std::abs(m.post.norm() - 1.0) < 1e-12);
    auto [r0, r1] = dense_probabilities(m.post, k);
    CHECK(r0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r1 == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("drop_qubit extracts the projected slice") {
  DenseState psi = DenseState::basis_state(3, 0b101);
  DenseState dropped = dense_drop_qubit(psi, 2, 1);
  CHECK(dropped.n == 2);
  CHECK(std::abs(dropped.amp[0b01] - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("schmidt spectrum: product, Bell and random cuts") {
  DenseState product = DenseState::basis_state(3, 0b010);
  for (int cut = 1; cut < 3; ++cut) {
    const auto spec = dense_schmidt_spectrum(product, cut);
    CHECK(spec[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < spec.size(); ++i) {
      CHECK(spec[i] < 1e-8);
    }
  }

  DenseState bell = DenseState::basis_state(2, 0b00);
  bell.amp[0b00] = 1.0 / std::sqrt(2.0);
  bell.amp[0b11] = 1.0 / std::sqrt(2.0);
  const auto spec = dense_schmidt_spectrum(bell, 1);
  CHECK(spec[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(spec[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // Sum of squares is 1 at every cut of a normalized state.
  std::mt19937_64 rng(23);
  DenseState psi = mt::random_state(rng, 6);
  for (int cut = 1; cut < 6; ++cut) {
    double sum = 0.0;
    for (double s : dense_schmidt_spectrum(psi, cut)) {
      sum += s * s;
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("branch enumeration: empty pattern and single |+> measurement") {
  DenseState plus = DenseState::plus_state(1);
  MeasurementPattern empty;
  empty.outputs = {"q0"};
  auto branches = dense_enumerate_branches(plus, empty, {"q0"});
  CHECK(branches.size() == 1);
  CHECK(branches.at("") == doctest::Approx(1.0));

  MeasurementPattern single;
  single.steps.push_back({"q0", MeasurementBasis{}});
  branches = dense_enumerate_branches(plus, single, {"q0"});
  CHECK(branches.at("0") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(branches.at("1") == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("branch probabilities sum to one with adaptive bases") {
  std::mt19937_64 rng(31);
  DenseState psi = mt::random_state(rng, 4);
  MeasurementPattern pattern;
  MeasurementStep s0;
  s0.target = "q0";
  s0.basis.kind = BasisKind::rotated_xy;
  s0.basis.theta0 = 0.35;
  MeasurementStep s1;
  s1.target = "q2";
  s1.basis.kind = BasisKind::rotated_xy;
  s1.basis.theta0 = 1.1;
  s1.basis.sign_deps = {"q0"};
  MeasurementStep s2;
  s2.target = "q1";
  s2.basis.kind = BasisKind::rotated_xy;
  s2.basis.theta0 = 0.7;
  s2.basis.pi_deps = {"q2"};
  pattern.steps = {s0, s1, s2};
  pattern.outputs = {"q3"};

  auto branches = dense_enumerate_branches(psi, pattern, {"q0", "q1", "q2", "q3"});
  double total = 0.0;
  for (const auto& [string_, p] : branches) {
    CHECK(string_.size() == 3);
    total += p;
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
}
