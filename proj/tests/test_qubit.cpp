// Copyright 2026 The qss-trojan Authors
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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "qss/qubit.hpp"

using namespace qss;
using Catch::Approx;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

State random_state(RandomStream& rng) {
  // Uniform on the Bloch sphere.
  const double z = 2.0 * rng.uniform01() - 1.0;
  const double phi = 2.0 * M_PI * rng.uniform01();
  const double theta = std::acos(z);
  return State(std::polar(std::cos(theta / 2), 0.0), std::polar(std::sin(theta / 2), phi));
}

bool near(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) < kAlgebraTolerance;
}

}  // namespace

TEST_CASE("state_of yields the four preparation states", "[qubit]") {
  auto zero = state_of(StateLabel::Zero);
  CHECK(near(zero.a0(), 1.0));
  CHECK(near(zero.a1(), 0.0));
  auto u = state_of(StateLabel::U);
  CHECK(near(u.a0(), kS));
  CHECK(near(u.a1(), kS));
  auto d = state_of(StateLabel::D);
  CHECK(near(d.a0(), kS));
  CHECK(near(d.a1(), -kS));
}

TEST_CASE("label helpers are consistent", "[qubit]") {
  for (auto l : kAllLabels) {
    CHECK(label_of(basis_of(l), bit_of(l)) == l);
    CHECK(prob_of(state_of(l), basis_of(l), bit_of(l)) == Approx(1.0).margin(1e-12));
  }
  CHECK(basis_of(StateLabel::One) == Basis::Z);
  CHECK(basis_of(StateLabel::D) == Basis::X);
  CHECK(bit_of(StateLabel::U) == 0);
  CHECK(bit_of(StateLabel::D) == 1);
}

TEST_CASE("gate matrices", "[qubit]") {
  const auto u = gate_matrix(GateOp::U);
  CHECK(near(u(0, 0), 0.0));
  CHECK(near(u(0, 1), 1.0));
  CHECK(near(u(1, 0), -1.0));
  CHECK(near(u(1, 1), 0.0));

  const auto hbar = gate_matrix(GateOp::Hbar);
  CHECK(near(hbar(0, 0), kS));
  CHECK(near(hbar(0, 1), -kS));
  CHECK(near(hbar(1, 0), -kS));
  CHECK(near(hbar(1, 1), -kS));

  CHECK(gate_matrix(GateOp::I).isIdentity(1e-15));

  for (auto g : kAllGates) {
    const auto m = gate_matrix(g);
    INFO("gate " << to_string(g));
    CHECK((m.adjoint() * m - Matrix2<double>::Identity()).cwiseAbs().maxCoeff() <
          kAlgebraTolerance);
  }
}

TEST_CASE("gate matrices agree with the hand-written oracle algebra", "[qubit]") {
  for (std::size_t g = 0; g < kAllGates.size(); ++g) {
    for (std::size_t l = 0; l < kAllLabels.size(); ++l) {
      const auto lib = apply(kAllGates[g], state_of(kAllLabels[l]));
      const auto ref = oracle::gate(static_cast<int>(g), oracle::state(static_cast<int>(l)));
      CHECK(near(lib.a0(), ref[0]));
      CHECK(near(lib.a1(), ref[1]));
    }
  }
}

TEST_CASE("apply examples", "[qubit]") {
  // U|0> = -|1>
  const auto flipped = apply(GateOp::U, state_of(StateLabel::Zero));
  CHECK(near(flipped.a1(), -1.0));
  CHECK(prob_of(flipped, Basis::Z, 1) == Approx(1.0).margin(1e-12));

  const auto d = state_of(StateLabel::D);
  CHECK(apply(GateOp::I, d) == d);

  CHECK(fidelity(apply(GateOp::H, state_of(StateLabel::U)), state_of(StateLabel::Zero)) ==
        Approx(1.0).margin(1e-12));
}

TEST_CASE("prob_of examples", "[qubit]") {
  CHECK(prob_of(state_of(StateLabel::U), Basis::Z, 0) == Approx(0.5).margin(1e-12));
  CHECK(prob_of(state_of(StateLabel::One), Basis::Z, 1) == Approx(1.0).margin(1e-12));
  CHECK(prob_of(apply(GateOp::Hbar, state_of(StateLabel::Zero)), Basis::X, 1) ==
        Approx(1.0).margin(1e-12));
}

TEST_CASE("U flips the state in both bases", "[qubit][property]") {
  for (auto l : kAllLabels) {
    const auto out = apply(GateOp::U, state_of(l));
    CHECK(prob_of(out, basis_of(l), 1 - bit_of(l)) == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("H and Hbar exchange the two bases", "[qubit][property]") {
  for (int bit : {0, 1}) {
    const auto z = state_of(label_of(Basis::Z, bit));
    const auto x = state_of(label_of(Basis::X, bit));
    CHECK(fidelity(apply(GateOp::H, z), x) == Approx(1.0).margin(1e-12));
    CHECK(fidelity(apply(GateOp::H, x), z) == Approx(1.0).margin(1e-12));
    // Hbar: |0> -> |d>, |1> -> |u> up to phase.
    CHECK(fidelity(apply(GateOp::Hbar, z), state_of(label_of(Basis::X, 1 - bit))) ==
          Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("Born rule normalization and norm preservation on random states",
          "[qubit][property]") {
  RandomStream rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_state(rng);
    for (auto b : kAllBases) {
      CHECK(prob_of(s, b, 0) + prob_of(s, b, 1) == Approx(1.0).margin(1e-12));
    }
    for (auto g : kAllGates) {
      CHECK(apply(g, s).amplitudes().squaredNorm() == Approx(1.0).margin(1e-12));
    }
    const auto m = measure(s, kAllBases[i % 2], rng);
    CHECK(m.collapsed.amplitudes().squaredNorm() == Approx(1.0).margin(1e-12));
    // Repeated measurement of the collapsed state is certain.
    RandomStream other(static_cast<std::uint64_t>(i));
    CHECK(measure(m.collapsed, kAllBases[i % 2], other).bit == m.bit);
  }
}

TEST_CASE("PureState rejects unnormalized or non-finite amplitudes", "[qubit]") {
  CHECK_THROWS_AS(State(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(State(std::nan(""), 0.0), std::invalid_argument);
  CHECK_NOTHROW(State(std::complex<double>(0, 1), 0.0));
}

TEST_CASE("measure on eigenstates is deterministic and draws nothing", "[qubit]") {
  RandomStream rng(5);
  auto m = measure(state_of(StateLabel::Zero), Basis::Z, rng);
  CHECK(m.bit == 0);
  CHECK(fidelity(m.collapsed, state_of(StateLabel::Zero)) == Approx(1.0));
  auto x = measure(state_of(StateLabel::U), Basis::X, rng);
  CHECK(x.bit == 0);
  CHECK(fidelity(x.collapsed, state_of(StateLabel::U)) == Approx(1.0));
  CHECK(rng.draws() == 0);
}

TEST_CASE("measure samples the Born distribution", "[qubit][statistics]") {
  RandomStream rng(77);
  constexpr int kN = 100000;
  int zeros = 0;
  const auto u = state_of(StateLabel::U);
  for (int i = 0; i < kN; ++i) zeros += measure(u, Basis::Z, rng).bit == 0 ? 1 : 0;
  const double sigma = std::sqrt(0.25 / kN);
  CHECK(std::abs(zeros / double(kN) - 0.5) <= 3 * sigma);
}

TEST_CASE("identical seeds give identical measurement sequences", "[qubit][random]") {
  RandomStream a(123), b(123);
  const auto u = state_of(StateLabel::U);
  for (int i = 0; i < 1000; ++i) REQUIRE(measure(u, Basis::Z, a).bit == measure(u, Basis::Z, b).bit);
  CHECK(a.draws() == b.draws());
}

TEST_CASE("RandomStream children are deterministic and distinct", "[random]") {
  RandomStream root(42);
  auto c1 = root.child(1), c1b = root.child(1), c2 = root.child(2);
  CHECK(c1() == c1b());
  CHECK(c1.seed() != c2.seed());
  CHECK(root.draws() == 0);
  CHECK_THROWS_AS(root.uniform_index(0), std::invalid_argument);
  for (int i = 0; i < 1000; ++i) {
    const auto k = root.uniform_index(7);
    REQUIRE(k < 7);
    const double u = root.uniform01();
    REQUIRE((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("templated core works in long double", "[qubit]") {
  const auto u = state_of<long double>(StateLabel::U);
  const auto out = apply(GateOp::H, u);
  CHECK(static_cast<double>(prob_of(out, Basis::Z, 0)) == Approx(1.0).margin(1e-15));
}
