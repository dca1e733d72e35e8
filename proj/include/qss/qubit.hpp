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

#pragma once

// Single-qubit polarization algebra: the four preparation states, the six
// unitaries used by the parties, Born-rule probabilities and collapsing
// measurement. Dense types are templated on the real scalar.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "qss/random_stream.hpp"

namespace qss {

/// Tolerance for algebraic identities (normalization, unitarity, fidelity).
inline constexpr double kAlgebraTolerance = 1e-12;
/// A probability at least 1 - kCertainty is treated as a certain outcome.
inline constexpr double kCertainty = 1e-9;

enum class Basis : std::uint8_t { Z, X };
enum class StateLabel : std::uint8_t { Zero, One, U, D };
enum class GateOp : std::uint8_t { I, U, H, Hbar, PauliX, PauliZ };

inline constexpr std::array<Basis, 2> kAllBases{Basis::Z, Basis::X};
inline constexpr std::array<StateLabel, 4> kAllLabels{
    StateLabel::Zero, StateLabel::One, StateLabel::U, StateLabel::D};
inline constexpr std::array<GateOp, 6> kAllGates{
    GateOp::I, GateOp::U, GateOp::H, GateOp::Hbar, GateOp::PauliX, GateOp::PauliZ};

constexpr Basis basis_of(StateLabel label) noexcept {
  return (label == StateLabel::Zero || label == StateLabel::One) ? Basis::Z
                                                                  : Basis::X;
}

constexpr int bit_of(StateLabel label) noexcept {
  return (label == StateLabel::Zero || label == StateLabel::U) ? 0 : 1;
}

constexpr StateLabel label_of(Basis basis, int bit) noexcept {
  if (basis == Basis::Z) return bit == 0 ? StateLabel::Zero : StateLabel::One;
  return bit == 0 ? StateLabel::U : StateLabel::D;
}

constexpr Basis conjugate(Basis basis) noexcept {
  return basis == Basis::Z ? Basis::X : Basis::Z;
}

constexpr std::string_view to_string(Basis b) noexcept {
  return b == Basis::Z ? "Z" : "X";
}

constexpr std::string_view to_string(StateLabel l) noexcept {
  switch (l) {
    case StateLabel::Zero: return "0";
    case StateLabel::One: return "1";
    case StateLabel::U: return "u";
    case StateLabel::D: return "d";
  }
  return "?";
}

constexpr std::string_view to_string(GateOp g) noexcept {
  switch (g) {
    case GateOp::I: return "I";
    case GateOp::U: return "U";
    case GateOp::H: return "H";
    case GateOp::Hbar: return "Hbar";
    case GateOp::PauliX: return "X";
    case GateOp::PauliZ: return "Z";
  }
  return "?";
}

template <typename Scalar>
using Amplitude = std::complex<Scalar>;

template <typename Scalar>
using Vector2 = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// Normalized polarization state a0|0> + a1|1>.
template <typename Scalar = double>
class PureState {
 public:
  using Vector = Vector2<Scalar>;

  PureState() : amplitudes_(Amplitude<Scalar>(1), Amplitude<Scalar>(0)) {}

  explicit PureState(const Vector& amplitudes) : amplitudes_(amplitudes) {
    for (int k = 0; k < 2; ++k) {
      if (!std::isfinite(amplitudes_(k).real()) ||
          !std::isfinite(amplitudes_(k).imag())) {
        throw std::invalid_argument("PureState: non-finite amplitude");
      }
    }
    const Scalar norm = amplitudes_.squaredNorm();
    if (std::abs(norm - Scalar(1)) > Scalar(kAlgebraTolerance)) {
      throw std::invalid_argument("PureState: amplitudes are not normalized");
    }
  }

  PureState(Amplitude<Scalar> a0, Amplitude<Scalar> a1)
      : PureState(Vector(a0, a1)) {}

  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Amplitude<Scalar> a0() const noexcept { return amplitudes_(0); }
  Amplitude<Scalar> a1() const noexcept { return amplitudes_(1); }

  /// Exact component equality; use fidelity() for physical equality.
  friend bool operator==(const PureState& l, const PureState& r) noexcept {
    return l.amplitudes_ == r.amplitudes_;
  }

 private:
  Vector amplitudes_;
};

template <typename Scalar = double>
PureState<Scalar> state_of(StateLabel label) {
  using C = Amplitude<Scalar>;
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  switch (label) {
    case StateLabel::Zero: return PureState<Scalar>(C(1), C(0));
    case StateLabel::One: return PureState<Scalar>(C(0), C(1));
    case StateLabel::U: return PureState<Scalar>(C(s), C(s));
    case StateLabel::D: return PureState<Scalar>(C(s), C(-s));
  }
  throw std::invalid_argument("state_of: unknown label");
}

template <typename Scalar = double>
Matrix2<Scalar> gate_matrix(GateOp gate) {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  Matrix2<Scalar> m;
  switch (gate) {
    case GateOp::I: m << 1, 0, 0, 1; break;
    // U = i*sigma_y = |0><1| - |1><0|
    case GateOp::U: m << 0, 1, -1, 0; break;
    case GateOp::H: m << s, s, s, -s; break;
    case GateOp::Hbar: m << s, -s, -s, -s; break;
    case GateOp::PauliX: m << 0, 1, 1, 0; break;
    case GateOp::PauliZ: m << 1, 0, 0, -1; break;
  }
  return m;
}

template <typename Scalar>
PureState<Scalar> apply(GateOp gate, const PureState<Scalar>& state) {
  return PureState<Scalar>(
      typename PureState<Scalar>::Vector(gate_matrix<Scalar>(gate) * state.amplitudes()));
}

/// |<a|b>|^2; insensitive to global phase.
template <typename Scalar>
Scalar fidelity(const PureState<Scalar>& a, const PureState<Scalar>& b) {
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Born probability of reading `bit` when measuring `state` in `basis`.
template <typename Scalar>
Scalar prob_of(const PureState<Scalar>& state, Basis basis, int bit) {
  const auto eigen = state_of<Scalar>(label_of(basis, bit));
  const Scalar p = fidelity(eigen, state);
  return std::clamp(p, Scalar(0), Scalar(1));
}

/// True when one outcome of `basis` is certain for `state`.
template <typename Scalar>
bool is_eigenstate(const PureState<Scalar>& state, Basis basis) {
  const Scalar p0 = prob_of(state, basis, 0);
  return p0 >= Scalar(1 - kCertainty) || p0 <= Scalar(kCertainty);
}

template <typename Scalar>
struct Measurement {
  int bit;
  PureState<Scalar> collapsed;
};

/// Projective measurement. Certain outcomes consume no randomness.
template <typename Scalar>
Measurement<Scalar> measure(const PureState<Scalar>& state, Basis basis,
                            RandomStream& rng) {
  const Scalar p1 = prob_of(state, basis, 1);
  int bit;
  if (p1 >= Scalar(1 - kCertainty)) {
    bit = 1;
  } else if (p1 <= Scalar(kCertainty)) {
    bit = 0;
  } else {
    bit = rng.uniform01() < static_cast<double>(p1) ? 1 : 0;
  }
  return {bit, state_of<Scalar>(label_of(basis, bit))};
}

using State = PureState<double>;

}  // namespace qss
