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

#include "qss/encoding.hpp"

#include <array>
#include <stdexcept>

namespace qss {

SecretMessage::SecretMessage(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("SecretMessage: bits must be 0 or 1");
  }
}

SecretMessage SecretMessage::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("SecretMessage: expected only '0' and '1' in \"" +
                                  std::string(text) + "\"");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return SecretMessage(std::move(bits));
}

SecretMessage SecretMessage::random(std::size_t length, RandomStream& rng) {
  std::vector<std::uint8_t> bits(length);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
  return SecretMessage(std::move(bits));
}

std::string SecretMessage::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

SecretMessage operator^(const SecretMessage& a, const SecretMessage& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("SecretMessage: XOR of unequal lengths");
  }
  std::vector<std::uint8_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.bits_[i] ^ b.bits_[i];
  return SecretMessage(std::move(out));
}

namespace {
constexpr std::array<GateOp, 3> kThreeOps{GateOp::I, GateOp::U, GateOp::H};
constexpr std::array<GateOp, 4> kFourOps{GateOp::I, GateOp::U, GateOp::H, GateOp::Hbar};
}  // namespace

std::span<const GateOp> operations_of(OpSet set) noexcept {
  if (set == OpSet::ThreeOp) return kThreeOps;
  return kFourOps;
}

std::string_view to_string(OpSet set) noexcept {
  return set == OpSet::ThreeOp ? "three-op" : "four-op";
}

Basis basis_after(StateLabel label, GateOp charlie_op) {
  const State post = apply(charlie_op, state_of(label));
  for (Basis b : kAllBases) {
    if (is_eigenstate(post, b)) return b;
  }
  throw std::logic_error("basis_after: encrypted state is not a basis eigenstate");
}

int expected_bit(StateLabel label, GateOp charlie_op, GateOp alice_op) {
  if (alice_op != GateOp::I && alice_op != GateOp::U) {
    throw std::invalid_argument("expected_bit: Alice encodes only with I or U");
  }
  const State post = apply(alice_op, apply(charlie_op, state_of(label)));
  const Basis basis = basis_after(label, charlie_op);
  return prob_of(post, basis, 1) >= 1.0 - kCertainty ? 1 : 0;
}

int decode_bit(StateLabel label, GateOp charlie_op, int measured_bit) {
  return measured_bit == expected_bit(label, charlie_op, GateOp::I) ? 0 : 1;
}

}  // namespace qss
