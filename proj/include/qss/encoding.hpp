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

// Message bits and the decoding rules shared by the honest parties and the
// attacker: which basis a photon must be read in after encryption, and which
// bit that reading yields.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qss/qubit.hpp"
#include "qss/random_stream.hpp"

namespace qss {

/// Alice's secret M_A. Bits are stored one per byte, each 0 or 1.
class SecretMessage {
 public:
  SecretMessage() = default;
  explicit SecretMessage(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters.
  static SecretMessage from_string(std::string_view text);
  static SecretMessage random(std::size_t length, RandomStream& rng);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_.at(i); }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::string to_string() const;

  /// Bitwise XOR; M_A = M_B ^ M_C for classical shares.
  friend SecretMessage operator^(const SecretMessage& a, const SecretMessage& b);
  friend bool operator==(const SecretMessage&, const SecretMessage&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Charlie's encryption alphabet.
enum class OpSet : std::uint8_t { ThreeOp, FourOp };

std::span<const GateOp> operations_of(OpSet set) noexcept;
std::string_view to_string(OpSet set) noexcept;

/// The basis in which apply(charlie_op, state_of(label)) is an eigenstate,
/// found from the state itself rather than a table.
Basis basis_after(StateLabel label, GateOp charlie_op);

/// Certain outcome of reading apply(alice_op, apply(charlie_op, |label>)) in
/// basis_after(label, charlie_op). alice_op must be I or U.
int expected_bit(StateLabel label, GateOp charlie_op, GateOp alice_op);

/// Recovers Alice's bit (0 for I, 1 for U) from a reading in
/// basis_after(label, charlie_op).
int decode_bit(StateLabel label, GateOp charlie_op, int measured_bit);

}  // namespace qss
