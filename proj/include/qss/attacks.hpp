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

// Adversaries: the preparing agent's multi-photon Trojan horse (replace,
// split, infer Charlie's operation, read Alice's bit on the way back) and a
// baseline outside intercept-resend eavesdropper.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qss/encoding.hpp"
#include "qss/photonics.hpp"
#include "qss/qubit.hpp"
#include "qss/random_stream.hpp"

namespace qss {

enum class Segment : std::uint8_t { BobToCharlie, CharlieToAlice, AliceToCharlie };

std::string_view to_string(Segment s) noexcept;

struct NoAttack {
  friend bool operator==(const NoAttack&, const NoAttack&) = default;
};

/// Bob sends n identical photons per signal instead of one. With forward_one
/// he keeps one photon aside untouched for Alice and measures the rest behind
/// a splitter tree of the given depth (0 selects ceil(log2(measured))).
/// n_photons == 1 is accepted by the protocols as a passive, honest-looking
/// Bob; trojan_prepare itself requires n >= 2.
struct TrojanBob {
  int n_photons = 4;
  bool forward_one = true;
  int tree_depth = 0;
  friend bool operator==(const TrojanBob&, const TrojanBob&) = default;
};

struct InterceptResendEve {
  Segment segment = Segment::BobToCharlie;
  friend bool operator==(const InterceptResendEve&, const InterceptResendEve&) = default;
};

using AttackStrategy = std::variant<NoAttack, TrojanBob, InterceptResendEve>;

/// "none", "trojan" or "eve".
std::string_view attack_name(const AttackStrategy& attack) noexcept;

struct Outcome {
  Basis basis;
  int bit;
};

struct InferenceResult {
  GateOp actual_op = GateOp::I;
  GateOp guessed_op = GateOp::I;
  /// Operations in the active set that assign the outcome pattern nonzero
  /// probability.
  std::vector<GateOp> consistent_ops;
  bool correct = false;
  /// The pattern fits more than one operation and Bob's guess is wrong,
  /// i.e. Bob cannot tell which operation Charlie chose.
  bool ambiguous = false;
  std::vector<Outcome> outcome_pattern;
};

struct TrojanInference {
  InferenceResult inference;
  std::optional<PhotonSignal> forwarded;
};

struct Interception {
  int stolen_bit;
  State resent;
};

struct EveInterception {
  State resent;
  int bit;
  Basis basis;
};

struct AttackReport {
  std::vector<InferenceResult> inferences;
  std::optional<SecretMessage> recovered_bits;
  /// Fraction of Alice's message bits Bob read correctly.
  double recovery_rate = 0.0;
  std::size_t recovered_correct = 0;
  std::size_t carriers = 0;
  bool detected = false;

  std::size_t ambiguous_count() const noexcept;
};

PhotonSignal trojan_prepare(StateLabel label, int n, std::int64_t origin_index = 0);

/// Bases Bob uses for m measured photons: all in basis_of(label) against the
/// three-operation set; ceil(m/2) in basis_of(label) and the rest in the
/// conjugate basis against the four-operation set.
std::vector<Basis> trojan_measurement_bases(StateLabel label, OpSet set,
                                            std::size_t measured);

/// Likelihood of an outcome pattern given Charlie applied `op` to |label>.
double pattern_likelihood(StateLabel label, GateOp op,
                          std::span<const Outcome> pattern);

/// Maximum-likelihood guess of Charlie's operation. Ties go to the earlier
/// operation in operations_of(set), so unanimous readings are read as I or U.
GateOp classify_outcomes(StateLabel label, OpSet set,
                         std::span<const Outcome> pattern,
                         std::vector<GateOp>* consistent = nullptr);

/// Splits and measures Bob's retained photons. `actual_op` is the simulator's
/// ground truth and only scores the result; it does not influence the guess.
TrojanInference trojan_infer(const PhotonSignal& signal_after_charlie,
                             StateLabel label, OpSet set, bool forward_one,
                             int tree_depth, GateOp actual_op, RandomStream& rng);

/// Bob reads Alice's encoded photon in basis_after(label, inferred_op) and
/// resends the collapsed eigenstate.
Interception final_intercept(const State& encoded_photon, StateLabel label,
                             GateOp inferred_op, RandomStream& rng);

/// (1/3) * (1/2)^n as printed in the original attack analysis.
double pe_paper(int n);

/// Probability that Bob's guess is wrong, by enumeration over labels,
/// Charlie's uniformly chosen operation and all 2^measured outcome patterns.
double pe_exact(int n, OpSet set, int measured_photons);

EveInterception eve_intercept_resend(const State& photon, RandomStream& rng);

}  // namespace qss
