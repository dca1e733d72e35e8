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

// Three-party secret sharing runs: the original single-photon protocol with
// Charlie's three-operation encryption, and the improved protocol in which
// Charlie screens Bob's signals for multiple photons, encrypts with four
// operations, hides Pauli-flipped check samples and (optionally) decoys.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qss/attacks.hpp"
#include "qss/encoding.hpp"
#include "qss/photonics.hpp"
#include "qss/qubit.hpp"
#include "qss/random_stream.hpp"

namespace qss {

enum class ProtocolKind : std::uint8_t { Original, Improved };

/// Who discloses first when Alice checks a sample.
enum class AnnouncementOrder : std::uint8_t { BobFirst, CharlieFirst };

/// Cooperative: Bob gives Charlie the initial states before decoding.
/// CharlieAlone: Bob withholds them and Charlie guesses each label.
enum class DecodeMode : std::uint8_t { Cooperative, CharlieAlone };

std::string_view to_string(ProtocolKind k) noexcept;
std::string_view to_string(AnnouncementOrder o) noexcept;

struct ProtocolConfig {
  std::size_t num_signals = 256;
  double charlie_sample_fraction = 0.25;
  double alice_sample_fraction = 0.25;
  /// Fraction of Charlie's unsampled photons put into S_C (sigma_x/sigma_z).
  double pauli_sample_fraction = 0.1;
  double error_threshold = 0.1;
  double multiphoton_threshold = 0.02;
  OpSet op_set = OpSet::ThreeOp;
  int pns_check_depth = 1;
  bool decoys_enabled = false;
  double decoy_fraction = 0.0;
  AnnouncementOrder announcement_order = AnnouncementOrder::BobFirst;
  DecodeMode decode_mode = DecodeMode::Cooperative;
  ChannelModel channel{};
  SecretMessage message;
};

/// Defaults for the given protocol (operation set follows the protocol).
ProtocolConfig default_config(ProtocolKind kind);

/// Every violated constraint, one message per field; empty when valid.
std::vector<std::string> validate(const ProtocolConfig& config, ProtocolKind kind);

/// Number of photons left for message bits after every sampling stage.
/// Sample sizes are round(fraction * pool), so this is deterministic.
std::size_t carrier_capacity(const ProtocolConfig& config, ProtocolKind kind);

enum class SignalRole : std::uint8_t {
  MessageCarrier,
  CharliePnsSample,
  AliceSample,
  CharlieCheckSample,  // S_C
  AliceReturnSample,   // Alice's I/U check photons among S''
  Spare,               // carrier capacity beyond the message length
  Decoy,
};

enum class Party : std::uint8_t { Alice, Bob, Charlie };

enum class Disclosure : std::uint8_t {
  SamplePosition,
  InitialState,
  EncryptionOp,
  PauliOp,
  EncodingOp,
  DecoyState,
};

std::string_view to_string(SignalRole r) noexcept;
std::string_view to_string(Party p) noexcept;
std::string_view to_string(Disclosure d) noexcept;

/// `sequence` is global within a run, so announcements on different signals
/// can be ordered against each other.
struct Announcement {
  std::uint64_t sequence;
  Party party;
  Disclosure what;
};

struct SignalRecord {
  std::int64_t index = 0;
  SignalRole role = SignalRole::MessageCarrier;
  /// Bob's preparation, or Charlie's for a decoy.
  StateLabel label = StateLabel::Zero;
  std::optional<GateOp> charlie_op;
  std::optional<GateOp> alice_op;
  std::vector<Announcement> announcements;
  std::optional<int> final_bit;
  std::size_t photons_sent = 1;
};

enum class Verdict : std::uint8_t { Pass, AbortErrorRate, AbortMultiphoton };

std::string_view to_string(Verdict v) noexcept;

struct CheckReport {
  double error_rate = 0.0;
  double multiphoton_rate = 0.0;
  std::size_t samples_used = 0;
  /// Samples whose reading could be compared with the preparation.
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  std::size_t multiphoton_flags = 0;
  Verdict verdict = Verdict::Pass;
};

/// Multi-photon excess takes precedence over the error rate.
CheckReport make_check_report(std::size_t samples, std::size_t compared,
                              std::size_t mismatches, std::size_t flags,
                              double error_threshold, double multiphoton_threshold);

struct RunResult {
  ProtocolKind protocol = ProtocolKind::Original;
  std::optional<SecretMessage> decoded;
  std::optional<CheckReport> charlie_check;
  CheckReport alice_check;
  /// Alice's I/U samples checked by Charlie before decoding.
  std::optional<CheckReport> return_check;
  std::optional<double> decoy_error_rate;
  std::vector<SignalRecord> transcript;
  std::optional<AttackReport> attacker_view;

  /// First failing check in protocol order, or Pass.
  Verdict verdict() const noexcept;
};

RunResult run_original(const ProtocolConfig& config, const AttackStrategy& attack,
                       RandomStream& rng);
RunResult run_improved(const ProtocolConfig& config, const AttackStrategy& attack,
                       RandomStream& rng);
RunResult run_protocol(ProtocolKind kind, const ProtocolConfig& config,
                       const AttackStrategy& attack, RandomStream& rng);

struct DecoyEntry {
  std::size_t position;
  StateLabel label;
};
using DecoyRegistry = std::vector<DecoyEntry>;

struct DecoyInsertion {
  std::vector<PhotonSignal> sequence;
  DecoyRegistry registry;  // sorted by position
};

/// Inserts round(fraction * n) single-photon decoys in uniformly random
/// labels at uniformly random positions. Decoys carry origin_index -1.
DecoyInsertion insert_decoys(std::vector<PhotonSignal> sequence, double fraction,
                             RandomStream& rng);

struct DecoyTally {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  double error_rate() const noexcept {
    return checked == 0 ? 0.0 : static_cast<double>(mismatches) / checked;
  }
};

/// Measures every registered decoy in its preparation basis.
DecoyTally tally_decoys(std::span<const PhotonSignal> returned,
                        const DecoyRegistry& registry, RandomStream& rng);

/// Error rate over the decoys; throws std::invalid_argument for an empty
/// registry.
double check_decoys(std::span<const PhotonSignal> returned,
                    const DecoyRegistry& registry, RandomStream& rng);

struct BitPair {
  int expected;
  int measured;
};

/// Fraction of mismatching pairs; throws std::invalid_argument when empty.
double estimate_error_rate(std::span<const BitPair> samples);

/// Violations of the disclosure discipline, one message each.
std::vector<std::string> validate_transcript(std::span<const SignalRecord> transcript,
                                             AnnouncementOrder order);

}  // namespace qss
