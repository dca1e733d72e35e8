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

#include "qss/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace qss {

std::string_view to_string(ProtocolKind k) noexcept {
  return k == ProtocolKind::Original ? "original" : "improved";
}

std::string_view to_string(AnnouncementOrder o) noexcept {
  return o == AnnouncementOrder::BobFirst ? "bob-first" : "charlie-first";
}

std::string_view to_string(SignalRole r) noexcept {
  switch (r) {
    case SignalRole::MessageCarrier: return "carrier";
    case SignalRole::CharliePnsSample: return "charlie-pns-sample";
    case SignalRole::AliceSample: return "alice-sample";
    case SignalRole::CharlieCheckSample: return "charlie-check-sample";
    case SignalRole::AliceReturnSample: return "alice-return-sample";
    case SignalRole::Spare: return "spare";
    case SignalRole::Decoy: return "decoy";
  }
  return "?";
}

std::string_view to_string(Party p) noexcept {
  switch (p) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::Charlie: return "charlie";
  }
  return "?";
}

std::string_view to_string(Disclosure d) noexcept {
  switch (d) {
    case Disclosure::SamplePosition: return "sample-position";
    case Disclosure::InitialState: return "initial-state";
    case Disclosure::EncryptionOp: return "encryption-op";
    case Disclosure::PauliOp: return "pauli-op";
    case Disclosure::EncodingOp: return "encoding-op";
    case Disclosure::DecoyState: return "decoy-state";
  }
  return "?";
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::AbortErrorRate: return "abort-error-rate";
    case Verdict::AbortMultiphoton: return "abort-multiphoton";
  }
  return "?";
}

ProtocolConfig default_config(ProtocolKind kind) {
  ProtocolConfig c;
  c.op_set = kind == ProtocolKind::Original ? OpSet::ThreeOp : OpSet::FourOp;
  return c;
}

namespace {

std::size_t sample_count(double fraction, std::size_t pool) {
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(pool)));
  return std::min(k, pool);
}

struct Capacity {
  std::size_t pns_samples = 0;
  std::size_t pauli_samples = 0;
  std::size_t alice_samples = 0;
  std::size_t return_samples = 0;
  std::size_t carriers = 0;
};

Capacity capacity_of(const ProtocolConfig& c, ProtocolKind kind) {
  Capacity cap;
  std::size_t pool = c.num_signals;
  if (kind == ProtocolKind::Improved) {
    cap.pns_samples = sample_count(c.charlie_sample_fraction, pool);
    pool -= cap.pns_samples;
    cap.pauli_samples = sample_count(c.pauli_sample_fraction, pool);
    pool -= cap.pauli_samples;
  }
  cap.alice_samples = sample_count(c.alice_sample_fraction, pool);
  pool -= cap.alice_samples;
  cap.return_samples = sample_count(c.alice_sample_fraction, pool);
  cap.carriers = pool - cap.return_samples;
  return cap;
}

bool open_unit(double x) { return x > 0.0 && x < 1.0; }
bool closed_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

std::size_t carrier_capacity(const ProtocolConfig& config, ProtocolKind kind) {
  return capacity_of(config, kind).carriers;
}

std::vector<std::string> validate(const ProtocolConfig& c, ProtocolKind kind) {
  std::vector<std::string> errors;
  auto fail = [&](std::string msg) { errors.push_back(std::move(msg)); };
  auto num = [](double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  };

  if (c.num_signals == 0) fail("signals: must be >= 1");
  if (!open_unit(c.charlie_sample_fraction))
    fail("charlie-sample-fraction: " + num(c.charlie_sample_fraction) + " outside (0, 1)");
  if (!open_unit(c.alice_sample_fraction))
    fail("alice-sample-fraction: " + num(c.alice_sample_fraction) + " outside (0, 1)");
  if (!(c.pauli_sample_fraction >= 0.0 && c.pauli_sample_fraction < 1.0))
    fail("sc-fraction: " + num(c.pauli_sample_fraction) + " outside [0, 1)");
  if (!closed_unit(c.error_threshold))
    fail("error-threshold: " + num(c.error_threshold) + " outside [0, 1]");
  if (!closed_unit(c.multiphoton_threshold))
    fail("multiphoton-threshold: " + num(c.multiphoton_threshold) + " outside [0, 1]");
  if (c.pns_check_depth < 1 || c.pns_check_depth > 20)
    fail("pns-depth: " + std::to_string(c.pns_check_depth) + " outside [1, 20]");
  if (!(c.decoy_fraction >= 0.0 && c.decoy_fraction < 1.0))
    fail("decoy-fraction: " + num(c.decoy_fraction) + " outside [0, 1)");
  if (!closed_unit(c.channel.flip_probability))
    fail("flip-probability: " + num(c.channel.flip_probability) + " outside [0, 1]");
  if (c.message.empty()) fail("message: must contain at least one bit");

  if (kind == ProtocolKind::Original) {
    if (c.op_set != OpSet::ThreeOp) fail("op-set: the original protocol uses {I, U, H}");
    if (c.decoys_enabled) fail("decoys: not part of the original protocol");
  } else if (c.op_set != OpSet::FourOp) {
    fail("op-set: the improved protocol uses {I, U, H, Hbar}");
  }

  if (errors.empty()) {
    const auto cap = capacity_of(c, kind);
    if (kind == ProtocolKind::Improved && cap.pns_samples == 0)
      fail("signals: too few for Charlie's multi-photon check sample");
    if (cap.alice_samples == 0) fail("signals: too few for Alice's eavesdropping check");
    if (cap.carriers < c.message.size()) {
      fail("signals: " + std::to_string(c.num_signals) + " leave " +
           std::to_string(cap.carriers) + " carriers for a " +
           std::to_string(c.message.size()) + "-bit message");
    }
  }
  return errors;
}

CheckReport make_check_report(std::size_t samples, std::size_t compared,
                              std::size_t mismatches, std::size_t flags,
                              double error_threshold, double multiphoton_threshold) {
  CheckReport r;
  r.samples_used = samples;
  r.compared = compared;
  r.mismatches = mismatches;
  r.multiphoton_flags = flags;
  r.error_rate = compared == 0 ? 0.0 : static_cast<double>(mismatches) / compared;
  r.multiphoton_rate = samples == 0 ? 0.0 : static_cast<double>(flags) / samples;
  if (r.multiphoton_rate > multiphoton_threshold) {
    r.verdict = Verdict::AbortMultiphoton;
  } else if (r.error_rate > error_threshold) {
    r.verdict = Verdict::AbortErrorRate;
  }
  return r;
}

Verdict RunResult::verdict() const noexcept {
  if (charlie_check && charlie_check->verdict != Verdict::Pass) return charlie_check->verdict;
  if (alice_check.verdict != Verdict::Pass) return alice_check.verdict;
  if (return_check && return_check->verdict != Verdict::Pass) return return_check->verdict;
  return Verdict::Pass;
}

double estimate_error_rate(std::span<const BitPair> samples) {
  if (samples.empty()) throw std::invalid_argument("estimate_error_rate: no samples");
  const auto bad = std::count_if(samples.begin(), samples.end(),
                                 [](const BitPair& p) { return p.expected != p.measured; });
  return static_cast<double>(bad) / static_cast<double>(samples.size());
}

namespace {

StateLabel random_label(RandomStream& rng) {
  return kAllLabels[rng.uniform_index(kAllLabels.size())];
}

int read_signal(const PhotonSignal& signal, Basis basis, RandomStream& rng) {
  if (signal.empty()) throw std::logic_error("read_signal: no photon arrived");
  return measure(signal.photons.front(), basis, rng).bit;
}

/// Uniformly random k-subset of `pool`; both halves come back sorted.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> choose(
    std::vector<std::size_t> pool, std::size_t k, RandomStream& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + rng.uniform_index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::size_t> rest(pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end());
  std::sort(chosen.begin(), chosen.end());
  std::sort(rest.begin(), rest.end());
  return {std::move(chosen), std::move(rest)};
}

}  // namespace

DecoyInsertion insert_decoys(std::vector<PhotonSignal> sequence, double fraction,
                             RandomStream& rng) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("insert_decoys: fraction outside [0, 1)");
  }
  const std::size_t n = sequence.size();
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  DecoyInsertion out;
  if (k == 0) {
    out.sequence = std::move(sequence);
    return out;
  }
  std::vector<std::size_t> slots(n + k);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  auto positions = choose(std::move(slots), k, rng).first;

  out.sequence.reserve(n + k);
  std::size_t next_decoy = 0;
  std::size_t next_signal = 0;
  for (std::size_t pos = 0; pos < n + k; ++pos) {
    if (next_decoy < k && positions[next_decoy] == pos) {
      const StateLabel label = random_label(rng);
      out.registry.push_back({pos, label});
      out.sequence.push_back(make_signal(state_of(label), 1, -1));
      ++next_decoy;
    } else {
      out.sequence.push_back(std::move(sequence[next_signal++]));
    }
  }
  return out;
}

DecoyTally tally_decoys(std::span<const PhotonSignal> returned,
                        const DecoyRegistry& registry, RandomStream& rng) {
  DecoyTally t;
  for (const auto& entry : registry) {
    if (entry.position >= returned.size()) {
      throw std::out_of_range("tally_decoys: decoy position beyond sequence");
    }
    const int bit = read_signal(returned[entry.position], basis_of(entry.label), rng);
    ++t.checked;
    if (bit != bit_of(entry.label)) ++t.mismatches;
  }
  return t;
}

double check_decoys(std::span<const PhotonSignal> returned,
                    const DecoyRegistry& registry, RandomStream& rng) {
  if (registry.empty()) throw std::invalid_argument("check_decoys: empty registry");
  return tally_decoys(returned, registry, rng).error_rate();
}

namespace {

struct Slot {
  SignalRecord record;
  PhotonSignal signal;
  std::optional<InferenceResult> inference;
  std::optional<int> stolen_bit;
};

class ProtocolRun {
 public:
  ProtocolRun(ProtocolKind kind, const ProtocolConfig& config,
              const AttackStrategy& attack, RandomStream& rng)
      : kind_(kind), config_(config), attack_(attack), rng_(rng) {
    if (auto errors = validate(config, kind); !errors.empty()) {
      std::string msg = "invalid protocol configuration:";
      for (const auto& e : errors) msg += "\n  " + e;
      throw std::invalid_argument(msg);
    }
    if (const auto* t = std::get_if<TrojanBob>(&attack_)) {
      if (t->n_photons < 1) throw std::invalid_argument("TrojanBob: n_photons must be >= 1");
      if (t->tree_depth < 0) throw std::invalid_argument("TrojanBob: tree_depth must be >= 0");
      trojan_ = t->n_photons >= 2 ? t : nullptr;
    }
    eve_ = std::get_if<InterceptResendEve>(&attack_);
  }

  RunResult execute();

 private:
  void announce(Slot& s, Party p, Disclosure d) {
    s.record.announcements.push_back({sequence_++, p, d});
  }

  void hop(Slot& s, Segment segment) {
    if (eve_ && eve_->segment == segment) {
      for (auto& photon : s.signal.photons) photon = eve_intercept_resend(photon, rng_).resent;
    }
    s.signal = transmit(s.signal, config_.channel, rng_);
  }

  void prepare();
  void charlie_multiphoton_check(const std::vector<std::size_t>& samples);
  void encrypt(const std::vector<std::size_t>& active, const std::vector<std::size_t>& pauli);
  void trojan_tap(const std::vector<std::size_t>& active);
  void alice_check(const std::vector<std::size_t>& samples,
                   const std::vector<std::size_t>& pauli);
  void encode(const std::vector<std::size_t>& returns,
              const std::vector<std::size_t>& carriers);
  void return_check(const std::vector<std::size_t>& returns);
  void decode(const std::vector<std::size_t>& carriers);
  RunResult finish();

  ProtocolKind kind_;
  const ProtocolConfig& config_;
  const AttackStrategy& attack_;
  RandomStream& rng_;
  const TrojanBob* trojan_ = nullptr;
  const InterceptResendEve* eve_ = nullptr;

  std::uint64_t sequence_ = 0;
  std::vector<Slot> slots_;
  std::vector<Slot> decoys_;
  DecoyRegistry decoy_registry_;
  RunResult result_;
};

void ProtocolRun::prepare() {
  const std::size_t n = config_.num_signals;
  slots_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = slots_[i];
    const auto index = static_cast<std::int64_t>(i);
    s.record.index = index;
    s.record.label = random_label(rng_);
    s.signal = trojan_ ? trojan_prepare(s.record.label, trojan_->n_photons, index)
                       : make_signal(state_of(s.record.label), 1, index);
    s.record.photons_sent = s.signal.size();
  }
  for (auto& s : slots_) hop(s, Segment::BobToCharlie);
}

void ProtocolRun::charlie_multiphoton_check(const std::vector<std::size_t>& samples) {
  for (auto i : samples) {
    slots_[i].record.role = SignalRole::CharliePnsSample;
    announce(slots_[i], Party::Charlie, Disclosure::SamplePosition);
  }
  struct Reading {
    std::size_t registering;
    Basis basis;
    int bit;
  };
  std::vector<Reading> readings;
  readings.reserve(samples.size());
  for (auto i : samples) {
    const auto leaves = split_tree(slots_[i].signal, config_.pns_check_depth, rng_);
    Reading r{0, Basis::Z, 0};
    for (const auto& leaf : leaves) {
      if (leaf.empty()) continue;
      const Basis b = rng_.bit() == 0 ? Basis::Z : Basis::X;
      const int bit = measure(leaf.photons.front(), b, rng_).bit;
      if (r.registering++ == 0) {
        r.basis = b;
        r.bit = bit;
      }
    }
    readings.push_back(r);
  }
  // Bob discloses the initial states only after Charlie has measured.
  std::size_t compared = 0, mismatches = 0, flags = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    auto& s = slots_[samples[k]];
    announce(s, Party::Bob, Disclosure::InitialState);
    const auto& r = readings[k];
    if (r.registering >= 2) {
      ++flags;
    } else if (r.registering == 1 && r.basis == basis_of(s.record.label)) {
      ++compared;
      if (r.bit != bit_of(s.record.label)) ++mismatches;
    }
  }
  result_.charlie_check = make_check_report(samples.size(), compared, mismatches, flags,
                                            config_.error_threshold,
                                            config_.multiphoton_threshold);
}

void ProtocolRun::encrypt(const std::vector<std::size_t>& active,
                          const std::vector<std::size_t>& pauli) {
  const auto ops = operations_of(config_.op_set);
  std::size_t next_pauli = 0;
  for (auto i : active) {
    auto& s = slots_[i];
    GateOp op;
    if (next_pauli < pauli.size() && pauli[next_pauli] == i) {
      ++next_pauli;
      s.record.role = SignalRole::CharlieCheckSample;
      op = rng_.bit() == 0 ? GateOp::PauliX : GateOp::PauliZ;
    } else {
      op = ops[rng_.uniform_index(ops.size())];
    }
    s.record.charlie_op = op;
    for (auto& photon : s.signal.photons) photon = apply(op, photon);
  }
}

void ProtocolRun::trojan_tap(const std::vector<std::size_t>& active) {
  for (auto i : active) {
    auto& s = slots_[i];
    auto t = trojan_infer(s.signal, s.record.label, config_.op_set, trojan_->forward_one,
                          trojan_->tree_depth, *s.record.charlie_op, rng_);
    if (t.forwarded) {
      s.signal = std::move(*t.forwarded);
    } else {
      // Nothing held back: Bob resends his best guess of the encrypted state.
      s.signal = make_signal(apply(t.inference.guessed_op, state_of(s.record.label)), 1,
                             s.record.index);
    }
    s.inference = std::move(t.inference);
  }
}

void ProtocolRun::alice_check(const std::vector<std::size_t>& samples,
                              const std::vector<std::size_t>& pauli) {
  for (auto i : pauli) announce(slots_[i], Party::Charlie, Disclosure::SamplePosition);
  for (auto& d : decoys_) announce(d, Party::Charlie, Disclosure::DecoyState);

  for (auto i : samples) {
    slots_[i].record.role = SignalRole::AliceSample;
    announce(slots_[i], Party::Alice, Disclosure::SamplePosition);
  }
  for (auto i : samples) {
    auto& s = slots_[i];
    if (config_.announcement_order == AnnouncementOrder::BobFirst) {
      announce(s, Party::Bob, Disclosure::InitialState);
      announce(s, Party::Charlie, Disclosure::EncryptionOp);
    } else {
      announce(s, Party::Charlie, Disclosure::EncryptionOp);
      announce(s, Party::Bob, Disclosure::InitialState);
    }
  }
  for (auto i : pauli) {
    announce(slots_[i], Party::Bob, Disclosure::InitialState);
    announce(slots_[i], Party::Charlie, Disclosure::PauliOp);
  }

  std::size_t checked = 0, mismatches = 0;
  auto check = [&](Slot& s) {
    const StateLabel label = s.record.label;
    const GateOp op = *s.record.charlie_op;
    const int bit = read_signal(s.signal, basis_after(label, op), rng_);
    s.record.final_bit = bit;
    ++checked;
    if (bit != expected_bit(label, op, GateOp::I)) ++mismatches;
  };
  for (auto i : samples) check(slots_[i]);
  for (auto i : pauli) check(slots_[i]);

  if (!decoys_.empty()) {
    DecoyTally tally;
    for (auto& d : decoys_) {
      const int bit = read_signal(d.signal, basis_of(d.record.label), rng_);
      d.record.final_bit = bit;
      ++tally.checked;
      if (bit != bit_of(d.record.label)) ++tally.mismatches;
    }
    checked += tally.checked;
    mismatches += tally.mismatches;
    result_.decoy_error_rate = tally.error_rate();
  }
  result_.alice_check = make_check_report(checked, checked, mismatches, 0,
                                          config_.error_threshold,
                                          config_.multiphoton_threshold);
}

void ProtocolRun::encode(const std::vector<std::size_t>& returns,
                         const std::vector<std::size_t>& carriers) {
  for (auto i : returns) {
    slots_[i].record.role = SignalRole::AliceReturnSample;
    slots_[i].record.alice_op = rng_.bit() == 0 ? GateOp::I : GateOp::U;
  }
  for (std::size_t k = 0; k < carriers.size(); ++k) {
    auto& r = slots_[carriers[k]].record;
    if (k < config_.message.size()) {
      r.role = SignalRole::MessageCarrier;
      r.alice_op = config_.message[k] ? GateOp::U : GateOp::I;
    } else {
      r.role = SignalRole::Spare;
      r.alice_op = GateOp::I;
    }
  }
  auto encode_one = [](Slot& s) {
    for (auto& photon : s.signal.photons) photon = apply(*s.record.alice_op, photon);
  };
  for (auto i : returns) encode_one(slots_[i]);
  for (auto i : carriers) encode_one(slots_[i]);
}

void ProtocolRun::return_check(const std::vector<std::size_t>& returns) {
  for (auto i : returns) {
    announce(slots_[i], Party::Alice, Disclosure::SamplePosition);
    announce(slots_[i], Party::Alice, Disclosure::EncodingOp);
  }
  for (auto i : returns) announce(slots_[i], Party::Bob, Disclosure::InitialState);

  std::size_t mismatches = 0;
  for (auto i : returns) {
    auto& s = slots_[i];
    const StateLabel label = s.record.label;
    const GateOp op = *s.record.charlie_op;
    const int bit = read_signal(s.signal, basis_after(label, op), rng_);
    s.record.final_bit = bit;
    if (bit != expected_bit(label, op, *s.record.alice_op)) ++mismatches;
  }
  result_.return_check = make_check_report(returns.size(), returns.size(), mismatches, 0,
                                           config_.error_threshold,
                                           config_.multiphoton_threshold);
}

void ProtocolRun::decode(const std::vector<std::size_t>& carriers) {
  std::vector<std::uint8_t> bits;
  bits.reserve(config_.message.size());
  for (auto i : carriers) {
    auto& s = slots_[i];
    StateLabel label = s.record.label;
    if (config_.decode_mode == DecodeMode::Cooperative) {
      announce(s, Party::Bob, Disclosure::InitialState);
    } else {
      label = random_label(rng_);
    }
    const GateOp op = *s.record.charlie_op;
    const int reading = read_signal(s.signal, basis_after(label, op), rng_);
    const int bit = decode_bit(label, op, reading);
    s.record.final_bit = bit;
    if (s.record.role == SignalRole::MessageCarrier) bits.push_back(static_cast<std::uint8_t>(bit));
  }
  result_.decoded = SecretMessage(std::move(bits));
}

RunResult ProtocolRun::finish() {
  if (!std::holds_alternative<NoAttack>(attack_)) {
    AttackReport report;
    std::vector<std::uint8_t> stolen;
    bool complete = true;
    for (auto& s : slots_) {
      if (s.inference) report.inferences.push_back(*s.inference);
      if (s.record.role != SignalRole::MessageCarrier || !s.record.alice_op) continue;
      ++report.carriers;
      if (!s.stolen_bit) {
        complete = false;
        continue;
      }
      stolen.push_back(static_cast<std::uint8_t>(*s.stolen_bit));
      if (*s.stolen_bit == (*s.record.alice_op == GateOp::U ? 1 : 0)) ++report.recovered_correct;
    }
    if (complete && report.carriers > 0) report.recovered_bits = SecretMessage(std::move(stolen));
    report.recovery_rate = report.carriers == 0
                               ? 0.0
                               : static_cast<double>(report.recovered_correct) / report.carriers;
    report.detected = result_.verdict() != Verdict::Pass;
    result_.attacker_view = std::move(report);
  }

  result_.transcript.reserve(slots_.size() + decoys_.size());
  for (auto& s : slots_) result_.transcript.push_back(std::move(s.record));
  for (auto& d : decoys_) result_.transcript.push_back(std::move(d.record));
  if (result_.verdict() != Verdict::Pass) result_.decoded.reset();
  return std::move(result_);
}

RunResult ProtocolRun::execute() {
  result_.protocol = kind_;
  prepare();

  std::vector<std::size_t> active(slots_.size());
  std::iota(active.begin(), active.end(), std::size_t{0});

  if (kind_ == ProtocolKind::Improved) {
    auto [samples, rest] =
        choose(std::move(active), sample_count(config_.charlie_sample_fraction, slots_.size()),
               rng_);
    charlie_multiphoton_check(samples);
    active = std::move(rest);
    if (result_.charlie_check->verdict != Verdict::Pass) return finish();
  }

  std::vector<std::size_t> pauli;
  std::vector<std::size_t> pool = active;
  if (kind_ == ProtocolKind::Improved) {
    std::tie(pauli, pool) =
        choose(active, sample_count(config_.pauli_sample_fraction, active.size()), rng_);
  }
  encrypt(active, pauli);
  if (trojan_) trojan_tap(active);

  if (kind_ == ProtocolKind::Improved && config_.decoys_enabled) {
    std::vector<PhotonSignal> sequence;
    sequence.reserve(active.size());
    for (auto i : active) sequence.push_back(slots_[i].signal);
    auto inserted = insert_decoys(std::move(sequence), config_.decoy_fraction, rng_);
    decoy_registry_ = std::move(inserted.registry);
    for (std::size_t k = 0; k < decoy_registry_.size(); ++k) {
      Slot d;
      d.record.index = static_cast<std::int64_t>(slots_.size() + k);
      d.record.role = SignalRole::Decoy;
      d.record.label = decoy_registry_[k].label;
      d.signal = inserted.sequence[decoy_registry_[k].position];
      decoys_.push_back(std::move(d));
    }
    // Channel order: the augmented sequence.
    std::size_t next_decoy = 0, next_signal = 0;
    for (std::size_t pos = 0; pos < inserted.sequence.size(); ++pos) {
      if (next_decoy < decoy_registry_.size() && decoy_registry_[next_decoy].position == pos) {
        hop(decoys_[next_decoy++], Segment::CharlieToAlice);
      } else {
        hop(slots_[active[next_signal++]], Segment::CharlieToAlice);
      }
    }
  } else {
    for (auto i : active) hop(slots_[i], Segment::CharlieToAlice);
  }

  auto [alice_samples, unchecked] =
      choose(pool, sample_count(config_.alice_sample_fraction, pool.size()), rng_);
  alice_check(alice_samples, pauli);
  if (result_.alice_check.verdict != Verdict::Pass) return finish();

  auto [returns, carriers] =
      choose(unchecked, sample_count(config_.alice_sample_fraction, unchecked.size()), rng_);
  encode(returns, carriers);

  for (auto i : unchecked) {
    auto& s = slots_[i];
    if (trojan_ && s.inference) {
      auto icpt = final_intercept(s.signal.photons.front(), s.record.label,
                                  s.inference->guessed_op, rng_);
      s.stolen_bit = icpt.stolen_bit;
      s.signal.photons = {std::move(icpt.resent)};
    }
    hop(s, Segment::AliceToCharlie);
  }

  return_check(returns);
  if (result_.return_check->verdict != Verdict::Pass) return finish();

  decode(carriers);
  return finish();
}

}  // namespace

RunResult run_original(const ProtocolConfig& config, const AttackStrategy& attack,
                       RandomStream& rng) {
  return ProtocolRun(ProtocolKind::Original, config, attack, rng).execute();
}

RunResult run_improved(const ProtocolConfig& config, const AttackStrategy& attack,
                       RandomStream& rng) {
  return ProtocolRun(ProtocolKind::Improved, config, attack, rng).execute();
}

RunResult run_protocol(ProtocolKind kind, const ProtocolConfig& config,
                       const AttackStrategy& attack, RandomStream& rng) {
  return ProtocolRun(kind, config, attack, rng).execute();
}

namespace {

bool precedes(const SignalRecord& r, Party p1, Disclosure d1, Party p2, Disclosure d2) {
  std::optional<std::uint64_t> a, b;
  for (const auto& an : r.announcements) {
    if (an.party == p1 && an.what == d1 && !a) a = an.sequence;
    if (an.party == p2 && an.what == d2 && !b) b = an.sequence;
  }
  return a && b && *a < *b;
}

bool has(const SignalRecord& r, Party p, Disclosure d) {
  return std::any_of(r.announcements.begin(), r.announcements.end(),
                     [&](const Announcement& a) { return a.party == p && a.what == d; });
}

}  // namespace

std::vector<std::string> validate_transcript(std::span<const SignalRecord> transcript,
                                             AnnouncementOrder order) {
  std::vector<std::string> violations;
  auto fail = [&](const SignalRecord& r, std::string_view what) {
    violations.push_back("signal " + std::to_string(r.index) + " (" +
                         std::string(to_string(r.role)) + "): " + std::string(what));
  };

  std::optional<std::uint64_t> last_check_disclosure;
  for (const auto& r : transcript) {
    if (r.role != SignalRole::AliceSample && r.role != SignalRole::AliceReturnSample &&
        r.role != SignalRole::CharlieCheckSample)
      continue;
    for (const auto& a : r.announcements)
      last_check_disclosure = std::max(last_check_disclosure.value_or(0), a.sequence);
  }

  for (const auto& r : transcript) {
    for (std::size_t k = 1; k < r.announcements.size(); ++k) {
      if (r.announcements[k].sequence <= r.announcements[k - 1].sequence)
        fail(r, "announcements out of sequence");
    }
    auto allow_only = [&](std::initializer_list<std::pair<Party, Disclosure>> allowed) {
      for (const auto& a : r.announcements) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const auto& p) {
          return p.first == a.party && p.second == a.what;
        });
        if (!ok) {
          fail(r, std::string("unexpected ") + std::string(to_string(a.party)) + " " +
                      std::string(to_string(a.what)));
        }
      }
    };

    switch (r.role) {
      case SignalRole::CharliePnsSample:
        allow_only({{Party::Charlie, Disclosure::SamplePosition},
                    {Party::Bob, Disclosure::InitialState}});
        if (has(r, Party::Bob, Disclosure::InitialState) &&
            !precedes(r, Party::Charlie, Disclosure::SamplePosition, Party::Bob,
                      Disclosure::InitialState))
          fail(r, "Bob disclosed the state before Charlie selected the sample");
        break;
      case SignalRole::AliceSample: {
        allow_only({{Party::Alice, Disclosure::SamplePosition},
                    {Party::Bob, Disclosure::InitialState},
                    {Party::Charlie, Disclosure::EncryptionOp}});
        if (!has(r, Party::Bob, Disclosure::InitialState) ||
            !has(r, Party::Charlie, Disclosure::EncryptionOp)) {
          fail(r, "missing Bob or Charlie disclosure");
          break;
        }
        if (!precedes(r, Party::Alice, Disclosure::SamplePosition, Party::Bob,
                      Disclosure::InitialState) ||
            !precedes(r, Party::Alice, Disclosure::SamplePosition, Party::Charlie,
                      Disclosure::EncryptionOp))
          fail(r, "disclosure before Alice announced the sample");
        const bool bob_first = precedes(r, Party::Bob, Disclosure::InitialState,
                                        Party::Charlie, Disclosure::EncryptionOp);
        if (bob_first != (order == AnnouncementOrder::BobFirst))
          fail(r, "disclosure order differs from the declared order");
        break;
      }
      case SignalRole::CharlieCheckSample:
        allow_only({{Party::Charlie, Disclosure::SamplePosition},
                    {Party::Bob, Disclosure::InitialState},
                    {Party::Charlie, Disclosure::PauliOp}});
        if (has(r, Party::Bob, Disclosure::InitialState) &&
            !(precedes(r, Party::Charlie, Disclosure::SamplePosition, Party::Bob,
                       Disclosure::InitialState) &&
              precedes(r, Party::Bob, Disclosure::InitialState, Party::Charlie,
                       Disclosure::PauliOp)))
          fail(r, "S_C disclosures must run position, initial state, Pauli operation");
        break;
      case SignalRole::AliceReturnSample:
        allow_only({{Party::Alice, Disclosure::SamplePosition},
                    {Party::Alice, Disclosure::EncodingOp},
                    {Party::Bob, Disclosure::InitialState}});
        if (has(r, Party::Bob, Disclosure::InitialState) &&
            !precedes(r, Party::Alice, Disclosure::EncodingOp, Party::Bob,
                      Disclosure::InitialState))
          fail(r, "Bob disclosed the state before Alice revealed her operation");
        break;
      case SignalRole::MessageCarrier:
      case SignalRole::Spare:
        allow_only({{Party::Bob, Disclosure::InitialState}});
        for (const auto& a : r.announcements) {
          if (last_check_disclosure && a.sequence < *last_check_disclosure)
            fail(r, "carrier state disclosed before the eavesdropping checks finished");
        }
        break;
      case SignalRole::Decoy:
        allow_only({{Party::Charlie, Disclosure::DecoyState}});
        break;
    }
  }
  return violations;
}

}  // namespace qss
