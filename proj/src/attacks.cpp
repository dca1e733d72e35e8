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

#include "qss/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qss {

std::string_view to_string(Segment s) noexcept {
  switch (s) {
    case Segment::BobToCharlie: return "bob-charlie";
    case Segment::CharlieToAlice: return "charlie-alice";
    case Segment::AliceToCharlie: return "alice-charlie";
  }
  return "?";
}

std::string_view attack_name(const AttackStrategy& attack) noexcept {
  switch (attack.index()) {
    case 1: return "trojan";
    case 2: return "eve";
    default: return "none";
  }
}

std::size_t AttackReport::ambiguous_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      inferences.begin(), inferences.end(), [](const auto& r) { return r.ambiguous; }));
}

PhotonSignal trojan_prepare(StateLabel label, int n, std::int64_t origin_index) {
  if (n < 2) {
    throw std::invalid_argument("trojan_prepare: need at least 2 photons, got " +
                                std::to_string(n));
  }
  return make_signal(state_of(label), static_cast<std::size_t>(n), origin_index);
}

std::vector<Basis> trojan_measurement_bases(StateLabel label, OpSet set,
                                            std::size_t measured) {
  const Basis own = basis_of(label);
  std::vector<Basis> bases(measured, own);
  if (set == OpSet::FourOp) {
    for (std::size_t i = (measured + 1) / 2; i < measured; ++i) bases[i] = conjugate(own);
  }
  return bases;
}

double pattern_likelihood(StateLabel label, GateOp op,
                          std::span<const Outcome> pattern) {
  const State post = apply(op, state_of(label));
  double p = 1.0;
  for (const auto& o : pattern) p *= prob_of(post, o.basis, o.bit);
  return p;
}

GateOp classify_outcomes(StateLabel label, OpSet set,
                         std::span<const Outcome> pattern,
                         std::vector<GateOp>* consistent) {
  if (consistent) consistent->clear();
  GateOp best = GateOp::I;
  double best_likelihood = -1.0;
  for (GateOp op : operations_of(set)) {
    const double l = pattern_likelihood(label, op, pattern);
    if (consistent && l > kCertainty * kCertainty) consistent->push_back(op);
    // Relative margin so that exact ties are not decided by rounding.
    if (l > best_likelihood * (1.0 + 1e-9)) {
      best = op;
      best_likelihood = l;
    }
  }
  return best;
}

TrojanInference trojan_infer(const PhotonSignal& signal_after_charlie,
                             StateLabel label, OpSet set, bool forward_one,
                             int tree_depth, GateOp actual_op, RandomStream& rng) {
  PhotonSignal retained = signal_after_charlie;
  std::optional<PhotonSignal> forwarded;
  if (forward_one && !retained.empty()) {
    forwarded = PhotonSignal{{retained.photons.front()}, retained.origin_index};
    retained.photons.erase(retained.photons.begin());
  }
  if (retained.empty()) {
    throw std::invalid_argument("trojan_infer: no photon left to measure");
  }

  const int depth = tree_depth > 0 ? tree_depth : default_tree_depth(retained.size());
  const auto leaves = split_tree(retained, depth, rng);
  const auto bases = trojan_measurement_bases(label, set, retained.size());

  InferenceResult result;
  result.actual_op = actual_op;
  result.outcome_pattern.reserve(retained.size());
  std::size_t k = 0;
  for (const auto& leaf : leaves) {
    for (const auto& photon : leaf.photons) {
      const Basis b = bases[k++];
      result.outcome_pattern.push_back({b, measure(photon, b, rng).bit});
    }
  }
  result.guessed_op =
      classify_outcomes(label, set, result.outcome_pattern, &result.consistent_ops);
  result.correct = result.guessed_op == actual_op;
  result.ambiguous = result.consistent_ops.size() > 1 && !result.correct;
  return {std::move(result), std::move(forwarded)};
}

Interception final_intercept(const State& encoded_photon, StateLabel label,
                             GateOp inferred_op, RandomStream& rng) {
  const Basis basis = basis_after(label, inferred_op);
  auto m = measure(encoded_photon, basis, rng);
  const int stolen = decode_bit(label, inferred_op, m.bit);
  return {stolen, std::move(m.collapsed)};
}

double pe_paper(int n) {
  if (n < 1) throw std::invalid_argument("pe_paper: n must be >= 1");
  return std::ldexp(1.0 / 3.0, -n);
}

double pe_exact(int n, OpSet set, int measured_photons) {
  if (n < 1) throw std::invalid_argument("pe_exact: n must be >= 1");
  if (measured_photons < 1 || measured_photons > n || measured_photons > 24) {
    throw std::invalid_argument("pe_exact: measured photons must be in [1, min(n, 24)]");
  }
  const auto ops = operations_of(set);
  const auto m = static_cast<std::size_t>(measured_photons);
  const double weight = 1.0 / (static_cast<double>(kAllLabels.size()) * ops.size());

  double wrong = 0.0;
  std::vector<Outcome> pattern(m);
  for (StateLabel label : kAllLabels) {
    const auto bases = trojan_measurement_bases(label, set, m);
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
      for (std::size_t i = 0; i < m; ++i) {
        pattern[i] = {bases[i], static_cast<int>((bits >> i) & 1u)};
      }
      const GateOp guess = classify_outcomes(label, set, pattern);
      for (GateOp actual : ops) {
        if (actual == guess) continue;
        wrong += weight * pattern_likelihood(label, actual, pattern);
      }
    }
  }
  return wrong;
}

EveInterception eve_intercept_resend(const State& photon, RandomStream& rng) {
  const Basis basis = rng.bit() == 0 ? Basis::Z : Basis::X;
  auto m = measure(photon, basis, rng);
  return {std::move(m.collapsed), m.bit, basis};
}

}  // namespace qss
