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

// Physical layer: multi-photon pulses, 50/50 photon-number splitters and
// splitter trees, and the channel between two parties.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qss/qubit.hpp"
#include "qss/random_stream.hpp"

namespace qss {

/// One logical pulse. Honest pulses hold one photon.
struct PhotonSignal {
  std::vector<State> photons;
  std::int64_t origin_index = 0;

  std::size_t size() const noexcept { return photons.size(); }
  bool empty() const noexcept { return photons.empty(); }
};

struct SplitResult {
  PhotonSignal arm_a;
  PhotonSignal arm_b;
};

/// Per-photon sigma_x error probability in transit. Zero is a perfect channel.
struct ChannelModel {
  double flip_probability = 0.0;
};

/// n photons all prepared in `state`. Throws std::invalid_argument for n == 0.
PhotonSignal make_signal(const State& state, std::size_t n,
                         std::int64_t origin_index);

/// Routes every photon independently to either arm with probability 1/2.
/// Photons are never modified; no bosonic interference is modelled.
SplitResult split(const PhotonSignal& signal, RandomStream& rng);

/// Binary tree of 2^depth - 1 splitters. Leaves are ordered so that the
/// first half descends from arm_a of the root splitter.
std::vector<PhotonSignal> split_tree(const PhotonSignal& signal, int depth,
                                     RandomStream& rng);

/// ceil(log2(photons)), at least 1.
int default_tree_depth(std::size_t photons) noexcept;

std::size_t occupied_leaves(std::span<const PhotonSignal> leaves) noexcept;

/// Applies sigma_x to each photon with the channel's flip probability.
/// A zero-probability channel returns the signal unchanged and draws nothing.
PhotonSignal transmit(const PhotonSignal& signal, const ChannelModel& channel,
                      RandomStream& rng);

}  // namespace qss
