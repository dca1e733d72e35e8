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

#include "qss/photonics.hpp"

#include <stdexcept>
#include <string>

namespace qss {

PhotonSignal make_signal(const State& state, std::size_t n,
                         std::int64_t origin_index) {
  if (n == 0) throw std::invalid_argument("make_signal: photon count must be >= 1");
  return PhotonSignal{std::vector<State>(n, state), origin_index};
}

SplitResult split(const PhotonSignal& signal, RandomStream& rng) {
  SplitResult out{{{}, signal.origin_index}, {{}, signal.origin_index}};
  for (const auto& photon : signal.photons) {
    (rng.bit() == 0 ? out.arm_a : out.arm_b).photons.push_back(photon);
  }
  return out;
}

namespace {

void split_into(const PhotonSignal& signal, int depth, RandomStream& rng,
                std::vector<PhotonSignal>& leaves) {
  if (depth == 0) {
    leaves.push_back(signal);
    return;
  }
  auto [a, b] = split(signal, rng);
  split_into(a, depth - 1, rng, leaves);
  split_into(b, depth - 1, rng, leaves);
}

}  // namespace

std::vector<PhotonSignal> split_tree(const PhotonSignal& signal, int depth,
                                     RandomStream& rng) {
  if (depth < 1 || depth > 20) {
    throw std::invalid_argument("split_tree: depth must be in [1, 20], got " +
                                std::to_string(depth));
  }
  std::vector<PhotonSignal> leaves;
  leaves.reserve(std::size_t{1} << depth);
  split_into(signal, depth, rng, leaves);
  return leaves;
}

int default_tree_depth(std::size_t photons) noexcept {
  int depth = 1;
  while ((std::size_t{1} << depth) < photons) ++depth;
  return depth;
}

std::size_t occupied_leaves(std::span<const PhotonSignal> leaves) noexcept {
  std::size_t n = 0;
  for (const auto& leaf : leaves) n += leaf.empty() ? 0 : 1;
  return n;
}

PhotonSignal transmit(const PhotonSignal& signal, const ChannelModel& channel,
                      RandomStream& rng) {
  const double p = channel.flip_probability;
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("transmit: flip probability outside [0, 1]");
  }
  if (p == 0.0) return signal;
  PhotonSignal out = signal;
  for (auto& photon : out.photons) {
    if (rng.bernoulli(p)) photon = apply(GateOp::PauliX, photon);
  }
  return out;
}

}  // namespace qss
