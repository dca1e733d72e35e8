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

#include <algorithm>
#include <cmath>
#include <thread>

#include "qss/harness.hpp"

namespace qss {

Interval wilson_interval(std::size_t successes, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // The bounds are exact at the edges; rounding would leave ~1e-19 residue.
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half),
          successes == n ? 1.0 : std::min(1.0, centre + half)};
}

MetricSummary summarize_proportion(std::size_t successes, std::size_t units,
                                   std::size_t trials) {
  MetricSummary m;
  m.trials = trials;
  m.units = units;
  if (units == 0) {
    m.ci_high = 1.0;
    return m;
  }
  m.mean = static_cast<double>(successes) / static_cast<double>(units);
  m.std_error = std::sqrt(m.mean * (1.0 - m.mean) / static_cast<double>(units));
  const auto ci = wilson_interval(successes, units);
  m.ci_low = ci.low;
  m.ci_high = ci.high;
  return m;
}

namespace {

/// Calls body(t) for every t in [0, count), striding over `jobs` threads.
template <typename Body>
void for_each_trial(std::size_t count, unsigned jobs, Body&& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t t = 0; t < count; ++t) body(t);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t t = w; t < count; t += jobs) body(t);
    });
  }
}

TrialRecord run_one(const ExperimentConfig& cfg, std::size_t t) {
  RandomStream rng = RandomStream(cfg.seed).child(t);
  ProtocolConfig pc = cfg.protocol_config;
  pc.message = cfg.fixed_message ? *cfg.fixed_message
                                 : SecretMessage::random(cfg.message_length, rng);
  const RunResult result = run_protocol(cfg.protocol, pc, cfg.attack, rng);

  TrialRecord rec;
  rec.trial = t;
  rec.protocol = cfg.protocol;
  rec.attack = std::string(attack_name(cfg.attack));
  rec.epsilon_r = result.alice_check.error_rate;
  rec.verdict = result.verdict();
  rec.signals = pc.num_signals;
  rec.alice_compared = result.alice_check.compared;
  rec.alice_mismatches = result.alice_check.mismatches;
  if (result.charlie_check) {
    rec.p_m = result.charlie_check->multiphoton_rate;
    rec.charlie_samples = result.charlie_check->samples_used;
    rec.charlie_flags = result.charlie_check->multiphoton_flags;
  }
  if (result.decoded) rec.decoded_correctly = *result.decoded == pc.message;
  if (result.attacker_view) {
    const auto& view = *result.attacker_view;
    rec.ambiguous_count = view.ambiguous_count();
    rec.inferences = view.inferences.size();
    rec.carriers = view.carriers;
    rec.recovered = view.recovered_correct;
    if (view.carriers > 0) rec.recovery_rate = view.recovery_rate;
  }
  if (cfg.save_transcripts) rec.transcript = result.transcript;
  return rec;
}

}  // namespace

TrialSet run_trials(const ExperimentConfig& cfg) {
  TrialSet set;
  set.records.resize(cfg.trials);
  for_each_trial(cfg.trials, cfg.jobs, [&](std::size_t t) { set.records[t] = run_one(cfg, t); });

  std::size_t eps_n = 0, eps_k = 0, pm_n = 0, pm_k = 0, rec_n = 0, rec_k = 0;
  std::size_t amb_n = 0, amb_k = 0, detected = 0;
  for (const auto& r : set.records) {
    eps_n += r.alice_compared;
    eps_k += r.alice_mismatches;
    pm_n += r.charlie_samples;
    pm_k += r.charlie_flags;
    rec_n += r.carriers;
    rec_k += r.recovered;
    amb_n += r.inferences;
    amb_k += r.ambiguous_count;
    detected += r.verdict != Verdict::Pass ? 1 : 0;
  }
  const auto trials = set.records.size();
  set.stats.epsilon_r = summarize_proportion(eps_k, eps_n, trials);
  set.stats.p_m = summarize_proportion(pm_k, pm_n, trials);
  set.stats.recovery_rate = summarize_proportion(rec_k, rec_n, trials);
  set.stats.ambiguity = summarize_proportion(amb_k, amb_n, trials);
  set.stats.detection = summarize_proportion(detected, trials, trials);
  return set;
}

InferenceResult single_signal_inference(int n, OpSet set, int tree_depth, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("single_signal_inference: n must be >= 1");
  const StateLabel label = kAllLabels[rng.uniform_index(kAllLabels.size())];
  const auto ops = operations_of(set);
  const GateOp op = ops[rng.uniform_index(ops.size())];
  PhotonSignal signal = make_signal(apply(op, state_of(label)), static_cast<std::size_t>(n), 0);
  return trojan_infer(signal, label, set, /*forward_one=*/false, tree_depth, op, rng)
      .inference;
}

namespace {

double z_of(double observed, double expected, std::size_t n) {
  const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
  if (sigma == 0.0) return observed == expected ? 0.0 : INFINITY;
  return (observed - expected) / sigma;
}

}  // namespace

std::vector<SweepRow> sweep_photon_count(const ExperimentConfig& cfg,
                                         std::span<const int> n_values) {
  if (n_values.empty()) throw std::invalid_argument("sweep_photon_count: no photon counts");
  const OpSet set = cfg.protocol_config.op_set;
  const int depth = std::holds_alternative<TrojanBob>(cfg.attack)
                        ? std::get<TrojanBob>(cfg.attack).tree_depth
                        : 0;
  std::vector<SweepRow> rows;
  for (int n : n_values) {
    const RandomStream base = RandomStream(cfg.seed).child(static_cast<std::uint64_t>(n));
    std::vector<std::uint8_t> ambiguous(cfg.trials, 0);
    for_each_trial(cfg.trials, cfg.jobs, [&](std::size_t t) {
      RandomStream rng = base.child(t);
      ambiguous[t] = single_signal_inference(n, set, depth, rng).ambiguous ? 1 : 0;
    });
    const auto hits = static_cast<std::size_t>(std::count(ambiguous.begin(), ambiguous.end(), 1));

    SweepRow row;
    row.n = n;
    row.pe_paper = pe_paper(n);
    row.pe_exact = pe_exact(n, set, n);
    row.monte_carlo = summarize_proportion(hits, cfg.trials, cfg.trials);
    row.z_score = z_of(row.monte_carlo.mean, row.pe_exact, cfg.trials);
    row.within_3sigma = std::abs(row.z_score) <= 3.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<DetectRow> detection_curve(const ExperimentConfig& cfg,
                                       std::span<const int> n_values) {
  if (n_values.empty()) throw std::invalid_argument("detection_curve: no photon counts");
  std::vector<DetectRow> rows;
  for (int n : n_values) {
    ExperimentConfig run = cfg;
    run.protocol = ProtocolKind::Improved;
    run.protocol_config.op_set = OpSet::FourOp;
    TrojanBob trojan = std::holds_alternative<TrojanBob>(cfg.attack)
                           ? std::get<TrojanBob>(cfg.attack)
                           : TrojanBob{};
    trojan.n_photons = n;
    run.attack = trojan;
    run.seed = RandomStream::derive_seed(cfg.seed, static_cast<std::uint64_t>(n));
    run.save_transcripts = false;
    const auto set = run_trials(run);

    std::size_t aborts = 0;
    for (const auto& r : set.records) aborts += r.verdict == Verdict::AbortMultiphoton ? 1 : 0;

    DetectRow row;
    row.n = n;
    row.depth = run.protocol_config.pns_check_depth;
    const double leaves = std::ldexp(1.0, row.depth);
    row.oracle_flag_probability = 1.0 - std::pow(leaves, 1.0 - n);
    row.flag_frequency = set.stats.p_m;
    row.abort_frequency = summarize_proportion(aborts, set.records.size(), set.records.size());
    row.z_score = row.flag_frequency.units == 0
                      ? 0.0
                      : z_of(row.flag_frequency.mean, row.oracle_flag_probability,
                             row.flag_frequency.units);
    row.within_3sigma = std::abs(row.z_score) <= 3.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qss
