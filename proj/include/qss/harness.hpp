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

// Experiment harness: configuration files and flag overrides, seeded Monte
// Carlo trials, Wilson-interval statistics and byte-stable reports.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qss/attacks.hpp"
#include "qss/protocols.hpp"

namespace qss {

enum class ReportFormat : std::uint8_t { Json, Csv };

struct ExperimentConfig {
  ProtocolKind protocol = ProtocolKind::Original;
  AttackStrategy attack = NoAttack{};
  ProtocolConfig protocol_config = default_config(ProtocolKind::Original);
  /// Random message length per trial; ignored when fixed_message is set.
  std::size_t message_length = 16;
  std::optional<SecretMessage> fixed_message;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  /// Empty writes the report to standard output.
  std::string output_path;
  ReportFormat format = ReportFormat::Json;
  bool save_transcripts = false;
  unsigned jobs = 1;
  std::vector<int> n_values{2, 4, 6, 8, 10};
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Keys are normalized to lower-case kebab form ("sample_fraction" is
/// "sample-fraction").
using KeyValues = std::map<std::string, std::string>;

std::string normalize_key(std::string key);

/// Parses flat `key = value` text with `#` comments.
KeyValues parse_key_values(const std::string& text, std::vector<std::string>& errors);

/// Reads `file` if given, then applies `overrides` on top. Throws ConfigError
/// listing every problem found.
ExperimentConfig load_config(const std::optional<std::filesystem::path>& file,
                             const KeyValues& overrides = {});

/// Resolves a configuration from key/value pairs alone.
ExperimentConfig resolve_config(const KeyValues& values);

struct TrialRecord {
  std::size_t trial = 0;
  ProtocolKind protocol = ProtocolKind::Original;
  std::string attack;
  double epsilon_r = 0.0;
  double p_m = 0.0;
  Verdict verdict = Verdict::Pass;
  std::optional<double> recovery_rate;
  std::size_t ambiguous_count = 0;
  std::size_t signals = 0;
  std::optional<bool> decoded_correctly;

  // Raw counts for pooled statistics.
  std::size_t alice_compared = 0;
  std::size_t alice_mismatches = 0;
  std::size_t charlie_samples = 0;
  std::size_t charlie_flags = 0;
  std::size_t carriers = 0;
  std::size_t recovered = 0;
  std::size_t inferences = 0;

  std::vector<SignalRecord> transcript;  // only kept with save_transcripts
};

struct MetricSummary {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t trials = 0;
  /// Denominator of the pooled proportion (samples, carriers, trials, ...).
  std::size_t units = 0;
};

struct SummaryStats {
  MetricSummary epsilon_r;
  MetricSummary p_m;
  MetricSummary recovery_rate;
  MetricSummary ambiguity;
  MetricSummary detection;
};

struct TrialSet {
  SummaryStats stats;
  std::vector<TrialRecord> records;
};

struct Interval {
  double low;
  double high;
};

/// Wilson score interval; z = 1.96 gives 95 %.
Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

MetricSummary summarize_proportion(std::size_t successes, std::size_t units,
                                   std::size_t trials);

/// Runs trial t with RandomStream(seed).child(t) on `jobs` threads. The
/// result does not depend on the thread count.
TrialSet run_trials(const ExperimentConfig& config);

/// One Trojan signal of n photons through Charlie's uniformly random
/// operation and Bob's splitter tree; all n photons are measured.
InferenceResult single_signal_inference(int n, OpSet set, int tree_depth, RandomStream& rng);

struct SweepRow {
  int n = 0;
  double pe_paper = 0.0;
  double pe_exact = 0.0;
  MetricSummary monte_carlo;
  double z_score = 0.0;
  bool within_3sigma = false;
};

/// `config.trials` single-signal trials per photon count.
std::vector<SweepRow> sweep_photon_count(const ExperimentConfig& config,
                                         std::span<const int> n_values);

struct DetectRow {
  int n = 0;
  int depth = 0;
  /// 1 - L^(1-n) for L = 2^depth leaves.
  double oracle_flag_probability = 0.0;
  MetricSummary flag_frequency;
  MetricSummary abort_frequency;
  double z_score = 0.0;
  bool within_3sigma = false;
};

/// Improved-protocol runs against a Trojan Bob of each photon count.
std::vector<DetectRow> detection_curve(const ExperimentConfig& config,
                                       std::span<const int> n_values);

/// Fixed 12-significant-digit rendering used by every report.
std::string format_number(double x);

std::string render_run_report(const ExperimentConfig& config, const TrialSet& set,
                              ReportFormat format);
std::string render_transcripts(const TrialSet& set);
std::string render_sweep_report(const ExperimentConfig& config,
                                std::span<const SweepRow> rows, ReportFormat format);
std::string render_detect_report(const ExperimentConfig& config,
                                 std::span<const DetectRow> rows, ReportFormat format);

/// Writes `content` to `path`; throws IoError naming the path on failure.
void write_report(const std::string& content, const std::filesystem::path& path);

/// Run report plus, with save_transcripts, a `<path>.transcripts.jsonl`
/// sidecar holding one line of signal records per trial.
void write_run_report(const ExperimentConfig& config, const TrialSet& set,
                      ReportFormat format, const std::filesystem::path& path);

}  // namespace qss
