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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qss/harness.hpp"

namespace qss {

using ordered_json = nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

constexpr const char* kTool = "qss_sim";
constexpr const char* kCiMethod = "wilson";
constexpr double kConfidence = 0.95;

/// JSON number holding exactly the 12-significant-digit value.
ordered_json num(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

ordered_json config_json(const ExperimentConfig& cfg) {
  const auto& pc = cfg.protocol_config;
  ordered_json j;
  j["protocol"] = std::string(to_string(cfg.protocol));
  j["attack"] = std::string(attack_name(cfg.attack));
  if (const auto* t = std::get_if<TrojanBob>(&cfg.attack)) {
    j["photons"] = t->n_photons;
    j["forward-one"] = t->forward_one;
    j["tree-depth"] = t->tree_depth;
  }
  if (const auto* e = std::get_if<InterceptResendEve>(&cfg.attack)) {
    j["eve-segment"] = std::string(to_string(e->segment));
  }
  j["signals"] = pc.num_signals;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["op-set"] = std::string(to_string(pc.op_set));
  j["charlie-sample-fraction"] = num(pc.charlie_sample_fraction);
  j["alice-sample-fraction"] = num(pc.alice_sample_fraction);
  j["sc-fraction"] = num(pc.pauli_sample_fraction);
  j["error-threshold"] = num(pc.error_threshold);
  j["multiphoton-threshold"] = num(pc.multiphoton_threshold);
  j["pns-depth"] = pc.pns_check_depth;
  j["decoys"] = pc.decoys_enabled;
  j["decoy-fraction"] = num(pc.decoy_fraction);
  j["flip-probability"] = num(pc.channel.flip_probability);
  j["announcement-order"] = std::string(to_string(pc.announcement_order));
  j["decode-mode"] = pc.decode_mode == DecodeMode::Cooperative ? "cooperative" : "charlie-alone";
  if (cfg.fixed_message) {
    j["message"] = cfg.fixed_message->to_string();
  } else {
    j["message-length"] = cfg.message_length;
  }
  j["format"] = cfg.format == ReportFormat::Json ? "json" : "csv";
  j["save-transcripts"] = cfg.save_transcripts;
  j["n-values"] = cfg.n_values;
  return j;
}

ordered_json metric_json(const MetricSummary& m) {
  return ordered_json{{"mean", num(m.mean)},       {"std_error", num(m.std_error)},
                      {"ci_low", num(m.ci_low)},   {"ci_high", num(m.ci_high)},
                      {"trials", m.trials},        {"units", m.units}};
}

ordered_json header(const char* command, const ExperimentConfig& cfg) {
  ordered_json j;
  j["tool"] = kTool;
  j["command"] = command;
  j["config"] = config_json(cfg);
  j["ci_method"] = kCiMethod;
  j["confidence"] = kConfidence;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string opt_number(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string();
}

}  // namespace

std::string render_run_report(const ExperimentConfig& cfg, const TrialSet& set,
                              ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::ostringstream os;
    os << "trial,protocol,attack,epsilon_r,p_m,verdict,recovery_rate,ambiguous_count,signals\n";
    for (const auto& r : set.records) {
      os << r.trial << ',' << to_string(r.protocol) << ',' << r.attack << ','
         << format_number(r.epsilon_r) << ',' << format_number(r.p_m) << ','
         << to_string(r.verdict) << ',' << opt_number(r.recovery_rate) << ','
         << r.ambiguous_count << ',' << r.signals << '\n';
    }
    return os.str();
  }

  auto j = header("run", cfg);
  ordered_json summary;
  summary["epsilon_r"] = metric_json(set.stats.epsilon_r);
  summary["p_m"] = metric_json(set.stats.p_m);
  summary["recovery_rate"] = metric_json(set.stats.recovery_rate);
  summary["ambiguity"] = metric_json(set.stats.ambiguity);
  summary["detection"] = metric_json(set.stats.detection);
  j["summary"] = std::move(summary);

  ordered_json trials = ordered_json::array();
  for (const auto& r : set.records) {
    ordered_json t;
    t["trial"] = r.trial;
    t["protocol"] = std::string(to_string(r.protocol));
    t["attack"] = r.attack;
    t["epsilon_r"] = num(r.epsilon_r);
    t["p_m"] = num(r.p_m);
    t["verdict"] = std::string(to_string(r.verdict));
    t["recovery_rate"] = r.recovery_rate ? num(*r.recovery_rate) : ordered_json(nullptr);
    t["ambiguous_count"] = r.ambiguous_count;
    t["signals"] = r.signals;
    t["decoded_correctly"] =
        r.decoded_correctly ? ordered_json(*r.decoded_correctly) : ordered_json(nullptr);
    trials.push_back(std::move(t));
  }
  j["trials"] = std::move(trials);
  return dump(j);
}

std::string render_transcripts(const TrialSet& set) {
  std::string out;
  for (const auto& r : set.records) {
    ordered_json line;
    line["trial"] = r.trial;
    ordered_json signals = ordered_json::array();
    for (const auto& s : r.transcript) {
      ordered_json rec;
      rec["index"] = s.index;
      rec["role"] = std::string(to_string(s.role));
      rec["label"] = std::string(to_string(s.label));
      rec["charlie_op"] =
          s.charlie_op ? ordered_json(std::string(to_string(*s.charlie_op))) : ordered_json(nullptr);
      rec["alice_op"] =
          s.alice_op ? ordered_json(std::string(to_string(*s.alice_op))) : ordered_json(nullptr);
      rec["photons_sent"] = s.photons_sent;
      rec["final_bit"] = s.final_bit ? ordered_json(*s.final_bit) : ordered_json(nullptr);
      ordered_json ann = ordered_json::array();
      for (const auto& a : s.announcements) {
        ann.push_back(ordered_json{{"seq", a.sequence},
                                   {"party", std::string(to_string(a.party))},
                                   {"what", std::string(to_string(a.what))}});
      }
      rec["announcements"] = std::move(ann);
      signals.push_back(std::move(rec));
    }
    line["signals"] = std::move(signals);
    out += line.dump() + "\n";
  }
  return out;
}

std::string render_sweep_report(const ExperimentConfig& cfg, std::span<const SweepRow> rows,
                                ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::ostringstream os;
    os << "n,pe_paper,pe_exact,monte_carlo,std_error,ci_low,ci_high,trials,z_score,within_3sigma\n";
    for (const auto& r : rows) {
      os << r.n << ',' << format_number(r.pe_paper) << ',' << format_number(r.pe_exact) << ','
         << format_number(r.monte_carlo.mean) << ',' << format_number(r.monte_carlo.std_error)
         << ',' << format_number(r.monte_carlo.ci_low) << ','
         << format_number(r.monte_carlo.ci_high) << ',' << r.monte_carlo.trials << ','
         << format_number(r.z_score) << ',' << (r.within_3sigma ? "true" : "false") << '\n';
    }
    return os.str();
  }
  auto j = header("sweep", cfg);
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back(ordered_json{{"n", r.n},
                               {"pe_paper", num(r.pe_paper)},
                               {"pe_exact", num(r.pe_exact)},
                               {"monte_carlo", metric_json(r.monte_carlo)},
                               {"z_score", num(r.z_score)},
                               {"within_3sigma", r.within_3sigma}});
  }
  j["rows"] = std::move(arr);
  return dump(j);
}

std::string render_detect_report(const ExperimentConfig& cfg, std::span<const DetectRow> rows,
                                 ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::ostringstream os;
    os << "n,depth,oracle_flag_probability,flag_frequency,ci_low,ci_high,sampled_signals,"
          "abort_frequency,trials,z_score,within_3sigma\n";
    for (const auto& r : rows) {
      os << r.n << ',' << r.depth << ',' << format_number(r.oracle_flag_probability) << ','
         << format_number(r.flag_frequency.mean) << ',' << format_number(r.flag_frequency.ci_low)
         << ',' << format_number(r.flag_frequency.ci_high) << ',' << r.flag_frequency.units
         << ',' << format_number(r.abort_frequency.mean) << ',' << r.abort_frequency.trials
         << ',' << format_number(r.z_score) << ',' << (r.within_3sigma ? "true" : "false")
         << '\n';
    }
    return os.str();
  }
  auto j = header("detect", cfg);
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back(ordered_json{{"n", r.n},
                               {"depth", r.depth},
                               {"oracle_flag_probability", num(r.oracle_flag_probability)},
                               {"flag_frequency", metric_json(r.flag_frequency)},
                               {"abort_frequency", metric_json(r.abort_frequency)},
                               {"z_score", num(r.z_score)},
                               {"within_3sigma", r.within_3sigma}});
  }
  j["rows"] = std::move(arr);
  return dump(j);
}

void write_report(const std::string& content, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_run_report(const ExperimentConfig& cfg, const TrialSet& set, ReportFormat format,
                      const std::filesystem::path& path) {
  write_report(render_run_report(cfg, set, format), path);
  if (cfg.save_transcripts) {
    write_report(render_transcripts(set), path.string() + ".transcripts.jsonl");
  }
}

}  // namespace qss
