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

// Command-line front end.
//
//   qss_sim run    --protocol original --attack trojan --photons 4 --trials 1000
//   qss_sim sweep  --n-values 2,4,6,8,10 --trials 1000000
//   qss_sim detect --n-values 1,2,4 --pns-depth 1 --trials 100
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "qss/harness.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kIoError = 3;

const char* const kValueFlags[][2] = {
    {"protocol", "original|improved"},
    {"attack", "none|trojan|eve"},
    {"photons", "photons per Trojan signal"},
    {"forward-one", "on|off: Bob forwards one untouched photon"},
    {"tree-depth", "Bob's splitter tree depth (0 = ceil(log2 n))"},
    {"eve-segment", "bob-charlie|charlie-alice|alice-charlie"},
    {"signals", "signals prepared by Bob per run"},
    {"trials", "number of trials"},
    {"seed", "64-bit master seed"},
    {"sample-fraction", "Charlie's and Alice's sample fraction"},
    {"charlie-sample-fraction", "Charlie's multi-photon check fraction"},
    {"alice-sample-fraction", "Alice's check fraction"},
    {"sc-fraction", "fraction of Charlie's photons sent as S_C samples"},
    {"error-threshold", "abort above this error rate"},
    {"multiphoton-threshold", "abort above this multi-photon rate"},
    {"pns-depth", "Charlie's splitter tree depth"},
    {"decoys", "on|off"},
    {"decoy-fraction", "decoys per forwarded photon"},
    {"flip-probability", "per-photon bit-flip noise"},
    {"announcement-order", "bob-first|charlie-first"},
    {"decode-mode", "cooperative|charlie-alone"},
    {"message", "fixed message bits, e.g. 0110"},
    {"message-length", "random message length per trial"},
    {"format", "json|csv"},
    {"out", "report path (default: stdout)"},
    {"jobs", "worker threads"},
    {"n-values", "comma-separated photon counts"},
};

struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool save_transcripts = false;
  CLI::Option* save_option = nullptr;

  void attach(CLI::App* app) {
    for (const auto& [name, help] : kValueFlags) {
      options[name] = app->add_option(std::string("--") + name, values[name], help);
    }
    save_option = app->add_flag("--save-transcripts", save_transcripts,
                                "write a per-signal transcript sidecar");
  }

  qss::KeyValues overrides() const {
    qss::KeyValues kv;
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0) kv[name] = values.at(name);
    }
    if (save_option->count() > 0) kv["save-transcripts"] = save_transcripts ? "on" : "off";
    return kv;
  }
};

void emit(const std::string& content, const qss::ExperimentConfig& cfg) {
  if (cfg.output_path.empty()) {
    std::cout << content;
  } else {
    qss::write_report(content, cfg.output_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-party quantum secret sharing simulator with Trojan-horse attacks"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  auto* run = app.add_subcommand("run", "run one experiment");
  auto* sweep = app.add_subcommand("sweep", "Trojan ambiguity probability versus photon count");
  auto* detect = app.add_subcommand("detect", "improved-protocol multi-photon detection curve");
  FlagSet run_flags, sweep_flags, detect_flags;
  run_flags.attach(run);
  sweep_flags.attach(sweep);
  detect_flags.attach(detect);
  for (auto* sub : {run, sweep, detect}) {
    sub->add_option("--config", config_path, "key = value configuration file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  const FlagSet& flags = run->parsed() ? run_flags : sweep->parsed() ? sweep_flags : detect_flags;
  try {
    std::optional<std::filesystem::path> file;
    if (!config_path.empty()) file = config_path;
    const auto cfg = qss::load_config(file, flags.overrides());

    if (run->parsed()) {
      const auto set = qss::run_trials(cfg);
      if (cfg.output_path.empty()) {
        std::cout << qss::render_run_report(cfg, set, cfg.format);
        if (cfg.save_transcripts) std::cout << qss::render_transcripts(set);
      } else {
        qss::write_run_report(cfg, set, cfg.format, cfg.output_path);
        const auto& s = set.stats;
        std::cerr << "epsilon_r " << qss::format_number(s.epsilon_r.mean) << ", P_m "
                  << qss::format_number(s.p_m.mean) << ", recovery "
                  << qss::format_number(s.recovery_rate.mean) << ", detection "
                  << qss::format_number(s.detection.mean) << " over " << cfg.trials
                  << " trials -> " << cfg.output_path << "\n";
      }
    } else if (sweep->parsed()) {
      const auto rows = qss::sweep_photon_count(cfg, cfg.n_values);
      emit(qss::render_sweep_report(cfg, rows, cfg.format), cfg);
    } else {
      const auto rows = qss::detection_curve(cfg, cfg.n_values);
      emit(qss::render_detect_report(cfg, rows, cfg.format), cfg);
    }
  } catch (const qss::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const qss::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
  return 0;
}
