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
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "qss/harness.hpp"

namespace qss {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string msg = "configuration error";
  if (errors.size() != 1) msg += "s";
  msg += ":";
  for (const auto& e : errors) msg += "\n  " + e;
  return msg;
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

std::string normalize_key(std::string key) {
  key = lower(trim(key));
  std::replace(key.begin(), key.end(), '_', '-');
  while (key.rfind("--", 0) == 0) key.erase(0, 2);
  return key;
}

KeyValues parse_key_values(const std::string& text, std::vector<std::string>& errors) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(number) + ": expected 'key = value'");
      continue;
    }
    auto key = normalize_key(line.substr(0, eq));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(number) + ": empty key");
      continue;
    }
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

namespace {

/// Collects every problem instead of stopping at the first.
class Resolver {
 public:
  explicit Resolver(const KeyValues& values) {
    for (const auto& [key, value] : values) values_[normalize_key(key)] = value;
  }

  std::vector<std::string>& errors() { return errors_; }

  const std::string* get(const std::string& key) {
    used_.push_back(key);
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

  void report_unknown() {
    for (const auto& [key, value] : values_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        errors_.push_back("unknown key '" + key + "'");
    }
  }

  template <typename T>
  bool integer(const std::string& key, T& out, long long lo, long long hi) {
    const auto* v = get(key);
    if (!v) return false;
    long long x = 0;
    auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
    if (ec != std::errc() || p != v->data() + v->size()) {
      errors_.push_back(key + ": '" + *v + "' is not an integer");
      return false;
    }
    if (x < lo || x > hi) {
      errors_.push_back(key + ": " + *v + " outside [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
      return false;
    }
    out = static_cast<T>(x);
    return true;
  }

  bool unsigned64(const std::string& key, std::uint64_t& out) {
    const auto* v = get(key);
    if (!v) return false;
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
    if (ec != std::errc() || p != v->data() + v->size()) {
      errors_.push_back(key + ": '" + *v + "' is not an unsigned 64-bit integer");
      return false;
    }
    out = x;
    return true;
  }

  /// Interval given as "(0, 1)", "[0, 1)" or "[0, 1]" in messages.
  bool real(const std::string& key, double& out, double lo, double hi, bool open_lo,
            bool open_hi) {
    const auto* v = get(key);
    if (!v) return false;
    double x = 0;
    std::istringstream in(*v);
    in.imbue(std::locale::classic());
    if (!(in >> x) || !(in >> std::ws).eof()) {
      errors_.push_back(key + ": '" + *v + "' is not a number");
      return false;
    }
    const bool ok = (open_lo ? x > lo : x >= lo) && (open_hi ? x < hi : x <= hi);
    if (!ok) {
      std::ostringstream range;
      range << (open_lo ? "(" : "[") << lo << ", " << hi << (open_hi ? ")" : "]");
      errors_.push_back(key + ": " + *v + " outside " + range.str());
      return false;
    }
    out = x;
    return true;
  }

  bool boolean(const std::string& key, bool& out) {
    const auto* v = get(key);
    if (!v) return false;
    const auto s = lower(*v);
    if (s == "on" || s == "true" || s == "yes" || s == "1") {
      out = true;
    } else if (s == "off" || s == "false" || s == "no" || s == "0") {
      out = false;
    } else {
      errors_.push_back(key + ": '" + *v + "' is not on/off");
      return false;
    }
    return true;
  }

  template <typename T>
  bool choice(const std::string& key, T& out,
              std::initializer_list<std::pair<std::string_view, T>> options) {
    const auto* v = get(key);
    if (!v) return false;
    const auto s = lower(*v);
    std::string names;
    for (const auto& [name, value] : options) {
      if (s == name) {
        out = value;
        return true;
      }
      names += names.empty() ? "" : "|";
      names += name;
    }
    errors_.push_back(key + ": '" + *v + "' is not one of " + names);
    return false;
  }

 private:
  KeyValues values_;
  std::vector<std::string> errors_;
  std::vector<std::string> used_;
};

}  // namespace

ExperimentConfig resolve_config(const KeyValues& values) {
  Resolver r(values);
  ExperimentConfig cfg;

  r.choice("protocol", cfg.protocol,
           {{"original", ProtocolKind::Original}, {"improved", ProtocolKind::Improved}});
  auto& pc = cfg.protocol_config;
  pc = default_config(cfg.protocol);
  pc.decoy_fraction = 0.1;

  enum class AttackKind { None, Trojan, Eve } attack_kind = AttackKind::None;
  r.choice("attack", attack_kind,
           {{"none", AttackKind::None}, {"trojan", AttackKind::Trojan}, {"eve", AttackKind::Eve}});
  TrojanBob trojan;
  InterceptResendEve eve;
  r.integer("photons", trojan.n_photons, 1, 64);
  r.boolean("forward-one", trojan.forward_one);
  r.integer("tree-depth", trojan.tree_depth, 0, 20);
  r.choice("eve-segment", eve.segment,
           {{"bob-charlie", Segment::BobToCharlie},
            {"charlie-alice", Segment::CharlieToAlice},
            {"alice-charlie", Segment::AliceToCharlie}});
  switch (attack_kind) {
    case AttackKind::None: cfg.attack = NoAttack{}; break;
    case AttackKind::Trojan: cfg.attack = trojan; break;
    case AttackKind::Eve: cfg.attack = eve; break;
  }

  r.integer("signals", pc.num_signals, 1, 100'000'000);
  r.integer("trials", cfg.trials, 1, 1'000'000'000);
  r.unsigned64("seed", cfg.seed);
  double both = 0.0;
  if (r.real("sample-fraction", both, 0.0, 1.0, true, true)) {
    pc.charlie_sample_fraction = both;
    pc.alice_sample_fraction = both;
  }
  r.real("charlie-sample-fraction", pc.charlie_sample_fraction, 0.0, 1.0, true, true);
  r.real("alice-sample-fraction", pc.alice_sample_fraction, 0.0, 1.0, true, true);
  r.real("sc-fraction", pc.pauli_sample_fraction, 0.0, 1.0, false, true);
  r.real("error-threshold", pc.error_threshold, 0.0, 1.0, false, false);
  r.real("multiphoton-threshold", pc.multiphoton_threshold, 0.0, 1.0, false, false);
  r.integer("pns-depth", pc.pns_check_depth, 1, 20);
  r.boolean("decoys", pc.decoys_enabled);
  r.real("decoy-fraction", pc.decoy_fraction, 0.0, 1.0, false, true);
  r.real("flip-probability", pc.channel.flip_probability, 0.0, 1.0, false, false);
  r.choice("announcement-order", pc.announcement_order,
           {{"bob-first", AnnouncementOrder::BobFirst},
            {"charlie-first", AnnouncementOrder::CharlieFirst}});
  r.choice("decode-mode", pc.decode_mode,
           {{"cooperative", DecodeMode::Cooperative},
            {"charlie-alone", DecodeMode::CharlieAlone}});

  if (const auto* m = r.get("message")) {
    try {
      cfg.fixed_message = SecretMessage::from_string(*m);
    } catch (const std::invalid_argument&) {
      r.errors().push_back("message: '" + *m + "' is not a bit string");
    }
  }
  r.integer("message-length", cfg.message_length, 1, 1'000'000);
  r.choice("format", cfg.format, {{"json", ReportFormat::Json}, {"csv", ReportFormat::Csv}});
  if (const auto* out = r.get("out")) cfg.output_path = *out;
  r.boolean("save-transcripts", cfg.save_transcripts);
  r.integer("jobs", cfg.jobs, 1, 256);

  if (const auto* list = r.get("n-values")) {
    std::vector<int> ns;
    std::istringstream in(*list);
    std::string item;
    bool ok = true;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      int x = 0;
      auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
      if (ec != std::errc() || p != item.data() + item.size() || x < 1 || x > 24) {
        r.errors().push_back("n-values: '" + item + "' is not an integer in [1, 24]");
        ok = false;
      } else {
        ns.push_back(x);
      }
    }
    if (ok && ns.empty()) r.errors().push_back("n-values: list is empty");
    if (ok && !ns.empty()) cfg.n_values = std::move(ns);
  }

  r.report_unknown();

  if (r.errors().empty()) {
    pc.message = cfg.fixed_message
                     ? *cfg.fixed_message
                     : SecretMessage(std::vector<std::uint8_t>(cfg.message_length, 0));
    for (auto& e : validate(pc, cfg.protocol)) r.errors().push_back(std::move(e));
    pc.message = SecretMessage();
  }
  if (!r.errors().empty()) throw ConfigError(std::move(r.errors()));
  return cfg;
}

ExperimentConfig load_config(const std::optional<std::filesystem::path>& file,
                             const KeyValues& overrides) {
  KeyValues values;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError({"config file '" + file->string() + "' cannot be read"});
    std::ostringstream text;
    text << in.rdbuf();
    std::vector<std::string> errors;
    values = parse_key_values(text.str(), errors);
    if (!errors.empty()) {
      for (auto& e : errors) e = file->string() + ": " + e;
      throw ConfigError(std::move(errors));
    }
  }
  for (const auto& [key, value] : overrides) values[normalize_key(key)] = value;
  return resolve_config(values);
}

}  // namespace qss
