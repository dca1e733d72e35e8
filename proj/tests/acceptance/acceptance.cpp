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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed here and not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../oracles.hpp"
#include "qss/harness.hpp"

using namespace qss;
namespace fs = std::filesystem;

namespace {

constexpr double kSigmas = 3.0;
constexpr double kAlgebraTol = 1e-12;
constexpr double kSweepBudgetSeconds = 60.0;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] AC%d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool within(double observed, double p, double n) {
  return std::abs(observed - p) <= kSigmas * std::sqrt(p * (1 - p) / n);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------------------

std::string sweep_report(unsigned j) {
  auto cfg = resolve_config({{"trials", "1000000"}, {"seed", "2024"}});
  cfg.jobs = j;
  auto rows = sweep_photon_count(cfg, cfg.n_values);
  return render_sweep_report(cfg, rows, ReportFormat::Json);
}

void sweep() {
  auto cfg = resolve_config({{"trials", "1000000"}, {"seed", "2024"}});
  cfg.jobs = jobs();
  const auto start = std::chrono::steady_clock::now();
  const auto rows = sweep_photon_count(cfg, cfg.n_values);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool ok = secs <= kSweepBudgetSeconds;
  std::string worst;
  double worst_z = 0;
  for (const auto& r : rows) {
    const double oracle = oracle::three_op_wrong(r.n);
    ok = ok && std::abs(r.pe_exact - oracle) <= kAlgebraTol &&
         within(r.monte_carlo.mean, oracle, static_cast<double>(r.monte_carlo.units));
    if (std::abs(r.z_score) >= std::abs(worst_z)) {
      worst_z = r.z_score;
      worst = std::to_string(r.n);
    }
  }
  const double p4 = pe_paper(4), p10 = pe_paper(10);
  char p10_3sig[32];
  std::snprintf(p10_3sig, sizeof p10_3sig, "%.2e", p10);
  ok = ok && std::abs(p4 - 1.0 / 48.0) <= kAlgebraTol && std::string(p10_3sig) == "3.26e-04";
  report(1, "ambiguity sweep", ok,
         fmt("%.1f s for 5x1e6 trials, worst |z| = %.2f", secs, std::abs(worst_z)) + " at n=" +
             worst + ", pe_paper(4) = " + format_number(p4) + ", pe_paper(10) = " + p10_3sig);
}

void invisibility() {
  auto cfg = resolve_config({{"protocol", "original"}, {"attack", "trojan"}, {"photons", "4"},
                             {"forward-one", "on"}, {"signals", "200"}, {"trials", "1000"},
                             {"message-length", "32"}, {"seed", "7"}});
  cfg.jobs = jobs();
  const auto set = run_trials(cfg);
  std::size_t dirty = 0;
  double recovery = 0;
  for (const auto& r : set.records) {
    dirty += r.alice_mismatches > 0 ? 1 : 0;
    recovery += r.recovery_rate.value_or(0.0);
  }
  recovery /= static_cast<double>(set.records.size());
  report(2, "Trojan invisibility (original)", dirty == 0 && recovery >= 0.95,
         std::to_string(dirty) + "/1000 runs with Alice errors, mean recovery " +
             format_number(recovery));
}

void defence() {
  // 400 signals with a 1/4 sample give Charlie 100 checked signals per run.
  auto cfg = resolve_config({{"protocol", "improved"}, {"attack", "trojan"}, {"photons", "4"},
                             {"pns-depth", "1"}, {"signals", "400"}, {"trials", "1000"},
                             {"seed", "8"}});
  cfg.jobs = jobs();
  const auto set = run_trials(cfg);

  std::size_t samples = 0, flags = 0, aborts = 0;
  bool hundred = true;
  for (const auto& r : set.records) {
    hundred = hundred && r.charlie_samples == 100;
    if (samples < 10000) {
      samples += r.charlie_samples;
      flags += r.charlie_flags;
    }
    aborts += r.verdict == Verdict::AbortMultiphoton ? 1 : 0;
  }
  const double oracle_p = oracle::both_arms_occupied(4);
  const double freq = static_cast<double>(flags) / static_cast<double>(samples);

  auto honest = resolve_config({{"protocol", "improved"}, {"trials", "200"}, {"seed", "9"}});
  honest.jobs = jobs();
  const auto hset = run_trials(honest);
  std::size_t honest_flags = 0;
  for (const auto& r : hset.records) honest_flags += r.charlie_flags;

  const bool ok = std::abs(oracle_p - 7.0 / 8.0) <= kAlgebraTol && samples == 10000 &&
                  within(freq, oracle_p, static_cast<double>(samples)) && hundred &&
                  aborts == 1000 && honest_flags == 0;
  report(3, "multi-photon detection (improved)", ok,
         "flag frequency " + format_number(freq) + " over " + std::to_string(samples) +
             " samples (oracle 0.875), " + std::to_string(aborts) +
             "/1000 runs aborted, honest flags " + std::to_string(honest_flags));
}

void outsider() {
  bool ok = std::abs(oracle::intercept_resend_error() - 0.25) <= kAlgebraTol;
  std::string detail;
  for (auto protocol : {"original", "improved"}) {
    // Eve on the Charlie-to-Alice leg; Alice's check carries the evidence.
    auto cfg = resolve_config({{"protocol", protocol}, {"attack", "eve"},
                               {"eve-segment", "charlie-alice"}, {"error-threshold", "1"},
                               {"trials", "200"}, {"seed", "10"}});
    cfg.jobs = jobs();
    std::size_t compared = 0, mismatches = 0;
    for (const auto& r : run_trials(cfg).records) {
      if (compared >= 10000) break;
      compared += r.alice_compared;
      mismatches += r.alice_mismatches;
    }
    const double rate = static_cast<double>(mismatches) / static_cast<double>(compared);
    ok = ok && compared >= 10000 && within(rate, 0.25, static_cast<double>(compared));
    detail += std::string(protocol) + " e=" + format_number(rate) + " (" +
              std::to_string(compared) + " samples), ";
  }

  // Zero-tolerance abort on exactly 50 checked samples per run.
  auto k50 = resolve_config({{"protocol", "original"}, {"attack", "eve"},
                             {"eve-segment", "charlie-alice"}, {"signals", "200"},
                             {"error-threshold", "0"}, {"trials", "1000"}, {"seed", "11"}});
  k50.jobs = jobs();
  std::size_t aborts = 0;
  bool fifty = true;
  for (const auto& r : run_trials(k50).records) {
    fifty = fifty && r.alice_compared == 50;
    aborts += r.verdict == Verdict::AbortErrorRate ? 1 : 0;
  }
  const double bound = 1.0 - std::pow(0.75, 50);
  ok = ok && fifty && static_cast<double>(aborts) / 1000.0 >= bound;
  report(4, "intercept-resend detection", ok,
         detail + std::to_string(aborts) + "/1000 aborts at k=50 (bound " +
             format_number(bound) + ")");
}

void completeness() {
  bool ok = true;
  std::string detail;
  for (auto protocol : {"original", "improved"}) {
    auto cfg = resolve_config({{"protocol", protocol}, {"message-length", "64"},
                               {"trials", "1000"}, {"seed", "12"}});
    cfg.jobs = jobs();
    std::size_t exact = 0, noisy = 0;
    for (const auto& r : run_trials(cfg).records) {
      exact += r.decoded_correctly == true ? 1 : 0;
      noisy += (r.epsilon_r != 0.0 || r.p_m != 0.0) ? 1 : 0;
    }
    ok = ok && exact == 1000 && noisy == 0;
    detail += (detail.empty() ? "" : ", ") + std::string(protocol) + " " +
              std::to_string(exact) + "/1000 exact";
  }
  report(5, "honest completeness", ok, detail);
}

void algebra() {
  bool ok = true;
  for (auto g : kAllGates) {
    const auto m = gate_matrix<double>(g);
    ok = ok && (m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= kAlgebraTol;
  }
  // U sends each label to its partner in the same basis.
  for (auto l : kAllLabels) {
    const State u = apply(GateOp::U, state_of(l));
    ok = ok && is_eigenstate(u, basis_of(l)) &&
         std::abs(prob_of(u, basis_of(l), 1 - bit_of(l)) - 1.0) <= kAlgebraTol;
    for (int g = 0; g < 4; ++g) {
      const auto mine = apply(kAllGates[g], state_of(l)).amplitudes();
      const auto theirs = oracle::gate(g, oracle::state(static_cast<int>(l)));
      ok = ok && std::abs(mine[0] - theirs[0]) + std::abs(mine[1] - theirs[1]) <= kAlgebraTol;
    }
  }
  const std::pair<StateLabel, StateLabel> h_pairs[] = {{StateLabel::Zero, StateLabel::U},
                                                      {StateLabel::One, StateLabel::D},
                                                      {StateLabel::U, StateLabel::Zero},
                                                      {StateLabel::D, StateLabel::One}};
  const std::pair<StateLabel, StateLabel> hbar_pairs[] = {{StateLabel::Zero, StateLabel::D},
                                                         {StateLabel::One, StateLabel::U},
                                                         {StateLabel::U, StateLabel::One},
                                                         {StateLabel::D, StateLabel::Zero}};
  for (auto [from, to] : h_pairs)
    ok = ok && std::abs(fidelity(apply(GateOp::H, state_of(from)), state_of(to)) - 1) <= kAlgebraTol;
  for (auto [from, to] : hbar_pairs)
    ok = ok &&
         std::abs(fidelity(apply(GateOp::Hbar, state_of(from)), state_of(to)) - 1) <= kAlgebraTol;

  RandomStream rng(13);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::complex<double> a(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    const std::complex<double> b(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    const State s(a / norm, b / norm);
    for (auto basis : kAllBases)
      worst = std::max(worst, std::abs(prob_of(s, basis, 0) + prob_of(s, basis, 1) - 1.0));
  }
  ok = ok && worst <= kAlgebraTol;
  report(6, "algebraic suite", ok, "six gates unitary, U flips, H/Hbar exchange, Born sum err " +
                                       fmt("%.1e", worst));
}

void reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "qss_acceptance_repro";
  fs::create_directories(dir);
  bool ok = true;
  std::string detail;

  auto compare = [&](const std::string& name, auto&& produce) {
    const auto a = dir / (name + "_a"), b = dir / (name + "_b"), c = dir / (name + "_c");
    write_report(produce(1u), a);
    write_report(produce(1u), b);
    write_report(produce(jobs() > 1 ? jobs() : 3u), c);
    const auto ra = slurp(a);
    const bool same = !ra.empty() && ra == slurp(b) && ra == slurp(c);
    ok = ok && same;
    detail += name + (same ? " identical, " : " DIFFERS, ");
  };

  compare("run", [](unsigned j) {
    auto cfg = resolve_config({{"protocol", "original"}, {"attack", "trojan"}, {"trials", "200"},
                               {"seed", "14"}});
    cfg.jobs = j;
    return render_run_report(cfg, run_trials(cfg), ReportFormat::Json);
  });
  compare("run_csv", [](unsigned j) {
    auto cfg = resolve_config({{"protocol", "improved"}, {"attack", "eve"}, {"decoys", "on"},
                               {"trials", "200"}, {"seed", "15"}});
    cfg.jobs = j;
    return render_run_report(cfg, run_trials(cfg), ReportFormat::Csv);
  });
  compare("sweep", [](unsigned j) { return sweep_report(j); });
  compare("detect", [](unsigned j) {
    auto cfg = resolve_config({{"protocol", "improved"}, {"trials", "200"}, {"seed", "16"}});
    cfg.jobs = j;
    return render_detect_report(cfg, detection_curve(cfg, cfg.n_values), ReportFormat::Json);
  });
  fs::remove_all(dir);
  report(7, "reproducibility", ok, detail + "across repeats and thread counts");
}

}  // namespace

int main() {
  sweep();
  invisibility();
  defence();
  outsider();
  completeness();
  algebra();
  reproducibility();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
