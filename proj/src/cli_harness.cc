// Copyright 2026 The ccelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ccelab/cli_harness.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ccelab/cce_factory.h"
#include "ccelab/equilibria.h"
#include "ccelab/extraction.h"
#include "ccelab/game_io.h"
#include "json.hpp"

namespace ccelab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string ProfileString(const std::vector<Distribution>& profile) {
  std::string out;
  for (size_t i = 0; i < profile.size(); ++i) {
    if (i > 0) out += '|';
    for (size_t a = 0; a < profile[i].size(); ++a) {
      if (a > 0) out += ' ';
      out += Fmt(profile[i][a]);
    }
  }
  return out;
}

void CheckConfig(const ExperimentConfig& c) {
  if (!c.seed_set) throw UsageError("--seed is required");
  if (!(c.eps > 0.0 && c.eps <= 0.5)) throw UsageError("--eps must lie in (0, 1/2]");
  if (c.reps < 1) throw UsageError("--reps must be positive");
  if (c.T < 1) throw UsageError("--T must be positive");
  if (c.mode != "exact" && c.mode != "witness" && c.mode != "monte-carlo") {
    throw UsageError("--mode must be exact, witness or monte-carlo");
  }
}

void WriteOut(const ExperimentConfig& c, const std::string& name, const std::string& text) {
  fs::create_directories(c.out);
  WriteFile((fs::path(c.out) / name).string(), text);
}

json ConfigJson(const ExperimentConfig& c) {
  return {{"game", c.game},         {"kind", c.kind},     {"eps", c.eps},
          {"T", c.T},               {"K", c.K},           {"seed", c.seed},
          {"reps", c.reps},         {"mode", c.mode},     {"producer", c.producer},
          {"certificate", c.certificate}, {"nash_eps", c.nash_eps},
          {"horizon", c.horizon}};
}

// Reads every payoff row once through the counted oracle.
NormalFormGame ReadThroughOracle(PayoffOracle& oracle) {
  const NormalFormGame& g = oracle.game();
  std::vector<std::vector<Rational>> payoffs(g.num_players());
  for (int64_t p = 0; p < g.num_profiles(); ++p) {
    std::span<const Rational> row = oracle.Query(g.ProfileFromIndex(p));
    for (int i = 0; i < g.num_players(); ++i) payoffs[i].push_back(row[i]);
  }
  return NormalFormGame(g.num_players(), g.num_actions(), std::move(payoffs),
                        g.bit_budget());
}

struct Pipeline {
  NormalFormGame source;
  ConstructedGame built;
  SparseCceCertificate certificate;
  json producer;
  int64_t producer_queries = 0;
};

Pipeline Prepare(const ExperimentConfig& c, bool need_certificate) {
  Pipeline p;
  p.source = LoadGame(c.game);
  PayoffOracle oracle(p.source);
  NormalFormGame read = ReadThroughOracle(oracle);
  ConstructionKind kind;
  try {
    kind = ParseConstructionKind(c.kind);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  p.built = Construct(read, kind, c.eps, c.horizon);
  p.producer_queries = oracle.query_count();
  if (!need_certificate) return p;
  if (!c.certificate.empty()) {
    p.certificate = CertificateFromJson(json::parse(ReadFile(c.certificate)));
    p.producer = {{"name", "file"}, {"path", c.certificate}};
  } else if (c.producer == "stage-nash") {
    p.certificate = StageNashCertificate(p.built, c.nash_eps, 24);
    p.producer = {{"name", c.producer}, {"nash_eps", c.nash_eps}, {"resolution", 24}};
  } else if (c.producer == "hedge") {
    p.certificate = HedgeSelfplayCertificate(p.built, c.T);
    p.producer = {{"name", c.producer}, {"T", c.T}};
  } else if (c.producer == "adversarial") {
    p.certificate = AdversarialNeverNashSequence(p.built, c.T);
    p.producer = {{"name", c.producer}, {"T", c.T}};
  } else {
    throw UsageError("unknown producer: " + c.producer);
  }
  ValidateCertificate(p.built.game, p.certificate);
  return p;
}

int CmdBuild(const ExperimentConfig& c, std::ostream& out) {
  Pipeline p = Prepare(c, false);
  json manifest = ConstructionManifest(p.source, p.built);
  manifest["config"] = ConfigJson(c);
  WriteOut(c, "game.json", SerializeGame(p.built.game));
  WriteOut(c, "manifest.json", manifest.dump(1) + "\n");
  out << "built " << ConstructionKindName(p.built.kind) << " game: players "
      << p.built.game.num_players() << ", H " << p.built.game.horizon() << ", S "
      << p.built.game.num_states() << "\n";
  return kExitPass;
}

int CmdCertify(const ExperimentConfig& c, std::ostream& out) {
  Pipeline p = Prepare(c, true);
  json doc = CertificateToJson(p.certificate);
  json manifest = ConstructionManifest(p.source, p.built);
  manifest["producer"] = p.producer;
  manifest["config"] = ConfigJson(c);
  manifest["certification"] =
      p.certificate.certified_gap ? "certified" : "uncertified";
  WriteOut(c, "certificate.json", doc.dump(1) + "\n");
  WriteOut(c, "certificate_manifest.json", manifest.dump(1) + "\n");
  out << "certificate: T " << p.certificate.size() << ", source "
      << CertificateSourceName(p.certificate.source);
  if (p.certificate.certified_gap) out << ", certified gap " << Fmt(*p.certificate.certified_gap);
  out << "\n";
  return kExitPass;
}

struct RepetitionRow {
  bool success = false;
  int step = -1;
  int member = -1;
  std::vector<Distribution> profile;
  double gap = 0.0;
  int64_t queries = 0;
  double wall_ms = 0.0;
  Algorithm2Result run;
};

int CmdExtract(const ExperimentConfig& c, std::ostream& out) {
  Pipeline p = Prepare(c, true);
  std::vector<RepetitionRow> rows(c.reps);
  int64_t samples = 0;
  if (p.built.kind == ConstructionKind::kRepeated) {
    ParallelFor(c.reps, [&](int64_t r) {
      auto start = std::chrono::steady_clock::now();
      Algorithm1Result res =
          Algorithm1Extract(p.source, p.built.game, p.certificate, 4.0 * c.eps);
      RepetitionRow& row = rows[r];
      row.success = res.found;
      row.step = res.step;
      row.member = res.member;
      row.profile = res.profile;
      if (res.found) row.gap = MaxNashGap(p.source, res.profile);
      row.queries = static_cast<int64_t>(res.scanned) * p.source.num_profiles();
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    });
  } else if (p.built.kind == ConstructionKind::kKibitzer) {
    const KibitzerGameSpec& spec = *p.built.kibitzer;
    samples = c.K > 0 ? c.K
                      : Algorithm2SampleCount(spec.num_players(), spec.num_actions(),
                                              spec.eps, spec.horizon);
    Algorithm2Options options;
    options.samples = samples;
    ParallelFor(c.reps, [&](int64_t r) {
      auto start = std::chrono::steady_clock::now();
      PayoffOracle oracle(spec.source);
      RepetitionRow& row = rows[r];
      row.run = Algorithm2Extract(spec, oracle, p.certificate, DeriveSeed(c.seed, r), options);
      row.success = row.run.success;
      row.step = row.run.success_step;
      row.member = row.run.member;
      row.profile = row.run.profile;
      if (row.success) row.gap = MaxNashGap(p.source, row.profile);
      row.queries = row.run.queries.total;
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    });
  } else {
    throw UsageError("extraction runs on the repeated or kibitzer construction");
  }

  std::ostringstream csv;
  std::ostringstream timing;
  csv << "repetition,outcome,step,member,profile,nash_gap,queries\n";
  timing << "repetition,wall_ms\n";
  int successes = 0;
  int64_t oracle_total = p.producer_queries;
  std::vector<Algorithm2Result> runs;
  for (int r = 0; r < c.reps; ++r) {
    const RepetitionRow& row = rows[r];
    successes += row.success ? 1 : 0;
    oracle_total += row.queries;
    csv << r + 1 << "," << (row.success ? "success" : "fail") << ","
        << (row.success ? row.step + 1 : 0) << "," << row.member + 1 << ","
        << ProfileString(row.profile) << "," << (row.success ? Fmt(row.gap) : "")
        << "," << row.queries << "\n";
    timing << r + 1 << "," << Fmt(row.wall_ms) << "\n";
    if (p.built.kind == ConstructionKind::kKibitzer) runs.push_back(row.run);
  }
  json manifest = ConstructionManifest(p.source, p.built);
  manifest["producer"] = p.producer;
  manifest["config"] = ConfigJson(c);
  manifest["successes"] = successes;
  manifest["repetitions"] = c.reps;
  if (p.built.kind == ConstructionKind::kKibitzer) {
    manifest["K"] = samples;
    manifest["threshold"] = runs.front().threshold;
    QueryLedger ledger = QueryAccounting(runs, p.producer_queries, oracle_total);
    json items = json::object();
    for (const auto& [name, count] : ledger.items) items[name] = count;
    manifest["queries"] = {{"items", items}, {"total", ledger.total},
                           {"balanced", ledger.Balanced()}};
    WriteOut(c, "extract_transcript_1.json", TranscriptJson(runs.front()));
  } else {
    manifest["threshold"] = 4.0 * c.eps;
  }
  WriteOut(c, "extract.csv", csv.str());
  WriteOut(c, "extract_timing.csv", timing.str());
  WriteOut(c, "extract_manifest.json", manifest.dump(1) + "\n");
  out << "successes " << successes << "/" << c.reps << " (frequency "
      << Fmt(static_cast<double>(successes) / c.reps) << ")\n";
  return successes > 0 ? kExitPass : kExitAssertionFailed;
}

int VerifySeparation(const ExperimentConfig& c, std::ostream& out) {
  SeparationFixture f = MakeSeparationFixture();
  ProductPolicy product{{f.reward_reading_policy, f.copy_policy}};
  DistributionalPolicy mixture = DistributionalPolicy::Single(product);
  double markov = BestResponseMarkovAgainst(f.raw, 0, mixture).value;
  double general = BestResponseGeneralExact(f.raw, mixture, 0).value;
  double reader = ValueGeneral(f.raw, mixture, {ValueOptions::Mode::kExact}).values[0];
  bool ok = std::abs(markov - 0.5) <= 1e-12 && std::abs(general - 0.75) <= 1e-12 &&
            std::abs(reader - 0.75) <= 1e-12;
  out << "best Markov deviation value " << Fmt(markov) << " [exact]\n";
  out << "best general deviation value " << Fmt(general) << " [exact]\n";
  out << "reward-reading policy value " << Fmt(reader) << " [exact]\n";
  out << "rescaled rewards equal raw: " << (f.rescaled_equals_raw ? "yes" : "no") << "\n";
  json report = {{"target", "separation"},
                 {"markov_value", markov},
                 {"general_value", general},
                 {"reward_reading_value", reader},
                 {"pass", ok}};
  WriteOut(c, "verify.json", report.dump(1) + "\n");
  out << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitPass : kExitAssertionFailed;
}

std::vector<PolicyProgram> Witnesses(const ExperimentConfig& c, const Pipeline& p) {
  std::vector<PolicyProgram> w;
  switch (p.built.kind) {
    case ConstructionKind::kRepeated:
      for (int i = 0; i < 2; ++i) {
        w.push_back(BuildDeviationPolicyRepeated(p.built.game, p.certificate, i));
      }
      break;
    case ConstructionKind::kKibitzer:
      w = BuildKibitzerDeviations(*p.built.kibitzer, p.certificate, c.K).policies;
      break;
    case ConstructionKind::kAlternative:
      throw UsageError("no witness deviations for the alternative construction");
  }
  return w;
}

int CmdVerify(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  if (c.game == "separation") return VerifySeparation(c, out);
  Pipeline p = Prepare(c, true);
  double threshold = c.threshold >= 0.0 ? c.threshold : c.eps;
  DistributionalPolicy mixture = p.certificate.Mixture();
  std::string mode = c.mode;
  GapReport report;
  std::vector<double> regrets;
  if (mode == "exact") {
    try {
      report = CceGap(p.built.game, mixture, GapMode::kExact);
      regrets = RegretOfSequence(p.built.game, p.certificate.members, GapMode::kExact).regrets;
    } catch (const BudgetExceeded& e) {
      err << "notice: exact mode refused (" << e.what() << "); ";
      if (!c.allow_witness) {
        err << "rerun with --mode witness or --allow-witness\n";
        return kExitAssertionFailed;
      }
      err << "downgrading to witness mode\n";
      mode = "witness";
    }
  }
  if (mode != "exact") {
    std::vector<PolicyProgram> witnesses = Witnesses(c, p);
    ValueOptions options;
    options.seed = c.seed;
    options.samples = c.mc_samples;
    if (mode == "monte-carlo") options.mode = ValueOptions::Mode::kMonteCarlo;
    report = CceGap(p.built.game, mixture, GapMode::kWitness, &witnesses, options);
  }
  double gain = report.MaxGain();
  bool pass = gain <= threshold + 1e-12;
  json players = json::array();
  for (size_t i = 0; i < report.gains.size(); ++i) {
    double se = i < report.standard_errors.size() ? report.standard_errors[i] : 0.0;
    out << "player " << i + 1 << " gain " << Fmt(report.gains[i]) << " ["
        << report.value_method;
    if (se > 0.0) out << ", stderr " << Fmt(se);
    out << "]\n";
    players.push_back({{"gain", report.gains[i]}, {"stderr", se}});
  }
  for (size_t i = 0; i < regrets.size(); ++i) {
    out << "player " << i + 1 << " regret " << Fmt(regrets[i]) << " [exact]\n";
  }
  std::string kind = mode == "exact" ? "exact cce gap" : "witness gain (lower bound)";
  out << kind << " " << Fmt(gain) << " vs threshold " << Fmt(threshold) << "\n";
  if (p.certificate.certified_gap) {
    out << "certified gap " << Fmt(*p.certificate.certified_gap) << "\n";
  }
  json doc = {{"mode", mode},
              {"method", report.value_method},
              {"players", players},
              {"regrets", regrets},
              {"max_gain", gain},
              {"threshold", threshold},
              {"pass", pass}};
  WriteOut(c, "verify.json", doc.dump(1) + "\n");
  out << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitAssertionFailed;
}

int CmdReport(const ExperimentConfig& c, std::ostream& out) {
  fs::path path = fs::path(c.out) / "extract.csv";
  if (!fs::exists(path)) throw std::runtime_error("missing " + path.string());
  std::istringstream in(ReadFile(path.string()));
  std::string line;
  std::getline(in, line);
  int reps = 0;
  int successes = 0;
  double gap_sum = 0.0;
  double gap_max = 0.0;
  int64_t queries = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 6) throw std::runtime_error("malformed extract.csv row");
    ++reps;
    if (cells[1] == "success") {
      ++successes;
      double gap = std::stod(cells[5]);
      gap_sum += gap;
      gap_max = std::max(gap_max, gap);
    }
    if (cells.size() > 6) queries += std::stoll(cells[6]);
  }
  double frequency = reps > 0 ? static_cast<double>(successes) / reps : 0.0;
  json doc = {{"repetitions", reps},
              {"successes", successes},
              {"success_frequency", frequency},
              {"mean_gap", successes > 0 ? gap_sum / successes : 0.0},
              {"max_gap", gap_max},
              {"queries", queries}};
  WriteOut(c, "report.json", doc.dump(1) + "\n");
  out << "repetitions " << reps << ", successes " << successes << ", frequency "
      << Fmt(frequency) << ", max gap " << Fmt(gap_max) << " [measured]\n";
  return kExitPass;
}

}  // namespace

NormalFormGame LoadGame(const std::string& source) {
  for (const std::string& name : FixtureNames()) {
    if (name == source) return LoadFixture(name).game;
  }
  if (!fs::exists(source)) throw std::runtime_error("game not found: " + source);
  return DeserializeNormalFormGame(ReadFile(source));
}

int RunCommand(const std::string& command, const ExperimentConfig& config,
               std::ostream& out, std::ostream& err) {
  try {
    CheckConfig(config);
    if (command == "build") return CmdBuild(config, out);
    if (command == "certify") return CmdCertify(config, out);
    if (command == "extract") return CmdExtract(config, out);
    if (command == "verify") return CmdVerify(config, out, err);
    if (command == "report") return CmdReport(config, out);
    err << "error: unknown command " << command << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ccelab
