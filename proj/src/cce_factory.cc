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

#include "ccelab/cce_factory.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ccelab/equilibria.h"
#include "ccelab/game_io.h"

namespace ccelab {

namespace {

MarkovPolicy ConstantPolicy(const MarkovGame& game, const Distribution& row) {
  return MarkovPolicy::Constant(game.horizon(), game.num_states(), row);
}

// Pads a profile of the embedded game's players with a uniform kibitzer.
ProductPolicy ConstantProduct(const ConstructedGame& built,
                              const std::vector<Distribution>& profile) {
  std::vector<MarkovPolicy> players;
  for (int i = 0; i < built.game.num_players(); ++i) {
    Distribution row = i < static_cast<int>(profile.size())
                           ? profile[i]
                           : UniformDistribution(built.game.num_actions(i));
    players.push_back(ConstantPolicy(built.game, row));
  }
  return MarkovProduct(players);
}

NormalFormGame MakeTwoPlayer(int n, const std::vector<std::pair<Rational, Rational>>& cells) {
  std::vector<std::vector<Rational>> payoffs(2);
  for (const auto& [u0, u1] : cells) {
    payoffs[0].push_back(u0);
    payoffs[1].push_back(u1);
  }
  int bits = 1;
  for (const auto& row : payoffs) {
    for (const Rational& x : row) bits = std::max(bits, BitLength(x));
  }
  return NormalFormGame(2, n, std::move(payoffs), bits);
}

Fixture RawFixture(const std::string& name) {
  Rational one(1), half(1, 2), zero(0);
  Fixture f;
  f.name = name;
  if (name == "matching-pennies") {
    f.game = MakeTwoPlayer(2, {{one, zero}, {zero, one}, {zero, one}, {one, zero}});
    f.known_nash = {{0.5, 0.5}, {0.5, 0.5}};
    f.provenance = "classic zero-sum fixture; unique Nash is uniform";
  } else if (name == "rock-paper-scissors") {
    // Actions rock, paper, scissors; win 1, tie 1/2, loss 0.
    std::vector<std::pair<Rational, Rational>> cells;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (a == b) {
          cells.push_back({half, half});
        } else if ((a - b + 3) % 3 == 1) {
          cells.push_back({one, zero});
        } else {
          cells.push_back({zero, one});
        }
      }
    }
    f.game = MakeTwoPlayer(3, cells);
    f.known_nash = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    f.provenance = "constant-sum fixture; unique Nash is uniform";
  } else if (name == "coordination") {
    f.game = MakeTwoPlayer(2, {{one, one}, {zero, zero}, {zero, zero}, {half, half}});
    f.known_nash = {{1.0, 0.0}, {1.0, 0.0}};
    f.provenance = "2x2 coordination fixture; pure Nash at both diagonal cells";
  } else if (name == "dominant") {
    Rational q1(1, 4), q3(3, 4);
    f.game = MakeTwoPlayer(2, {{q3, q3}, {zero, one}, {one, zero}, {q1, q1}});
    f.known_nash = {{0.0, 1.0}, {0.0, 1.0}};
    f.provenance = "action 1 strictly dominant for both players";
  } else {
    throw std::invalid_argument("unknown fixture: " + name);
  }
  return f;
}

}  // namespace

std::string ConstructionKindName(ConstructionKind kind) {
  switch (kind) {
    case ConstructionKind::kRepeated:
      return "repeated";
    case ConstructionKind::kKibitzer:
      return "kibitzer";
    case ConstructionKind::kAlternative:
      return "alternative";
  }
  return "unknown";
}

ConstructionKind ParseConstructionKind(const std::string& name) {
  if (name == "repeated") return ConstructionKind::kRepeated;
  if (name == "kibitzer") return ConstructionKind::kKibitzer;
  if (name == "alternative") return ConstructionKind::kAlternative;
  throw std::invalid_argument("unknown construction kind: " + name);
}

ConstructedGame Construct(const NormalFormGame& game, ConstructionKind kind, double eps,
                          int horizon_override) {
  ConstructedGame built;
  built.kind = kind;
  built.eps = eps;
  built.horizon_override = horizon_override;
  switch (kind) {
    case ConstructionKind::kRepeated:
      built.game = BuildRepeatedMg(game, horizon_override);
      built.embedded = game;
      break;
    case ConstructionKind::kKibitzer:
      built.kibitzer = MakeKibitzerSpec(game, eps);
      built.game = BuildKibitzerMg(*built.kibitzer);
      built.embedded = built.kibitzer->source;
      break;
    case ConstructionKind::kAlternative:
      built.game = BuildAlternativeMg(game, eps);
      built.embedded = TruncatePayoffs(game, eps);
      break;
  }
  return built;
}

nlohmann::json ConstructionManifest(const NormalFormGame& source,
                                    const ConstructedGame& built) {
  nlohmann::json m;
  m["format"] = "ccelab-manifest/1";
  m["source_hash"] = ContentHash(SerializeGame(source));
  m["game_hash"] = ContentHash(SerializeGame(built.game));
  m["kind"] = ConstructionKindName(built.kind);
  m["eps"] = built.eps;
  m["H"] = built.game.horizon();
  m["S"] = built.game.num_states();
  m["A"] = built.game.action_counts();
  m["players"] = built.game.num_players();
  m["max_entry_bits"] = MaxEntryBits(built.game);
  if (built.kibitzer) {
    const KibitzerGameSpec& spec = *built.kibitzer;
    m["layout"] = {{"player_bits", spec.layout.player_bits},
                   {"kibitzer_bits", spec.layout.kibitzer_bits},
                   {"total_bits", spec.layout.total_bits()},
                   {"payoff_bits", spec.payoff_bits},
                   {"offset_bits", spec.offset_bits}};
  }
  return m;
}

SparseCceCertificate StageNashCertificate(const ConstructedGame& built, double eps_nash,
                                          int resolution) {
  std::optional<std::vector<Distribution>> nash =
      BruteForceNash(built.embedded, eps_nash, resolution);
  if (!nash) throw std::runtime_error("no grid profile within the requested Nash gap");
  double gap = MaxNashGap(built.embedded, *nash);
  std::vector<Distribution> profile = *nash;
  if (built.kind != ConstructionKind::kRepeated) {
    // The kibitzer plays its exact best response to the stage profile.
    const MarkovGame& g = built.game;
    int m = built.embedded.num_players();
    std::vector<double> expected(g.num_actions(m), 0.0);
    for (int64_t j = 0; j < g.num_joint_actions(); ++j) {
      JointAction a = g.JointFromIndex(j);
      double w = 1.0;
      for (int i = 0; i < m; ++i) w *= profile[i][a[i]];
      if (w > 0.0) expected[a[m]] += w * g.RewardValue(0, 0, j, m);
    }
    profile.push_back(PointMass(g.num_actions(m), ArgmaxLowest(expected)));
  }
  SparseCceCertificate cert;
  cert.members.push_back(ConstantProduct(built, profile));
  cert.eps = eps_nash;
  cert.source = CertificateSource::kExactStageNash;
  int H = built.game.horizon();
  switch (built.kind) {
    case ConstructionKind::kRepeated: {
      int stage_steps = 0;
      for (int h = 0; h < H; ++h) stage_steps += IsStageStep(h) ? 1 : 0;
      cert.certified_gap = gap * stage_steps / H;
      break;
    }
    case ConstructionKind::kKibitzer:
      cert.certified_gap = gap + std::ldexp(1.0, -built.kibitzer->offset_bits);
      break;
    case ConstructionKind::kAlternative:
      cert.certified_gap = gap;
      break;
  }
  return cert;
}

SparseCceCertificate HedgeSelfplayCertificate(const ConstructedGame& built, int T,
                                              double step_size) {
  if (T < 1 || T > 10000) throw std::invalid_argument("T must lie in [1, 10^4]");
  const MarkovGame& g = built.game;
  int n = g.num_players();
  int H = g.horizon();
  std::vector<double> eta(n);
  std::vector<std::vector<double>> cumulative(n);
  for (int i = 0; i < n; ++i) {
    int a = g.num_actions(i);
    eta[i] = step_size > 0.0 ? step_size : std::sqrt(8.0 * std::log(a) / T);
    cumulative[i].assign(a, 0.0);
  }
  SparseCceCertificate cert;
  cert.source = CertificateSource::kLearnerProduced;
  for (int t = 0; t < T; ++t) {
    std::vector<Distribution> profile(n);
    for (int i = 0; i < n; ++i) {
      double top = *std::max_element(cumulative[i].begin(), cumulative[i].end());
      Distribution p(cumulative[i].size());
      double total = 0.0;
      for (size_t a = 0; a < p.size(); ++a) {
        p[a] = std::exp(eta[i] * (cumulative[i][a] - top));
        total += p[a];
      }
      for (double& x : p) x /= total;
      profile[i] = std::move(p);
    }
    std::vector<MarkovPolicy> players;
    for (int i = 0; i < n; ++i) players.push_back(ConstantPolicy(g, profile[i]));
    cert.members.push_back(MarkovProduct(players));
    for (int64_t j = 0; j < g.num_joint_actions(); ++j) {
      JointAction joint = g.JointFromIndex(j);
      for (int i = 0; i < n; ++i) {
        double others = 1.0;
        for (int k = 0; k < n; ++k) {
          if (k != i) others *= profile[k][joint[k]];
        }
        cumulative[i][joint[i]] += others * H * g.RewardValue(0, 0, j, i);
      }
    }
  }
  return cert;
}

SparseCceCertificate AdversarialNeverNashSequence(const ConstructedGame& built, int T) {
  if (T < 1) throw std::invalid_argument("T must be positive");
  const NormalFormGame& g = built.embedded;
  int n = g.num_actions();
  for (int64_t p = 0; p < g.num_profiles(); ++p) {
    JointAction a = g.ProfileFromIndex(p);
    std::vector<Distribution> pure;
    for (int x : a) pure.push_back(PointMass(n, x));
    if (MaxNashGap(g, pure) <= kFloatTolerance) {
      throw std::invalid_argument("game has a pure Nash equilibrium");
    }
  }
  SparseCceCertificate cert;
  cert.source = CertificateSource::kAdversarialFixture;
  for (int t = 0; t < T; ++t) {
    JointAction a = g.ProfileFromIndex(t % g.num_profiles());
    std::vector<Distribution> pure;
    for (int x : a) pure.push_back(PointMass(n, x));
    cert.members.push_back(ConstantProduct(built, pure));
  }
  return cert;
}

SeparationFixture MakeSeparationFixture() {
  SeparationFixture f;
  MarkovGame g(1, 2, {2, 2});
  g.SetInitial({{0, Rational(1)}});
  Rational half(1, 2);
  for (int64_t j = 0; j < g.num_joint_actions(); ++j) {
    JointAction a = g.JointFromIndex(j);
    for (int h = 0; h < 2; ++h) {
      g.SetTransition(h, 0, j, {{0, Rational(1)}});
      g.SetReward(h, 0, j, 1, Rational(0));
    }
    g.SetReward(0, 0, j, 0, a[1] == 0 ? half : Rational(0));
    g.SetReward(1, 0, j, 0, a[0] == a[1] ? half : Rational(0));
  }
  f.raw = g;
  f.rescaled = g;
  f.rescaled_equals_raw = f.raw == f.rescaled;

  PolicyProgram::Table copy;
  copy[HistoryKey({}, 0)] = UniformDistribution(2);
  for (int a = 0; a < 2; ++a) {
    copy[HistoryKey({{0, a, Rational(0)}}, 0)] = PointMass(2, a);
  }
  f.copy_policy = PolicyProgram::FromTable(2, std::move(copy));

  PolicyProgram::Table reader;
  reader[HistoryKey({}, 0)] = PointMass(2, 0);
  reader[HistoryKey({{0, 0, half}}, 0)] = PointMass(2, 0);
  reader[HistoryKey({{0, 0, Rational(0)}}, 0)] = PointMass(2, 1);
  f.reward_reading_policy = PolicyProgram::FromTable(2, std::move(reader));
  return f;
}

std::vector<std::string> FixtureNames() {
  return {"matching-pennies", "rock-paper-scissors", "coordination", "dominant"};
}

Fixture LoadFixture(const std::string& name) {
  Fixture f = RawFixture(name);
  if (MaxNashGap(f.game, f.known_nash) > 1e-12) {
    throw std::runtime_error("fixture " + name + ": recorded Nash has a positive gap");
  }
  if (!BruteForceNash(f.game, 1e-12, 12)) {
    throw std::runtime_error("fixture " + name + ": grid search finds no Nash");
  }
  int n = f.game.num_actions();
  for (int64_t p = 0; p < f.game.num_profiles() && !f.has_pure_nash; ++p) {
    std::vector<Distribution> pure;
    for (int x : f.game.ProfileFromIndex(p)) pure.push_back(PointMass(n, x));
    f.has_pure_nash = MaxNashGap(f.game, pure) <= 1e-12;
  }
  return f;
}

nlohmann::json PolicyToJson(const PolicyProgram& policy) {
  nlohmann::json doc;
  if (const MarkovPolicy* m = policy.markov()) {
    doc["kind"] = "markov";
    doc["horizon"] = m->horizon();
    doc["states"] = m->num_states();
    doc["actions"] = m->num_actions();
    nlohmann::json rows = nlohmann::json::array();
    for (int h = 0; h < m->horizon(); ++h) {
      for (int s = 0; s < m->num_states(); ++s) rows.push_back(m->RowVector(h, s));
    }
    doc["rows"] = rows;
    return doc;
  }
  if (const PolicyProgram::Table* table = policy.table()) {
    doc["kind"] = "tabular";
    doc["actions"] = policy.num_actions();
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [key, row] : *table) entries[key] = row;
    doc["table"] = entries;
    return doc;
  }
  throw std::invalid_argument("procedural policies are not serializable");
}

PolicyProgram PolicyFromJson(const nlohmann::json& doc) {
  std::string kind = doc.at("kind").get<std::string>();
  if (kind == "markov") {
    MarkovPolicy m(doc.at("horizon").get<int>(), doc.at("states").get<int>(),
                   doc.at("actions").get<int>());
    const nlohmann::json& rows = doc.at("rows");
    if (rows.size() != static_cast<size_t>(m.horizon()) * m.num_states()) {
      throw std::invalid_argument("markov policy has the wrong number of rows");
    }
    size_t r = 0;
    for (int h = 0; h < m.horizon(); ++h) {
      for (int s = 0; s < m.num_states(); ++s) {
        m.SetRow(h, s, rows[r++].get<Distribution>());
      }
    }
    return PolicyProgram::FromMarkov(std::move(m));
  }
  if (kind == "tabular") {
    PolicyProgram::Table table;
    for (const auto& [key, row] : doc.at("table").items()) {
      table[key] = row.get<Distribution>();
    }
    return PolicyProgram::FromTable(doc.at("actions").get<int>(), std::move(table));
  }
  throw std::invalid_argument("unknown policy kind: " + kind);
}

nlohmann::json CertificateToJson(const SparseCceCertificate& certificate) {
  nlohmann::json doc;
  doc["format"] = "ccelab-certificate/1";
  doc["source"] = CertificateSourceName(certificate.source);
  doc["eps"] = certificate.eps;
  doc["certified_gap"] = certificate.certified_gap
                             ? nlohmann::json(*certificate.certified_gap)
                             : nlohmann::json(nullptr);
  nlohmann::json members = nlohmann::json::array();
  for (const ProductPolicy& member : certificate.members) {
    nlohmann::json players = nlohmann::json::array();
    for (const PolicyProgram& p : member.players) players.push_back(PolicyToJson(p));
    members.push_back(players);
  }
  doc["members"] = members;
  return doc;
}

SparseCceCertificate CertificateFromJson(const nlohmann::json& doc) {
  if (doc.value("format", "") != "ccelab-certificate/1") {
    throw std::invalid_argument("not a certificate document");
  }
  SparseCceCertificate cert;
  cert.source = ParseCertificateSource(doc.at("source").get<std::string>());
  cert.eps = doc.at("eps").get<double>();
  if (!doc.at("certified_gap").is_null()) {
    cert.certified_gap = doc.at("certified_gap").get<double>();
  }
  for (const nlohmann::json& players : doc.at("members")) {
    ProductPolicy member;
    for (const nlohmann::json& p : players) member.players.push_back(PolicyFromJson(p));
    cert.members.push_back(std::move(member));
  }
  if (cert.members.empty()) throw std::invalid_argument("certificate has no members");
  return cert;
}

}  // namespace ccelab
