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

#ifndef CCELAB_CCE_FACTORY_H_
#define CCELAB_CCE_FACTORY_H_

#include <optional>
#include <string>
#include <vector>

#include "ccelab/constructions.h"
#include "ccelab/extraction.h"
#include "ccelab/games.h"
#include "ccelab/policies.h"
#include "json.hpp"

namespace ccelab {

enum class ConstructionKind { kRepeated, kKibitzer, kAlternative };

std::string ConstructionKindName(ConstructionKind kind);
ConstructionKind ParseConstructionKind(const std::string& name);

struct ConstructedGame {
  ConstructionKind kind = ConstructionKind::kRepeated;
  double eps = 0.0;
  int horizon_override = 0;
  MarkovGame game;
  // The normal-form game whose payoffs the Markov game carries (truncated
  // for the kibitzer and alternative constructions).
  NormalFormGame embedded;
  // Set for the kibitzer construction.
  std::optional<KibitzerGameSpec> kibitzer;
};

ConstructedGame Construct(const NormalFormGame& game, ConstructionKind kind,
                          double eps, int horizon_override = 0);

// Manifest of a construction: source hash, eps, kind, H, S, A and the bit
// layout where one exists.
nlohmann::json ConstructionManifest(const NormalFormGame& source,
                                    const ConstructedGame& built);

// T = 1: every player of the embedded game plays a grid Nash profile at every
// (h, s); a kibitzer plays its best response to that profile. Throws
// std::runtime_error when the grid holds no profile within eps_nash.
SparseCceCertificate StageNashCertificate(const ConstructedGame& built, double eps_nash,
                                          int resolution = 24);

// Independent full-information Hedge learners on the stage game at (h=0, s=0)
// with payoffs scaled by H. step_size <= 0 uses sqrt(8 ln n / T).
SparseCceCertificate HedgeSelfplayCertificate(const ConstructedGame& built, int T,
                                              double step_size = 0.0);

// Member t plays pure profile t mod n^m at every (h, s); a kibitzer plays
// uniformly. Refuses games with a pure Nash.
SparseCceCertificate AdversarialNeverNashSequence(const ConstructedGame& built, int T);

struct SeparationFixture {
  MarkovGame raw;
  // Rewards rescaled to [-1/H, 1/H]; equal to `raw` since H = 2.
  MarkovGame rescaled;
  bool rescaled_equals_raw = false;
  // Player 1: uniform at the first step, then repeats its own first action.
  PolicyProgram copy_policy;
  // Player 0: plays 0, then the action its first reward reveals.
  PolicyProgram reward_reading_policy;
};

SeparationFixture MakeSeparationFixture();

struct Fixture {
  std::string name;
  NormalFormGame game;
  std::vector<Distribution> known_nash;
  bool has_pure_nash = false;
  std::string provenance;
};

std::vector<std::string> FixtureNames();
// Re-derives the equilibrium data by grid search and throws
// std::runtime_error on disagreement.
Fixture LoadFixture(const std::string& name);

// Certificates of Markov and tabular members. Procedural members throw.
nlohmann::json CertificateToJson(const SparseCceCertificate& certificate);
SparseCceCertificate CertificateFromJson(const nlohmann::json& doc);
nlohmann::json PolicyToJson(const PolicyProgram& policy);
PolicyProgram PolicyFromJson(const nlohmann::json& doc);

}  // namespace ccelab

#endif  // CCELAB_CCE_FACTORY_H_
