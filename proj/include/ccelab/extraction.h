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

#ifndef CCELAB_EXTRACTION_H_
#define CCELAB_EXTRACTION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccelab/aggregation.h"
#include "ccelab/constructions.h"
#include "ccelab/games.h"
#include "ccelab/policies.h"

namespace ccelab {

enum class CertificateSource { kExactStageNash, kLearnerProduced, kAdversarialFixture };

std::string CertificateSourceName(CertificateSource source);
CertificateSource ParseCertificateSource(const std::string& name);

// A sequence of product policies whose uniform mixture is claimed to be an
// approximate CCE.
struct SparseCceCertificate {
  std::vector<ProductPolicy> members;
  double eps = 0.0;
  CertificateSource source = CertificateSource::kLearnerProduced;
  std::optional<double> certified_gap;

  int size() const { return static_cast<int>(members.size()); }
  DistributionalPolicy Mixture() const;
};

// Throws std::invalid_argument when empty or dimension-incompatible.
void ValidateCertificate(const MarkovGame& game, const SparseCceCertificate& certificate);

// ---------------------------------------------------------------------------
// Aggregator over the certificate members' rows for one player. Contexts are
// the player's own (history, state) points; outcomes are its own actions.

class QhatTracker {
 public:
  QhatTracker(const SparseCceCertificate& certificate, int player);

  // Mixture prediction at (history, state). Remembers the rows for Observe.
  Distribution Predict(const OwnHistory& history, int state);
  // Updates the posterior with the action taken at the last predicted point.
  void Observe(int action);

  Distribution posterior() const { return Posterior(state_); }
  const AggregatorState& state() const { return state_; }

 private:
  const SparseCceCertificate* certificate_;
  int player_;
  AggregatorState state_;
  std::vector<Distribution> rows_;
};

// q-hat of `player` after its own history `history`, at `state`.
Distribution ComputeQhat(const SparseCceCertificate& certificate, int player,
                         const OwnHistory& history, int state);

// ---------------------------------------------------------------------------
// Two-player repeated construction.

// Deviation for player j: aggregates the opponent's stage rows over the
// stage steps seen so far (opponent actions are read off the states that
// follow them) and best-responds at stage steps; plays 0 elsewhere.
PolicyProgram BuildDeviationPolicyRepeated(const MarkovGame& game,
                                           const SparseCceCertificate& certificate,
                                           int player);

struct Algorithm1Result {
  bool found = false;
  int member = -1;
  int step = -1;
  std::vector<Distribution> profile;
  double gap = 0.0;
  int scanned = 0;
};

// First stage profile sigma^t_h(hub), over members t then stage steps h, whose
// Nash gap in `game` is at most `threshold`.
Algorithm1Result Algorithm1Extract(const NormalFormGame& game,
                                   const MarkovGame& repeated,
                                   const SparseCceCertificate& certificate,
                                   double threshold);

// ---------------------------------------------------------------------------
// Kibitzer construction.

// delta = eps / (6H); K = ceil(4 ln(m n0 / delta) / eps^2).
double Algorithm2Delta(double eps, int horizon);
int64_t Algorithm2SampleCount(int m, int n0, double eps, int horizon);

// Full joint profiles of every past step, decoded from one player's rewards.
// Throws std::invalid_argument when a reward does not decode.
std::vector<JointAction> RecoverProfiles(const KibitzerGameSpec& spec,
                                         const OwnHistory& history);

// Player j's own history implied by the decoded profiles.
OwnHistory ReconstructHistory(const KibitzerGameSpec& spec,
                              const std::vector<JointAction>& profiles, int player);

// Counts of K i.i.d. draws from the product of `qhats`, keyed by the flattened
// index of the m-player profile.
std::map<int64_t, int64_t> SampleProfileCounts(const KibitzerGameSpec& spec,
                                               const std::vector<Distribution>& qhats,
                                               int64_t samples, Rng& rng);

// Exact argmax of the expected stage payoff of `player` against the product
// of the other players' q-hats (entry `player` of `qhats` is ignored).
int KibitzerBestResponse(const KibitzerGameSpec& spec,
                         const std::vector<Distribution>& qhats, int player);

struct DeviationPolicyBundle {
  // One deviation per player of the kibitzer game, the kibitzer last.
  std::vector<PolicyProgram> policies;
  int64_t samples = 0;
};

// Players i < m: exact best response to the product of the other players'
// q-hats. Player m: the sampled argmax of the estimated kibitzer reward.
PolicyProgram BuildKibitzerDeviation(const KibitzerGameSpec& spec,
                                     const SparseCceCertificate& certificate,
                                     int player, int64_t samples);
DeviationPolicyBundle BuildKibitzerDeviations(const KibitzerGameSpec& spec,
                                              const SparseCceCertificate& certificate,
                                              int64_t samples);

struct QueryLedger {
  std::vector<std::pair<std::string, int64_t>> items;
  // Measured independently from the oracle counter.
  int64_t total = 0;

  void Add(const std::string& name, int64_t count);
  int64_t Get(const std::string& name) const;
  int64_t ItemSum() const;
  bool Balanced() const { return ItemSum() == total; }
};

struct Algorithm2Options {
  // 0 uses Algorithm2SampleCount.
  int64_t samples = 0;
  // Return at the first step whose check passes.
  bool stop_on_pass = true;
};

struct Algorithm2Step {
  int step = 0;
  std::vector<Distribution> posteriors;
  std::vector<Distribution> qhats;
  std::map<int64_t, int64_t> sample_counts;
  std::vector<double> rhat;
  int kibitzer_action = 0;
  JointAction played;
  double check_value = 0.0;
  bool passed = false;
};

struct Algorithm2Result {
  bool success = false;
  int success_step = -1;
  std::vector<Distribution> profile;
  int member = -1;
  int64_t samples = 0;
  double threshold = 0.0;
  std::vector<Algorithm2Step> transcript;
  // The simulated episode, including the kibitzer's actions and all rewards.
  Trajectory trajectory;
  QueryLedger queries;
};

// One simulated episode of the kibitzer deviation against the certificate.
// Rewards are realized through `oracle` with 2(m+1) payoff queries per step.
Algorithm2Result Algorithm2Extract(const KibitzerGameSpec& spec, PayoffOracle& oracle,
                                   const SparseCceCertificate& certificate,
                                   uint64_t seed, const Algorithm2Options& options = {});

// JSON transcript, one record per step.
std::string TranscriptJson(const Algorithm2Result& result);

// Combines per-run ledgers with the producer's queries; `oracle_total` is the
// counter of the shared oracle after all runs.
QueryLedger QueryAccounting(const std::vector<Algorithm2Result>& runs,
                            int64_t producer_queries, int64_t oracle_total);

}  // namespace ccelab

#endif  // CCELAB_EXTRACTION_H_
