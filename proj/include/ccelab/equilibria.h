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

#ifndef CCELAB_EQUILIBRIA_H_
#define CCELAB_EQUILIBRIA_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccelab/games.h"
#include "ccelab/policies.h"

namespace ccelab {

inline constexpr double kTieTolerance = 1e-13;

// First index whose value is not beaten by more than kTieTolerance.
int ArgmaxLowest(std::span<const double> values);

enum class ValueMethod { kExactDp, kExactEnum, kMonteCarlo };

struct ValueReport {
  std::vector<double> values;
  ValueMethod method = ValueMethod::kExactDp;
  int64_t samples = 0;
  uint64_t seed = 0;
  // Zero for exact methods.
  std::vector<double> standard_errors;

  std::string MethodTag() const;
};

ValueReport ValueMarkovProduct(const MarkovGame& game,
                               const std::vector<MarkovPolicy>& policy);

struct ValueOptions {
  enum class Mode { kAuto, kExact, kMonteCarlo };
  Mode mode = Mode::kAuto;
  int64_t samples = 20000;
  uint64_t seed = 0;
  int64_t budget = kEnumerationBudget;
};

// Exact enumeration when it fits the budget (or is forced), Monte Carlo
// otherwise. kExact rethrows BudgetExceeded.
ValueReport ValueGeneral(const MarkovGame& game,
                         const DistributionalPolicy& policy,
                         const ValueOptions& options = {});
ValueReport ValueGeneral(const MarkovGame& game, const ProductPolicy& policy,
                         const ValueOptions& options = {});

struct MarkovBestResponse {
  MarkovPolicy policy;
  double value = 0.0;
};

// Backward induction against Markov opponents; opponents[player] is ignored.
MarkovBestResponse BestResponseMarkov(const MarkovGame& game, int player,
                                      const std::vector<MarkovPolicy>& opponents);

// Best Markov deviation against arbitrary opponents, by exhaustive search
// over deterministic Markov policies (value is multilinear in the rows).
MarkovBestResponse BestResponseMarkovAgainst(
    const MarkovGame& game, int player, const DistributionalPolicy& others,
    int64_t budget = kEnumerationBudget);

// Per-(h, s) average of each player's rows across the members.
std::vector<MarkovPolicy> AverageMarkovBehavior(
    const DistributionalPolicy& mixture);

// True when, at every step where the joint action affects some reward or
// transition, player i's observed (reward, next-state support) separates
// all opponent profiles. The last step is exempt.
bool IsActionRevealing(const MarkovGame& game, int player);

struct GeneralBestResponse {
  DeterministicPolicy policy;
  double value = 0.0;
  int64_t nodes = 0;
};

// Exact best response over deterministic general policies against the
// mixture's other players. Backward induction over player-i information
// sets; each set carries the unnormalised joint weight of (member, joint
// history), which is the Bayesian posterior over the member index.
GeneralBestResponse BestResponseGeneralExact(
    const MarkovGame& game, const DistributionalPolicy& mixture, int player,
    int64_t budget = kEnumerationBudget);

enum class GapMode { kExact, kWitness };

struct GapReport {
  GapMode mode = GapMode::kExact;
  std::vector<double> gains;
  std::vector<double> deviation_values;
  std::vector<double> on_path_values;
  // Standard errors of the gains when Monte Carlo values were used.
  std::vector<double> standard_errors;
  std::vector<PolicyProgram> witnesses;
  std::string value_method;

  double MaxGain() const;
};

// kExact uses BestResponseGeneralExact; kWitness evaluates the supplied
// deviations, one per player, and certifies only a lower bound.
GapReport CceGap(const MarkovGame& game, const DistributionalPolicy& mixture,
                 GapMode mode,
                 const std::vector<PolicyProgram>* witnesses = nullptr,
                 const ValueOptions& value_options = {});

struct RegretReport {
  GapMode mode = GapMode::kExact;
  std::vector<double> regrets;
};

RegretReport RegretOfSequence(const MarkovGame& game,
                              const std::vector<ProductPolicy>& sequence,
                              GapMode mode,
                              const std::vector<PolicyProgram>* witnesses = nullptr,
                              const ValueOptions& value_options = {});

// Best pure deviation gain of each player.
std::vector<double> EpsNashGap(const NormalFormGame& game,
                               const std::vector<Distribution>& profile);
double MaxNashGap(const NormalFormGame& game,
                  const std::vector<Distribution>& profile);

// Grid search over profiles whose probabilities are multiples of
// 1/resolution. Returns the grid profile with the smallest max gap (first in
// lexicographic grid order among ties) when that gap is at most eps.
std::optional<std::vector<Distribution>> BruteForceNash(
    const NormalFormGame& game, double eps, int resolution);

}  // namespace ccelab

#endif  // CCELAB_EQUILIBRIA_H_
