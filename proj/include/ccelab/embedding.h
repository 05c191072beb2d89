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

#ifndef CCELAB_EMBEDDING_H_
#define CCELAB_EMBEDDING_H_

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccelab/games.h"
#include "ccelab/policies.h"

namespace ccelab {

// A point (tau_{h-1}, s_h) at which a player chooses an action.
struct DecisionPoint {
  OwnHistory history;
  int state;
  std::string key;
  // Index of the decision point at each earlier step along this history.
  std::vector<int> prefixes;
};

// Every own-history decision point of `player` that some joint play reaches
// with positive probability, in depth-first order.
struct DecisionDomain {
  int player = 0;
  int num_actions = 0;
  std::vector<DecisionPoint> points;
  std::unordered_map<std::string, int> index;

  int Find(const std::string& key) const {
    auto it = index.find(key);
    return it == index.end() ? -1 : it->second;
  }
};

std::shared_ptr<const DecisionDomain> ReachableDecisionPoints(
    const MarkovGame& game, int player, int64_t budget = kEnumerationBudget);

// Finite mixture over deterministic policies on a domain; choices[k][d] is
// the action of policy k at decision point d.
struct DeterministicMixture {
  std::shared_ptr<const DecisionDomain> domain;
  std::vector<double> weights;
  std::vector<std::vector<int>> choices;

  DeterministicPolicy Member(int k) const;
};

// All deterministic policies on the domain, uniformly weighted.
DeterministicMixture AllDeterministicPolicies(
    std::shared_ptr<const DecisionDomain> domain,
    int64_t budget = kEnumerationBudget);

// Product-formula embedding; zero-weight policies are dropped.
DeterministicMixture PeEmbed(const PolicyProgram& policy,
                             std::shared_ptr<const DecisionDomain> domain,
                             int64_t budget = kEnumerationBudget);

// Conditional-probability policy of a mixture; a zero denominator plays 0.
PolicyProgram PfInverse(const DeterministicMixture& mixture);

// Exact trajectory law when each player independently draws one
// deterministic policy from its mixture before the episode.
TrajectoryDistribution EnumerateMixtureTrajectories(
    const MarkovGame& game, const std::vector<DeterministicMixture>& players,
    int64_t budget = kEnumerationBudget);

}  // namespace ccelab

#endif  // CCELAB_EMBEDDING_H_
