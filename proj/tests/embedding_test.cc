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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ccelab/embedding.h"
#include "test_util.h"

namespace ccelab {
namespace {

MarkovGame MatchGame() {
  MarkovGame g(1, 2, {2, 2});
  g.SetInitial({{0, Rational(1)}});
  for (int h = 0; h < 2; ++h) {
    for (int64_t j = 0; j < 4; ++j) {
      JointAction a = g.JointFromIndex(j);
      g.SetTransition(h, 0, j, {{0, Rational(1)}});
      g.SetReward(h, 0, j, 0, a[0] == a[1] ? Rational(1, 2) : Rational(0));
      g.SetReward(h, 0, j, 1, Rational(0));
    }
  }
  return g;
}

void CheckSameLaw(const TrajectoryDistribution& a, const TrajectoryDistribution& b) {
  for (const auto& [t, p] : a) {
    auto it = b.find(t);
    double q = it == b.end() ? 0.0 : it->second;
    CHECK(std::abs(p - q) <= 1e-12);
  }
  for (const auto& [t, q] : b) {
    if (a.find(t) == a.end()) CHECK(q <= 1e-12);
  }
}

TEST_CASE("reachable decision points of the match game") {
  MarkovGame g = MatchGame();
  auto d0 = ReachableDecisionPoints(g, 0);
  // Root plus (own action, observed reward) pairs at the second step.
  CHECK(d0->points.size() == 5);
  CHECK(d0->Find("|0") == 0);
  CHECK(d0->Find("0.1.1/2^1;|0") >= 0);
  // Player 1 always observes reward 0: root plus one point per own action.
  CHECK(ReachableDecisionPoints(g, 1)->points.size() == 3);
  CHECK(AllDeterministicPolicies(d0).choices.size() == 32);
}

TEST_CASE("product embedding reproduces the trajectory law") {
  Rng rng(4);
  MarkovGame g = testing::RandomMarkovGame(rng, 2, 2, {2, 2});
  ProductPolicy sigma = testing::RandomMarkovProduct(rng, g);
  std::vector<DeterministicMixture> embedded;
  for (int i = 0; i < 2; ++i) {
    embedded.push_back(PeEmbed(sigma.players[i], ReachableDecisionPoints(g, i)));
    double total = 0.0;
    for (double w : embedded.back().weights) total += w;
    CHECK(total == doctest::Approx(1.0));
  }
  CheckSameLaw(EnumerateTrajectoryDistribution(g, sigma),
               EnumerateMixtureTrajectories(g, embedded));
}

TEST_CASE("inverse embedding of a mixture reproduces its law") {
  Rng rng(8);
  MarkovGame g = testing::RandomMarkovGame(rng, 2, 2, {2, 2});
  std::vector<DeterministicMixture> mixtures;
  ProductPolicy inverse;
  for (int i = 0; i < 2; ++i) {
    DeterministicMixture all = AllDeterministicPolicies(ReachableDecisionPoints(g, i));
    DeterministicMixture pick;
    pick.domain = all.domain;
    for (int k = 0; k < 3; ++k) {
      pick.choices.push_back(all.choices[UniformInt(rng, static_cast<int>(all.choices.size()))]);
      pick.weights.push_back(k == 0 ? 0.5 : 0.25);
    }
    mixtures.push_back(pick);
    inverse.players.push_back(PfInverse(pick));
  }
  CheckSameLaw(EnumerateMixtureTrajectories(g, mixtures),
               EnumerateTrajectoryDistribution(g, inverse));
}

TEST_CASE("deterministic members act as their choices") {
  MarkovGame g = MatchGame();
  DeterministicMixture all = AllDeterministicPolicies(ReachableDecisionPoints(g, 0));
  DeterministicPolicy last = all.Member(static_cast<int>(all.choices.size()) - 1);
  for (const DecisionPoint& p : all.domain->points) {
    CHECK(last.ActByKey(p.key) == all.choices.back()[all.domain->Find(p.key)]);
  }
}

}  // namespace
}  // namespace ccelab
