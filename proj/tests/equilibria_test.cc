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

#include "ccelab/cce_factory.h"
#include "ccelab/constructions.h"
#include "ccelab/embedding.h"
#include "ccelab/equilibria.h"
#include "test_util.h"

namespace ccelab {
namespace {

TEST_CASE("argmax breaks ties toward the lowest index") {
  CHECK(ArgmaxLowest(std::vector<double>{0.5, 0.5, 0.4}) == 0);
  CHECK(ArgmaxLowest(std::vector<double>{0.1, 0.5 + 1e-15, 0.5}) == 1);
  CHECK(ArgmaxLowest(std::vector<double>{0.1, 0.5, 0.6}) == 2);
}

TEST_CASE("Markov DP agrees with exact enumeration") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    MarkovGame g = testing::RandomMarkovGame(rng, 2, 3, {2, 2});
    ProductPolicy p = testing::RandomMarkovProduct(rng, g);
    std::vector<MarkovPolicy> rows = {*p.players[0].markov(), *p.players[1].markov()};
    ValueReport dp = ValueMarkovProduct(g, rows);
    ValueOptions exact;
    exact.mode = ValueOptions::Mode::kExact;
    ValueReport en = ValueGeneral(g, p, exact);
    CHECK(en.method == ValueMethod::kExactEnum);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(dp.values[i] - en.values[i]) <= 1e-12);
  }
}

TEST_CASE("Monte Carlo values carry standard errors") {
  Rng rng(22);
  MarkovGame g = testing::RandomMarkovGame(rng, 2, 2, {2, 2});
  ProductPolicy p = testing::RandomMarkovProduct(rng, g);
  ValueOptions mc;
  mc.mode = ValueOptions::Mode::kMonteCarlo;
  mc.samples = 20000;
  mc.seed = 3;
  ValueReport v = ValueGeneral(g, p, mc);
  ValueReport exact = ValueGeneral(g, p);
  CHECK(v.MethodTag().find("monte-carlo") != std::string::npos);
  for (int i = 0; i < 2; ++i) {
    CHECK(v.standard_errors[i] > 0.0);
    CHECK(std::abs(v.values[i] - exact.values[i]) <= 5 * v.standard_errors[i] + 1e-12);
  }
  ValueReport again = ValueGeneral(g, p, mc);
  CHECK(again.values == v.values);
}

// Brute-force oracle: the best deterministic policy over the reachable
// decision points, by enumeration.
double BruteForceBestResponse(const MarkovGame& g, const DistributionalPolicy& mix, int i) {
  DeterministicMixture all = AllDeterministicPolicies(ReachableDecisionPoints(g, i));
  double best = -1e9;
  for (size_t k = 0; k < all.choices.size(); ++k) {
    DistributionalPolicy dev =
        WithDeviation(mix, i, all.Member(static_cast<int>(k)).ToProgram());
    best = std::max(best, ValueGeneral(g, dev).values[i]);
  }
  return best;
}

TEST_CASE("general best response matches brute force") {
  Rng rng(23);
  for (int trial = 0; trial < 8;) {
    MarkovGame g = testing::RandomMarkovGame(rng, 1 + UniformInt(rng, 2), 2, {2, 2});
    // Keep the brute force over deterministic policies small.
    if (ReachableDecisionPoints(g, 0)->points.size() > 9 ||
        ReachableDecisionPoints(g, 1)->points.size() > 9) {
      continue;
    }
    ++trial;
    DistributionalPolicy mix = DistributionalPolicy::Uniform(
        {testing::RandomMarkovProduct(rng, g), testing::RandomMarkovProduct(rng, g)});
    for (int i = 0; i < 2; ++i) {
      GeneralBestResponse br = BestResponseGeneralExact(g, mix, i);
      CHECK(std::abs(br.value - BruteForceBestResponse(g, mix, i)) <= 1e-12);
      DistributionalPolicy dev = WithDeviation(mix, i, br.policy.ToProgram());
      CHECK(std::abs(ValueGeneral(g, dev).values[i] - br.value) <= 1e-12);
    }
  }
}

TEST_CASE("Markov best response against Markov opponents") {
  Rng rng(24);
  MarkovGame g = testing::RandomMarkovGame(rng, 2, 2, {2, 2});
  ProductPolicy p = testing::RandomMarkovProduct(rng, g);
  std::vector<MarkovPolicy> rows = {*p.players[0].markov(), *p.players[1].markov()};
  MarkovBestResponse br = BestResponseMarkov(g, 0, rows);
  MarkovBestResponse search =
      BestResponseMarkovAgainst(g, 0, DistributionalPolicy::Single(p));
  CHECK(std::abs(br.value - search.value) <= 1e-12);
  rows[0] = br.policy;
  CHECK(std::abs(ValueMarkovProduct(g, rows).values[0] - br.value) <= 1e-12);
}

TEST_CASE("Nash gaps of matching pennies") {
  Fixture mp = LoadFixture("matching-pennies");
  std::vector<double> pure = EpsNashGap(mp.game, {{1.0, 0.0}, {1.0, 0.0}});
  CHECK(pure[0] == 0.0);
  CHECK(pure[1] == 1.0);
  CHECK(MaxNashGap(mp.game, {{0.5, 0.5}, {0.5, 0.5}}) == 0.0);
  auto nash = BruteForceNash(mp.game, 0.0, 10);
  REQUIRE(nash);
  CHECK((*nash)[0] == Distribution{0.5, 0.5});
  CHECK_FALSE(BruteForceNash(mp.game, 0.0, 3));
  CHECK_THROWS(EpsNashGap(mp.game, {{0.7, 0.7}, {0.5, 0.5}}));
}

TEST_CASE("stage Nash transfers to the repeated construction") {
  Fixture mp = LoadFixture("matching-pennies");
  MarkovGame g = BuildRepeatedMg(mp.game, 4);
  MarkovPolicy half = MarkovPolicy::Constant(4, g.num_states(), {0.5, 0.5});
  DistributionalPolicy mix = DistributionalPolicy::Single(MarkovProduct({half, half}));
  GapReport gap = CceGap(g, mix, GapMode::kExact);
  CHECK(gap.MaxGain() <= 1e-12);
  CHECK(gap.value_method == "exact-enum");
}

TEST_CASE("regret matches T times the best-response gap") {
  Rng rng(25);
  MarkovGame g = testing::RandomMarkovGame(rng, 1, 2, {2, 2});
  std::vector<ProductPolicy> seq = {testing::RandomMarkovProduct(rng, g),
                                    testing::RandomMarkovProduct(rng, g)};
  RegretReport regret = RegretOfSequence(g, seq, GapMode::kExact);
  GapReport gap = CceGap(g, DistributionalPolicy::Uniform(seq), GapMode::kExact);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(regret.regrets[i] - 2 * gap.gains[i]) <= 1e-12);
}

TEST_CASE("action-revealing structure") {
  Fixture mp = LoadFixture("matching-pennies");
  CHECK(IsActionRevealing(BuildKibitzerMg(mp.game, 0.25), 0));
  CHECK(IsActionRevealing(BuildKibitzerMg(mp.game, 0.25), 2));
  // The stage action is only visible in the next state, which is observed.
  CHECK(IsActionRevealing(BuildRepeatedMg(mp.game, 4), 0));
}

TEST_CASE("Markov and general deviations separate on the separation fixture") {
  SeparationFixture f = MakeSeparationFixture();
  DistributionalPolicy mix =
      DistributionalPolicy::Single({{f.reward_reading_policy, f.copy_policy}});
  CHECK(std::abs(BestResponseMarkovAgainst(f.raw, 0, mix).value - 0.5) <= 1e-12);
  CHECK(std::abs(BestResponseGeneralExact(f.raw, mix, 0).value - 0.75) <= 1e-12);
  CHECK(std::abs(ValueGeneral(f.raw, mix).values[0] - 0.75) <= 1e-12);
}

}  // namespace
}  // namespace ccelab
