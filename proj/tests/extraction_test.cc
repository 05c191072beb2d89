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
#include <map>

#include "ccelab/aggregation.h"
#include "ccelab/cce_factory.h"
#include "ccelab/equilibria.h"
#include "ccelab/extraction.h"
#include "test_util.h"

namespace ccelab {
namespace {

NormalFormGame Pennies() { return LoadFixture("matching-pennies").game; }

SparseCceCertificate FromProducts(std::vector<ProductPolicy> members) {
  SparseCceCertificate c;
  c.members = std::move(members);
  return c;
}

TEST_CASE("sample-count formula") {
  CHECK(Algorithm2SampleCount(2, 2, 0.1, 2) == 2470);
  CHECK(Algorithm2Delta(0.1, 2) == doctest::Approx(0.1 / 12));
  CHECK(Algorithm2SampleCount(2, 2, 0.5, 2) == 74);
}

TEST_CASE("q-hat with no observations averages the members") {
  MarkovGame g(1, 2, {2, 2});
  SparseCceCertificate c = FromProducts(
      {MarkovProduct({MarkovPolicy::Constant(2, 1, {1.0, 0.0}), MarkovPolicy(2, 1, 2)}),
       MarkovProduct({MarkovPolicy::Constant(2, 1, {0.5, 0.5}), MarkovPolicy(2, 1, 2)})});
  CHECK(ComputeQhat(c, 0, {}, 0) == Distribution{0.75, 0.25});
  // Action 1 has probability zero under the first member.
  Distribution q = ComputeQhat(c, 0, {{0, 1, Rational(0)}}, 0);
  CHECK(q == Distribution{0.5, 0.5});
}

TEST_CASE("q-hat matches the standalone aggregator") {
  Rng rng(6);
  MarkovGame g = testing::RandomMarkovGame(rng, 2, 3, {3, 2});
  std::vector<ProductPolicy> members;
  for (int t = 0; t < 4; ++t) members.push_back(testing::RandomMarkovProduct(rng, g));
  SparseCceCertificate c = FromProducts(members);
  OwnHistory history = {{0, 2, Rational(0)}, {1, 0, Rational(1, 4)}};
  AggregatorState s = AggregatorState::Initial(4);
  for (int h = 0; h < 2; ++h) {
    std::vector<Distribution> rows;
    for (int t = 0; t < 4; ++t) {
      rows.push_back(members[t].players[0].markov()->RowVector(h, history[h].state));
    }
    s = UpdateFromRows(s, rows, history[h].action);
  }
  std::vector<Distribution> rows;
  for (int t = 0; t < 4; ++t) rows.push_back(members[t].players[0].markov()->RowVector(2, 1));
  CHECK(ComputeQhat(c, 0, history, 1) == PredictFromRows(s, rows));
}

TEST_CASE("Algorithm 1 on stage-Nash and adversarial certificates") {
  NormalFormGame mp = Pennies();
  ConstructedGame built = Construct(mp, ConstructionKind::kRepeated, 0.1);
  Algorithm1Result ok = Algorithm1Extract(mp, built.game, StageNashCertificate(built, 0.0), 0.0);
  CHECK(ok.found);
  CHECK(ok.member == 0);
  CHECK(ok.step == 0);
  CHECK(ok.gap == 0.0);
  Algorithm1Result bad =
      Algorithm1Extract(mp, built.game, AdversarialNeverNashSequence(built, 4), 0.2);
  CHECK_FALSE(bad.found);
  CHECK(bad.scanned == 4);
}

TEST_CASE("repeated deviation with one member best-responds") {
  NormalFormGame mp = Pennies();
  MarkovGame g = BuildRepeatedMg(mp, 4);
  MarkovPolicy mostly_heads = MarkovPolicy::Constant(4, g.num_states(), {0.75, 0.25});
  SparseCceCertificate c =
      FromProducts({MarkovProduct({MarkovPolicy(4, g.num_states(), 2), mostly_heads})});
  PolicyProgram dev = BuildDeviationPolicyRepeated(g, c, 0);
  // Player 0 wants to match; player 1 mostly plays 0.
  CHECK(dev.Evaluate({}, 0) == PointMass(2, 0));
  // Player 1 faces a uniform player 0: a tie, broken toward action 0.
  PolicyProgram dev1 = BuildDeviationPolicyRepeated(g, c, 1);
  CHECK(dev1.Evaluate({}, 0) == PointMass(2, 0));
  CHECK(dev.Evaluate({{0, 0, Rational(0)}}, 3) == PointMass(2, 0));
}

TEST_CASE("repeated deviation posterior concentrates after one observation") {
  NormalFormGame mp = Pennies();
  MarkovGame g = BuildRepeatedMg(mp, 4);
  int S = g.num_states();
  MarkovPolicy heads = MarkovPolicy::Constant(4, S, {1.0, 0.0});
  MarkovPolicy tails = MarkovPolicy::Constant(4, S, {0.0, 1.0});
  SparseCceCertificate c = FromProducts(
      {MarkovProduct({heads, heads}), MarkovProduct({heads, tails})});
  PolicyProgram dev = BuildDeviationPolicyRepeated(g, c, 0);
  // Before observing, q-hat for player 1 is uniform: tie goes to action 0.
  CHECK(dev.Evaluate({}, 0) == PointMass(2, 0));
  // Player 1 was seen playing 1 (state 1 + 0*2 + 1), so member 2 is the truth.
  OwnHistory h = {{0, 0, Rational(1, 4)}, {RepeatedState(2, 0, 1), 0, Rational(0)}};
  CHECK(dev.Evaluate(h, 0) == PointMass(2, 1));
}

TEST_CASE("Algorithm 2 is seed-deterministic and its ledger balances") {
  NormalFormGame mp = Pennies();
  ConstructedGame built = Construct(mp, ConstructionKind::kKibitzer, 0.1);
  const KibitzerGameSpec& spec = *built.kibitzer;
  SparseCceCertificate c = HedgeSelfplayCertificate(built, 3);
  Algorithm2Options opts;
  opts.stop_on_pass = false;
  PayoffOracle o1(spec.source), o2(spec.source);
  Algorithm2Result a = Algorithm2Extract(spec, o1, c, 77, opts);
  Algorithm2Result b = Algorithm2Extract(spec, o2, c, 77, opts);
  CHECK(TranscriptJson(a) == TranscriptJson(b));
  CHECK(a.samples == 2470);
  CHECK(a.queries.Balanced());
  CHECK(a.queries.Get("reward_realization") == 2 * 3 * spec.horizon);
  CHECK(a.queries.total == o1.query_count());
  QueryLedger all = QueryAccounting({a, b}, 5, 5 + o1.query_count() + o2.query_count());
  CHECK(all.Balanced());
  CHECK(all.Get("producer") == 5);
}

TEST_CASE("Algorithm 2 returns the stage Nash at the first step") {
  NormalFormGame mp = Pennies();
  ConstructedGame built = Construct(mp, ConstructionKind::kKibitzer, 0.1);
  SparseCceCertificate c = StageNashCertificate(built, 0.0);
  PayoffOracle oracle(built.kibitzer->source);
  Algorithm2Result r = Algorithm2Extract(*built.kibitzer, oracle, c, 3);
  REQUIRE(r.success);
  CHECK(r.success_step == 0);
  CHECK(MaxNashGap(mp, r.profile) <= 1e-12);
  CHECK(r.transcript.size() == 1);
}

TEST_CASE("kibitzer deviations for players read their own rewards") {
  NormalFormGame mp = Pennies();
  ConstructedGame built = Construct(mp, ConstructionKind::kKibitzer, 0.1);
  const KibitzerGameSpec& spec = *built.kibitzer;
  int S = 1;
  MarkovPolicy heads = MarkovPolicy::Constant(2, S, {1.0, 0.0});
  MarkovPolicy lean = MarkovPolicy::Constant(2, S, {0.75, 0.25});
  MarkovPolicy kib = MarkovPolicy(2, S, 4);
  SparseCceCertificate one = FromProducts({MarkovProduct({lean, heads, kib})});
  PolicyProgram br0 = BuildKibitzerDeviation(spec, one, 0, 0);
  // Player 0 matches; player 1 plays heads.
  CHECK(br0.Evaluate({}, 0) == PointMass(2, 0));
  PolicyProgram br1 = BuildKibitzerDeviation(spec, one, 1, 0);
  CHECK(br1.Evaluate({}, 0) == PointMass(2, 1));
  std::vector<JointAction> profiles = {{1, 0, 2}};
  OwnHistory h0 = ReconstructHistory(spec, profiles, 0);
  CHECK(RecoverProfiles(spec, h0) == profiles);
  CHECK_THROWS(RecoverProfiles(spec, {{0, 0, Rational(1, 3)}}));
}

TEST_CASE("Algorithm 2 episode law equals the deviation sampler") {
  NormalFormGame mp = Pennies();
  ConstructedGame built = Construct(mp, ConstructionKind::kKibitzer, 0.5);
  const KibitzerGameSpec& spec = *built.kibitzer;
  int S = 1;
  SparseCceCertificate c = FromProducts(
      {MarkovProduct({MarkovPolicy::Constant(2, S, {0.75, 0.25}),
                      MarkovPolicy::Constant(2, S, {0.5, 0.5}), MarkovPolicy(2, S, 4)}),
       MarkovProduct({MarkovPolicy::Constant(2, S, {0.25, 0.75}),
                      MarkovPolicy::Constant(2, S, {1.0, 0.0}), MarkovPolicy(2, S, 4)})});
  CHECK(Algorithm2SampleCount(2, 2, 0.5, spec.horizon) == 74);
  Algorithm2Options opts;
  opts.stop_on_pass = false;
  DistributionalPolicy dev =
      WithDeviation(c.Mixture(), 2, BuildKibitzerDeviation(spec, c, 2, 0));
  const int n = 100000;
  std::map<Trajectory, double> alg, direct;
  PayoffOracle oracle(spec.source);
  for (int e = 0; e < n; ++e) {
    alg[Algorithm2Extract(spec, oracle, c, DeriveSeed(1, e), opts).trajectory] += 1.0 / n;
    direct[SampleTrajectory(built.game, dev, DeriveSeed(2, e))] += 1.0 / n;
  }
  double tol = 4.0 / std::sqrt(static_cast<double>(n));
  for (const auto& [t, p] : alg) CHECK(std::abs(p - direct[t]) <= tol);
  for (const auto& [t, p] : direct) CHECK(std::abs(p - alg[t]) <= tol);
}

}  // namespace
}  // namespace ccelab
