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

#include "ccelab/game_io.h"
#include "ccelab/games.h"
#include "test_util.h"

namespace ccelab {
namespace {

NormalFormGame TwoByTwo(Rational corner) {
  std::vector<std::vector<Rational>> u = {
      {Rational(1), Rational(0), Rational(0), corner},
      {Rational(0), Rational(1), Rational(1), Rational(0)}};
  return NormalFormGame(2, 2, u, 4);
}

TEST_CASE("profile indexing is row-major with player 0 first") {
  Rng rng(3);
  NormalFormGame g = testing::RandomNormalForm(rng, 3, 2, 2);
  CHECK(g.num_profiles() == 8);
  CHECK(g.ProfileIndex(JointAction{1, 0, 1}) == 5);
  CHECK(g.ProfileFromIndex(6) == JointAction{1, 1, 0});
  for (int64_t p = 0; p < 8; ++p) CHECK(g.ProfileIndex(g.ProfileFromIndex(p)) == p);
}

TEST_CASE("normal-form validation flags range and dyadicity") {
  CHECK(ValidateNormalForm(TwoByTwo(Rational(1, 2))).valid);
  ValidationReport third = ValidateNormalForm(TwoByTwo(Rational(1, 3)));
  CHECK_FALSE(third.valid);
  CHECK(third.violations.front().find("not dyadic") != std::string::npos);
  ValidationReport big = ValidateNormalForm(TwoByTwo(Rational(3, 2)));
  CHECK_FALSE(big.valid);
  CHECK(big.violations.front().find("out of [0,1]") != std::string::npos);
  ValidationReport budget = ValidateNormalForm(TwoByTwo(Rational(1, 32)));
  CHECK_FALSE(budget.valid);
}

TEST_CASE("Markov game tables and validation") {
  MarkovGame g(2, 2, {2, 3});
  g.SetInitial({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 2; ++s) {
      for (int64_t j = 0; j < g.num_joint_actions(); ++j) {
        g.SetTransition(h, s, j, {{1 - s, Rational(1)}});
        g.SetReward(h, s, j, 0, Rational(1, 4));
        g.SetReward(h, s, j, 1, Rational(-1, 2));
      }
    }
  }
  CHECK(g.num_joint_actions() == 6);
  CHECK(g.JointIndex(JointAction{1, 2}) == 5);
  CHECK(g.RewardValue(1, 0, 3, 1) == -0.5);
  CHECK(ValidateMarkovGame(g).valid);
  CHECK(GameSize(g) == 3);
  CHECK(MaxEntryBits(g) == 2);
  g.SetReward(0, 0, 0, 0, Rational(3, 4));
  CHECK_FALSE(ValidateMarkovGame(g).valid);
  g.SetReward(0, 0, 0, 0, Rational(0));
  g.SetTransition(0, 0, 0, {{0, Rational(1, 2)}});
  CHECK_FALSE(ValidateMarkovGame(g).valid);
}

TEST_CASE("payoff oracle counts every query") {
  NormalFormGame g = TwoByTwo(Rational(1, 2));
  PayoffOracle oracle(g);
  JointAction a{1, 1};
  CHECK(oracle.Query(a)[0] == Rational(1, 2));
  CHECK(oracle.QueryValues(a)[1] == 0.0);
  CHECK(oracle.query_count() == 2);
}

TEST_CASE("generative wrapper answers from the table") {
  Rng rng(11);
  MarkovGame g = testing::RandomMarkovGame(rng, 2, 2, {2, 2});
  GenerativeModelOracle model(g);
  GenerativeAnswer ans = model.Query(1, 1, JointAction{0, 1});
  CHECK(ans.next_states == g.Transition(1, 1, 1));
  CHECK(ans.rewards[1] == g.Reward(1, 1, 1, 1));
  CHECK(model.query_count() == 1);
}

TEST_CASE("serialization round trips exactly") {
  Rng rng(5);
  NormalFormGame nf = TwoByTwo(Rational(1, 2));
  std::string text = SerializeGame(nf);
  CHECK(GameKind(text) == "normal-form");
  CHECK(DeserializeNormalFormGame(text) == nf);
  CHECK(SerializeGame(DeserializeNormalFormGame(text)) == text);
  MarkovGame mg = testing::RandomMarkovGame(rng, 3, 2, {2, 2});
  std::string mtext = SerializeGame(mg);
  CHECK(GameKind(mtext) == "markov");
  CHECK(DeserializeMarkovGame(mtext) == mg);
  NormalFormGame third = TwoByTwo(Rational(1, 3));
  CHECK(DeserializeNormalFormGame(SerializeGame(third)) == third);
  CHECK_THROWS(DeserializeMarkovGame("{\"format\":\"nope\"}"));
}

TEST_CASE("payoff CSV and content hash") {
  std::string csv = PayoffTableCsv(TwoByTwo(Rational(1, 2)));
  CHECK(csv.rfind("a1,a2,u1,u2\n", 0) == 0);
  CHECK(csv.find("2,2,1/2^1,0/2^0") != std::string::npos);
  // FNV-1a 64 reference values.
  CHECK(ContentHash("") == "cbf29ce484222325");
  CHECK(ContentHash("a") == "af63dc4c8601ec8c");
}

}  // namespace
}  // namespace ccelab
