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
#include "test_util.h"

namespace ccelab {
namespace {

NormalFormGame Pennies() { return LoadFixture("matching-pennies").game; }

TEST_CASE("repeated construction shape") {
  Rng rng(1);
  MarkovGame g4 = BuildRepeatedMg(testing::RandomNormalForm(rng, 2, 4, 4));
  CHECK(g4.horizon() == 4);
  CHECK(g4.num_states() == 17);
  CHECK(g4.num_actions(0) == 4);
  CHECK(BuildRepeatedMg(testing::RandomNormalForm(rng, 2, 5, 5)).horizon() == 4);
  CHECK(BuildRepeatedMg(Pennies(), 16).horizon() == 16);
  CHECK_THROWS(BuildRepeatedMg(Pennies(), 3));
  CHECK_THROWS(BuildRepeatedMg(testing::RandomNormalForm(rng, 3, 2, 2)));
}

TEST_CASE("repeated construction rewards and transitions") {
  Rng rng(2);
  NormalFormGame nf = testing::RandomNormalForm(rng, 2, 4, 4);
  MarkovGame g = BuildRepeatedMg(nf);
  CHECK(ValidateMarkovGame(g).valid);
  for (int h = 0; h < g.horizon(); ++h) {
    for (int s = 0; s < g.num_states(); ++s) {
      for (int64_t j = 0; j < g.num_joint_actions(); ++j) {
        JointAction a = g.JointFromIndex(j);
        int next = g.Transition(h, s, j).front().state;
        for (int i = 0; i < 2; ++i) {
          if (h % 2 == 1) {
            CHECK(g.Reward(h, s, j, i) == 0);
          } else {
            CHECK(g.Reward(h, s, j, i) == nf.Payoff(i, nf.ProfileIndex(a)) / 4);
          }
        }
        CHECK(next == (h % 2 == 0 ? 1 + a[0] * 4 + a[1] : 0));
      }
    }
  }
}

TEST_CASE("encoding of bit strings and profiles") {
  std::vector<int> bits = {1, 0, 1};
  CHECK(EncodeBits(bits) == Rational(5, 8));
  CHECK(EncodeBits(std::vector<int>{0, 0, 0}) == 0);
  KibitzerLayout layout = MakeLayout(2, 2);
  CHECK(layout.player_bits == 1);
  CHECK(layout.kibitzer_bits == 2);
  CHECK(Enc(layout, JointAction{1, 0, 3}) == Rational(0b1011, 16));
  int count = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int k = 0; k < 4; ++k) {
        JointAction full{a, b, k};
        CHECK(DecodeEnc(layout, Enc(layout, full)) == full);
        ++count;
      }
    }
  }
  CHECK(count == 16);
  KibitzerLayout three = MakeLayout(2, 3);
  CHECK_THROWS(DecodeEnc(three, Rational(3, 4)));  // action code 3 >= n0
  CHECK_THROWS(DecodeEnc(layout, Rational(1, 64)));
}

TEST_CASE("kibitzer base reward examples") {
  NormalFormGame mp = Pennies();
  // a = (1, 2), advice "player 1 plays 2" in one-based terms.
  std::vector<Rational> r = KibitzerBaseReward(mp, 2, JointAction{0, 1, 1});
  CHECK(r[0] == Rational(-1, 2));
  CHECK(r[1] == 0);
  CHECK(r[2] == Rational(1, 2));
  Rng rng(3);
  NormalFormGame g = testing::RandomNormalForm(rng, 2, 3, 4);
  for (int64_t p = 0; p < g.num_profiles(); ++p) {
    JointAction a = g.ProfileFromIndex(p);
    for (int k = 0; k < 6; ++k) {
      JointAction full{a[0], a[1], k};
      std::vector<Rational> base = KibitzerBaseReward(g, 4, full);
      auto [j, advice] = KibitzerAdvice(k, 3);
      CHECK(base[j] + base[2] == 0);
      CHECK(base[1 - j] == 0);
      if (advice == a[j]) CHECK(base[j] == 0);
    }
  }
}

TEST_CASE("truncation moves payoffs by less than eps") {
  Rng rng(4);
  NormalFormGame g = testing::RandomNormalForm(rng, 2, 2, 10);
  for (double eps : {0.5, 0.1, 0.01}) {
    NormalFormGame t = TruncatePayoffs(g, eps);
    int bits = std::max(2, CeilLog2Inverse(eps));
    CHECK(t.bit_budget() == bits);
    CHECK(ValidateNormalForm(t).valid);
    for (int64_t p = 0; p < g.num_profiles(); ++p) {
      for (int i = 0; i < 2; ++i) {
        Rational diff = g.Payoff(i, p) - t.Payoff(i, p);
        CHECK(diff >= 0);
        CHECK(ToDouble(diff) < eps);
        CHECK(t.Payoff(i, p) < 1);
      }
    }
  }
}

TEST_CASE("kibitzer game shape, ranges and decoding") {
  KibitzerGameSpec spec = MakeKibitzerSpec(Pennies(), 0.1);
  CHECK(spec.horizon == 2);
  CHECK(spec.kibitzer_actions() == 4);
  CHECK(spec.offset_bits == 12);
  MarkovGame g = BuildKibitzerMg(spec);
  CHECK(g.num_states() == 1);
  CHECK(g.num_players() == 3);
  CHECK(ValidateMarkovGame(g).valid);
  double eps = 0.1;
  for (int64_t j = 0; j < g.num_joint_actions(); ++j) {
    JointAction full = g.JointFromIndex(j);
    Rational sum = 0;
    for (int i = 0; i < 3; ++i) {
      const Rational& r = g.Reward(0, 0, j, i);
      CHECK(r >= Rational(-1, 2));
      CHECK(r <= Rational(1, 2));
      CHECK(DecodeProfileFromReward(spec, r) == full);
      sum += r;
    }
    CHECK(std::abs(ToDouble(sum)) <= 3 * eps * eps / 2);
  }
  CHECK_THROWS(MakeKibitzerSpec(Pennies(), 0.6));
}

TEST_CASE("payoff-backed generative oracle") {
  KibitzerGameSpec spec = MakeKibitzerSpec(Pennies(), 0.1);
  MarkovGame g = BuildKibitzerMg(spec);
  PayoffOracle payoffs(spec.source);
  PayoffBackedKibitzerOracle model(spec, payoffs);
  for (int64_t j = 0; j < g.num_joint_actions(); ++j) {
    JointAction full = g.JointFromIndex(j);
    int64_t before = payoffs.query_count();
    GenerativeAnswer ans = model.Query(1, 0, full);
    int64_t used = payoffs.query_count() - before;
    auto [who, advice] = KibitzerAdvice(full[2], 2);
    CHECK(used == (advice == full[who] ? 1 : 2));
    for (int i = 0; i < 3; ++i) CHECK(ans.rewards[i] == g.Reward(1, 0, j, i));
  }
  CHECK(model.query_count() == g.num_joint_actions());
}

TEST_CASE("alternative construction") {
  NormalFormGame mp = Pennies();
  CHECK(AlternativeStateCount(2, 2) == 16);
  MarkovGame g = BuildAlternativeMg(mp, 0.25);
  CHECK(g.num_states() == 16);
  CHECK(g.horizon() == 2);
  CHECK(ValidateMarkovGame(g).valid);
  NormalFormGame t = TruncatePayoffs(mp, 0.25);
  for (int64_t j = 0; j < g.num_joint_actions(); ++j) {
    for (int s = 0; s < 16; ++s) {
      CHECK(g.Transition(0, s, j).front().state == j);
      for (int i = 0; i < 3; ++i) {
        CHECK(BitLength(g.Reward(1, s, j, i)) <= t.bit_budget() + 1);
      }
    }
  }
  CHECK_THROWS(BuildAlternativeMg(mp, 0.25, 8));
}

TEST_CASE("kibitzer non-negativity on random product distributions") {
  Rng rng(5);
  KibitzerGameSpec spec = MakeKibitzerSpec(testing::RandomNormalForm(rng, 2, 3, 6), 0.1);
  MarkovGame g = BuildKibitzerMg(spec);
  for (int trial = 0; trial < 50; ++trial) {
    Distribution q0 = testing::RandomDyadicRow(rng, 3);
    Distribution q1 = testing::RandomDyadicRow(rng, 3);
    double best = -1.0;
    for (int k = 0; k < 6; ++k) {
      double v = 0.0;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          v += q0[a] * q1[b] * g.RewardValue(0, 0, g.JointIndex(JointAction{a, b, k}), 2);
        }
      }
      best = std::max(best, v);
    }
    CHECK(best >= -1e-12);
  }
}

}  // namespace
}  // namespace ccelab
