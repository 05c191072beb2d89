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

#ifndef CCELAB_CONSTRUCTIONS_H_
#define CCELAB_CONSTRUCTIONS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccelab/games.h"

namespace ccelab {

// ---------------------------------------------------------------------------
// Two-player repeated game. State 0 is the hub s; state 1 + a1*n0 + a2 is
// s_(a1,a2). Steps h = 0, 2, 4, ... (the odd steps when counting from one)
// pay M_j / H and move to s_(a1,a2); the others pay 0 and return to s.

int RepeatedHorizon(int n0);
inline int RepeatedState(int n0, int a1, int a2) { return 1 + a1 * n0 + a2; }
inline bool IsStageStep(int h) { return h % 2 == 0; }

// horizon_override = 0 uses RepeatedHorizon(n0); otherwise it must be even.
MarkovGame BuildRepeatedMg(const NormalFormGame& game, int horizon_override = 0);

// ---------------------------------------------------------------------------
// (m+1)-player kibitzer game. Players 0..m-1 keep their n0 actions; player m
// (the kibitzer) picks k = j*n0 + a' meaning "player j should play a'".

struct KibitzerLayout {
  int num_players = 0;  // m, excluding the kibitzer
  int num_actions = 0;  // n0
  int player_bits = 0;
  int kibitzer_bits = 0;
  int total_bits() const { return num_players * player_bits + kibitzer_bits; }
};

struct KibitzerGameSpec {
  NormalFormGame source;  // payoffs after truncation
  double eps = 0.0;
  int horizon = 0;
  int eps_bits = 0;     // ceil(log2(1/eps))
  int payoff_bits = 0;  // max(n0, eps_bits)
  int offset_bits = 0;  // max(3 * eps_bits, payoff_bits)
  KibitzerLayout layout;

  int num_players() const { return layout.num_players; }
  int num_actions() const { return layout.num_actions; }
  int kibitzer_actions() const { return layout.num_players * layout.num_actions; }
};

int KibitzerHorizon(int n0);
KibitzerLayout MakeLayout(int m, int n0);

// Rounds each payoff toward zero to max(n0, ceil(log2 1/eps)) bits and maps
// 1 to 1 - 2^-bits. Every payoff moves by less than eps.
NormalFormGame TruncatePayoffs(const NormalFormGame& game, double eps);

KibitzerGameSpec MakeKibitzerSpec(const NormalFormGame& game, double eps);

// Big-endian action bits, players first, kibitzer last.
std::vector<int> ProfileBits(const KibitzerLayout& layout,
                             std::span<const int> full_profile);
// sum_i 2^-(i+1) b_i.
Rational EncodeBits(std::span<const int> bits);
Rational Enc(const KibitzerLayout& layout, std::span<const int> full_profile);
// Inverse of Enc; throws std::invalid_argument on values that are not codes.
JointAction DecodeEnc(const KibitzerLayout& layout, const Rational& code);

// (j, a') for kibitzer action k.
inline std::pair<int, int> KibitzerAdvice(int k, int n0) { return {k / n0, k % n0}; }

// The profile of the m players with the advised player's action replaced.
JointAction AdvisedProfile(std::span<const int> full_profile, int n0);

// The reward part without the encoding term, for all m+1 players.
std::vector<Rational> KibitzerBaseReward(const NormalFormGame& game, int horizon,
                                         std::span<const int> full_profile);

// Full rewards from the two payoff rows M[a] and M[advised a].
std::vector<Rational> KibitzerRewardsFromPayoffs(
    const KibitzerGameSpec& spec, std::span<const int> full_profile,
    std::span<const Rational> at_profile, std::span<const Rational> at_advised);
double KibitzerRewardValue(const KibitzerGameSpec& spec,
                           std::span<const int> full_profile, int player,
                           std::span<const double> at_profile,
                           std::span<const double> at_advised);
std::vector<Rational> KibitzerRewards(const KibitzerGameSpec& spec,
                                      std::span<const int> full_profile);

MarkovGame BuildKibitzerMg(const KibitzerGameSpec& spec);
MarkovGame BuildKibitzerMg(const NormalFormGame& game, double eps);

// Recovers the full joint profile from any player's realized reward.
JointAction DecodeProfileFromReward(const KibitzerGameSpec& spec,
                                    const Rational& reward);

// Generative access to the kibitzer game backed by payoff queries: each
// query makes at most two payoff-oracle calls.
class PayoffBackedKibitzerOracle : public GenerativeModel {
 public:
  PayoffBackedKibitzerOracle(const KibitzerGameSpec& spec, PayoffOracle& oracle)
      : spec_(&spec), oracle_(&oracle) {}

  GenerativeAnswer Query(int h, int s, std::span<const int> joint) override;
  int64_t query_count() const override { return query_count_; }
  int num_states() const override { return 1; }
  int horizon() const override { return spec_->horizon; }
  std::vector<int> action_counts() const override;

 private:
  const KibitzerGameSpec* spec_;
  PayoffOracle* oracle_;
  int64_t query_count_ = 0;
};

// ---------------------------------------------------------------------------
// Alternative construction: H = n0, one state per full profile (state index
// = flattened full profile), base rewards only. Starts in the state of the
// all-zero profile.

int64_t AlternativeStateCount(int m, int n0);
MarkovGame BuildAlternativeMg(const NormalFormGame& game, double eps,
                              int64_t state_budget = 200000);

}  // namespace ccelab

#endif  // CCELAB_CONSTRUCTIONS_H_
