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

#include "ccelab/constructions.h"

#include <algorithm>
#include <stdexcept>

namespace ccelab {

namespace mp = boost::multiprecision;

namespace {

void RequireUnitPayoffs(const NormalFormGame& game) {
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    for (int i = 0; i < game.num_players(); ++i) {
      const Rational& x = game.Payoff(i, p);
      if (x < 0 || x > 1) throw std::invalid_argument("payoff outside [0,1]");
    }
  }
}

}  // namespace

int RepeatedHorizon(int n0) { return 2 * (n0 / 2); }

MarkovGame BuildRepeatedMg(const NormalFormGame& game, int horizon_override) {
  if (game.num_players() != 2) {
    throw std::invalid_argument("repeated construction needs exactly 2 players");
  }
  RequireUnitPayoffs(game);
  int n0 = game.num_actions();
  int H = horizon_override > 0 ? horizon_override : RepeatedHorizon(n0);
  if (H < 2 || H % 2 != 0) {
    throw std::invalid_argument("repeated construction needs an even horizon >= 2");
  }
  MarkovGame mg(n0 * n0 + 1, H, {n0, n0});
  mg.SetInitial({{0, Rational(1)}});
  Rational scale(1, H);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < mg.num_states(); ++s) {
      for (int64_t j = 0; j < mg.num_joint_actions(); ++j) {
        JointAction a = mg.JointFromIndex(j);
        if (IsStageStep(h)) {
          mg.SetTransition(h, s, j, {{RepeatedState(n0, a[0], a[1]), Rational(1)}});
          int64_t p = game.ProfileIndex(a);
          for (int i = 0; i < 2; ++i) mg.SetReward(h, s, j, i, scale * game.Payoff(i, p));
        } else {
          mg.SetTransition(h, s, j, {{0, Rational(1)}});
          for (int i = 0; i < 2; ++i) mg.SetReward(h, s, j, i, Rational(0));
        }
      }
    }
  }
  return mg;
}

int KibitzerHorizon(int n0) {
  int H = 1;
  while (H < n0) H *= 2;
  return H;
}

KibitzerLayout MakeLayout(int m, int n0) {
  KibitzerLayout layout;
  layout.num_players = m;
  layout.num_actions = n0;
  layout.player_bits = CeilLog2(n0);
  layout.kibitzer_bits = CeilLog2(static_cast<long long>(m) * n0);
  return layout;
}

NormalFormGame TruncatePayoffs(const NormalFormGame& game, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2]");
  int bits = std::max(game.num_actions(), CeilLog2Inverse(eps));
  Rational top = 1 - Pow2(-bits);
  std::vector<std::vector<Rational>> payoffs(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    for (int64_t p = 0; p < game.num_profiles(); ++p) {
      Rational x = TruncateTowardZero(game.Payoff(i, p), bits);
      payoffs[i].push_back(x > top ? top : x);
    }
  }
  return NormalFormGame(game.num_players(), game.num_actions(), std::move(payoffs),
                        bits);
}

KibitzerGameSpec MakeKibitzerSpec(const NormalFormGame& game, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2]");
  RequireUnitPayoffs(game);
  KibitzerGameSpec spec;
  spec.source = TruncatePayoffs(game, eps);
  spec.eps = eps;
  spec.horizon = KibitzerHorizon(game.num_actions());
  spec.eps_bits = CeilLog2Inverse(eps);
  spec.payoff_bits = std::max(game.num_actions(), spec.eps_bits);
  spec.offset_bits = std::max(3 * spec.eps_bits, spec.payoff_bits);
  spec.layout = MakeLayout(game.num_players(), game.num_actions());
  return spec;
}

std::vector<int> ProfileBits(const KibitzerLayout& layout,
                             std::span<const int> full_profile) {
  if (static_cast<int>(full_profile.size()) != layout.num_players + 1) {
    throw std::invalid_argument("full profile needs m + 1 entries");
  }
  std::vector<int> bits;
  auto push = [&](int value, int width) {
    for (int b = width - 1; b >= 0; --b) bits.push_back((value >> b) & 1);
  };
  for (int i = 0; i < layout.num_players; ++i) {
    if (full_profile[i] < 0 || full_profile[i] >= layout.num_actions) {
      throw std::out_of_range("player action");
    }
    push(full_profile[i], layout.player_bits);
  }
  int k = full_profile[layout.num_players];
  if (k < 0 || k >= layout.num_players * layout.num_actions) {
    throw std::out_of_range("kibitzer action");
  }
  push(k, layout.kibitzer_bits);
  return bits;
}

Rational EncodeBits(std::span<const int> bits) {
  BigInt numerator = 0;
  for (int b : bits) numerator = (numerator << 1) + (b ? 1 : 0);
  return Rational(numerator, BigInt(1) << static_cast<unsigned>(bits.size()));
}

Rational Enc(const KibitzerLayout& layout, std::span<const int> full_profile) {
  return EncodeBits(ProfileBits(layout, full_profile));
}

JointAction DecodeEnc(const KibitzerLayout& layout, const Rational& code) {
  int n = layout.total_bits();
  if (code < 0 || code >= 1) throw std::invalid_argument("code outside [0,1)");
  Rational scaled = code * Pow2(n);
  if (mp::denominator(scaled) != 1) throw std::invalid_argument("code has extra bits");
  BigInt v = mp::numerator(scaled);
  std::vector<int> bits(n);
  for (int b = n - 1; b >= 0; --b) {
    bits[b] = static_cast<int>(v & 1);
    v >>= 1;
  }
  JointAction out;
  size_t pos = 0;
  auto take = [&](int width) {
    int value = 0;
    for (int b = 0; b < width; ++b) value = (value << 1) | bits[pos++];
    return value;
  };
  for (int i = 0; i < layout.num_players; ++i) {
    int a = take(layout.player_bits);
    if (a >= layout.num_actions) throw std::invalid_argument("decoded action out of range");
    out.push_back(a);
  }
  int k = take(layout.kibitzer_bits);
  if (k >= layout.num_players * layout.num_actions) {
    throw std::invalid_argument("decoded kibitzer action out of range");
  }
  out.push_back(k);
  return out;
}

JointAction AdvisedProfile(std::span<const int> full_profile, int n0) {
  int m = static_cast<int>(full_profile.size()) - 1;
  JointAction a(full_profile.begin(), full_profile.begin() + m);
  auto [j, advice] = KibitzerAdvice(full_profile[m], n0);
  a.at(j) = advice;
  return a;
}

std::vector<Rational> KibitzerBaseReward(const NormalFormGame& game, int horizon,
                                         std::span<const int> full_profile) {
  int m = game.num_players();
  int n0 = game.num_actions();
  JointAction a(full_profile.begin(), full_profile.begin() + m);
  JointAction advised = AdvisedProfile(full_profile, n0);
  int j = KibitzerAdvice(full_profile[m], n0).first;
  std::vector<Rational> out(m + 1, Rational(0));
  Rational gain = (game.Payoff(j, game.ProfileIndex(a)) -
                   game.Payoff(j, game.ProfileIndex(advised))) /
                  horizon;
  out[j] = gain;
  out[m] = -gain;
  return out;
}

std::vector<Rational> KibitzerRewardsFromPayoffs(
    const KibitzerGameSpec& spec, std::span<const int> full_profile,
    std::span<const Rational> at_profile, std::span<const Rational> at_advised) {
  int m = spec.num_players();
  int j = KibitzerAdvice(full_profile[m], spec.num_actions()).first;
  Rational inv_h(1, spec.horizon);
  Rational tag = inv_h * Pow2(-spec.offset_bits) * Enc(spec.layout, full_profile);
  std::vector<Rational> out(m + 1, tag);
  Rational gain = (at_profile[j] - at_advised[j]) * inv_h;
  out[j] += gain;
  out[m] -= gain;
  return out;
}

double KibitzerRewardValue(const KibitzerGameSpec& spec,
                           std::span<const int> full_profile, int player,
                           std::span<const double> at_profile,
                           std::span<const double> at_advised) {
  int m = spec.num_players();
  const KibitzerLayout& layout = spec.layout;
  int j = KibitzerAdvice(full_profile[m], spec.num_actions()).first;
  uint64_t code = 0;
  for (int i = 0; i < m; ++i) code = (code << layout.player_bits) | full_profile[i];
  code = (code << layout.kibitzer_bits) | full_profile[m];
  double tag = std::ldexp(static_cast<double>(code),
                          -(spec.offset_bits + layout.total_bits())) /
               spec.horizon;
  double gain = (at_profile[j] - at_advised[j]) / spec.horizon;
  if (player == j) return tag + gain;
  if (player == m) return tag - gain;
  return tag;
}

std::vector<Rational> KibitzerRewards(const KibitzerGameSpec& spec,
                                      std::span<const int> full_profile) {
  const NormalFormGame& g = spec.source;
  int m = spec.num_players();
  JointAction a(full_profile.begin(), full_profile.begin() + m);
  JointAction advised = AdvisedProfile(full_profile, spec.num_actions());
  return KibitzerRewardsFromPayoffs(spec, full_profile, g.PayoffRow(g.ProfileIndex(a)),
                                    g.PayoffRow(g.ProfileIndex(advised)));
}

MarkovGame BuildKibitzerMg(const KibitzerGameSpec& spec) {
  int m = spec.num_players();
  std::vector<int> counts(m, spec.num_actions());
  counts.push_back(spec.kibitzer_actions());
  MarkovGame mg(1, spec.horizon, counts);
  mg.SetInitial({{0, Rational(1)}});
  for (int64_t j = 0; j < mg.num_joint_actions(); ++j) {
    std::vector<Rational> rewards = KibitzerRewards(spec, mg.JointFromIndex(j));
    for (int h = 0; h < spec.horizon; ++h) {
      mg.SetTransition(h, 0, j, {{0, Rational(1)}});
      for (int i = 0; i <= m; ++i) mg.SetReward(h, 0, j, i, rewards[i]);
    }
  }
  return mg;
}

MarkovGame BuildKibitzerMg(const NormalFormGame& game, double eps) {
  return BuildKibitzerMg(MakeKibitzerSpec(game, eps));
}

JointAction DecodeProfileFromReward(const KibitzerGameSpec& spec,
                                    const Rational& reward) {
  Rational x = reward * spec.horizon * Pow2(spec.offset_bits);
  BigInt num = mp::numerator(x);
  BigInt den = mp::denominator(x);
  BigInt floor = num / den;
  if (num < 0 && floor * den != num) floor -= 1;
  return DecodeEnc(spec.layout, x - Rational(floor));
}

GenerativeAnswer PayoffBackedKibitzerOracle::Query(int h, int s,
                                                   std::span<const int> joint) {
  if (h < 0 || h >= spec_->horizon || s != 0) {
    throw std::out_of_range("generative query index");
  }
  int m = spec_->num_players();
  ProfileBits(spec_->layout, joint);
  ++query_count_;
  JointAction a(joint.begin(), joint.begin() + m);
  JointAction advised = AdvisedProfile(joint, spec_->num_actions());
  std::span<const Rational> row = oracle_->Query(a);
  std::vector<Rational> at_profile(row.begin(), row.end());
  std::vector<Rational> at_advised = at_profile;
  if (advised != a) {
    row = oracle_->Query(advised);
    at_advised.assign(row.begin(), row.end());
  }
  GenerativeAnswer answer;
  answer.next_states = {{0, Rational(1)}};
  answer.rewards = KibitzerRewardsFromPayoffs(*spec_, joint, at_profile, at_advised);
  return answer;
}

std::vector<int> PayoffBackedKibitzerOracle::action_counts() const {
  std::vector<int> counts(spec_->num_players(), spec_->num_actions());
  counts.push_back(spec_->kibitzer_actions());
  return counts;
}

int64_t AlternativeStateCount(int m, int n0) {
  int64_t count = m;
  for (int i = 0; i <= m; ++i) count *= n0;
  return count;
}

MarkovGame BuildAlternativeMg(const NormalFormGame& game, double eps,
                              int64_t state_budget) {
  int m = game.num_players();
  int n0 = game.num_actions();
  int64_t S = AlternativeStateCount(m, n0);
  if (S > state_budget) throw std::invalid_argument("state budget exceeded");
  NormalFormGame g = TruncatePayoffs(game, eps);
  std::vector<int> counts(m, n0);
  counts.push_back(m * n0);
  MarkovGame mg(static_cast<int>(S), n0, counts);
  mg.SetInitial({{0, Rational(1)}});
  for (int64_t j = 0; j < mg.num_joint_actions(); ++j) {
    std::vector<Rational> rewards = KibitzerBaseReward(g, n0, mg.JointFromIndex(j));
    for (int h = 0; h < n0; ++h) {
      for (int s = 0; s < S; ++s) {
        mg.SetTransition(h, s, j, {{static_cast<int>(j), Rational(1)}});
        for (int i = 0; i <= m; ++i) mg.SetReward(h, s, j, i, rewards[i]);
      }
    }
  }
  return mg;
}

}  // namespace ccelab
