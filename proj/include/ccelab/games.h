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

#ifndef CCELAB_GAMES_H_
#define CCELAB_GAMES_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccelab/rational.h"

namespace ccelab {

// Action indices are 0-based. Joint profiles are flattened row-major with
// player 0 as the most significant digit.
using JointAction = std::vector<int>;

inline constexpr double kFloatTolerance = 1e-12;

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;

  void Fail(std::string message) {
    valid = false;
    violations.push_back(std::move(message));
  }
};

class NormalFormGame {
 public:
  NormalFormGame() = default;
  // payoffs[i] is the tensor of player i, flattened row-major, size n^m.
  NormalFormGame(int num_players, int num_actions,
                 std::vector<std::vector<Rational>> payoffs, int bit_budget);

  int num_players() const { return num_players_; }
  int num_actions() const { return num_actions_; }
  int bit_budget() const { return bit_budget_; }
  int64_t num_profiles() const { return num_profiles_; }

  int64_t ProfileIndex(std::span<const int> profile) const;
  JointAction ProfileFromIndex(int64_t index) const;

  const Rational& Payoff(int player, int64_t profile) const {
    return payoffs_[profile * num_players_ + player];
  }
  double PayoffValue(int player, int64_t profile) const {
    return values_[profile * num_players_ + player];
  }
  std::span<const Rational> PayoffRow(int64_t profile) const {
    return {payoffs_.data() + profile * num_players_,
            static_cast<size_t>(num_players_)};
  }
  std::span<const double> PayoffValueRow(int64_t profile) const {
    return {values_.data() + profile * num_players_,
            static_cast<size_t>(num_players_)};
  }

  bool operator==(const NormalFormGame& other) const {
    return num_players_ == other.num_players_ &&
           num_actions_ == other.num_actions_ &&
           bit_budget_ == other.bit_budget_ && payoffs_ == other.payoffs_;
  }

 private:
  int num_players_ = 0;
  int num_actions_ = 0;
  int bit_budget_ = 0;
  int64_t num_profiles_ = 0;
  std::vector<Rational> payoffs_;
  std::vector<double> values_;
};

ValidationReport ValidateNormalForm(const NormalFormGame& game);

struct StateProb {
  int state;
  Rational prob;
  bool operator==(const StateProb& o) const {
    return state == o.state && prob == o.prob;
  }
};

// Finite-horizon tabular game. Steps are indexed h = 0..H-1.
class MarkovGame {
 public:
  MarkovGame() = default;
  MarkovGame(int num_states, int horizon, std::vector<int> action_counts);

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int num_states() const { return num_states_; }
  int horizon() const { return horizon_; }
  const std::vector<int>& action_counts() const { return action_counts_; }
  int num_actions(int player) const { return action_counts_[player]; }
  int64_t num_joint_actions() const { return num_joint_; }

  int64_t JointIndex(std::span<const int> joint) const;
  JointAction JointFromIndex(int64_t index) const;

  void SetInitial(std::vector<StateProb> dist);
  void SetTransition(int h, int s, int64_t joint, std::vector<StateProb> dist);
  void SetReward(int h, int s, int64_t joint, int player, Rational value);

  const std::vector<StateProb>& initial() const { return initial_; }
  const std::vector<double>& initial_values() const { return initial_values_; }
  const std::vector<StateProb>& Transition(int h, int s, int64_t joint) const {
    return transitions_[Cell(h, s, joint)];
  }
  // Probabilities of Transition(h, s, joint) as doubles, same order.
  const std::vector<double>& TransitionValues(int h, int s, int64_t joint) const {
    return transition_values_[Cell(h, s, joint)];
  }
  const Rational& Reward(int h, int s, int64_t joint, int player) const {
    return rewards_[Cell(h, s, joint) * num_players() + player];
  }
  double RewardValue(int h, int s, int64_t joint, int player) const {
    return reward_values_[Cell(h, s, joint) * num_players() + player];
  }

  bool operator==(const MarkovGame& other) const;

 private:
  size_t Cell(int h, int s, int64_t joint) const {
    return (static_cast<size_t>(h) * num_states_ + s) * num_joint_ + joint;
  }

  int num_states_ = 0;
  int horizon_ = 0;
  std::vector<int> action_counts_;
  int64_t num_joint_ = 0;
  std::vector<StateProb> initial_;
  std::vector<double> initial_values_;
  std::vector<std::vector<StateProb>> transitions_;
  std::vector<std::vector<double>> transition_values_;
  std::vector<Rational> rewards_;
  std::vector<double> reward_values_;
};

ValidationReport ValidateMarkovGame(const MarkovGame& game);

// Largest bit length of any single reward or transition probability.
int MaxEntryBits(const MarkovGame& game);

// max{S, max_i A_i, H, beta}.
int GameSize(const MarkovGame& game);

class PayoffOracle {
 public:
  explicit PayoffOracle(const NormalFormGame& game) : game_(&game) {}

  std::span<const Rational> Query(std::span<const int> profile);
  // Same query, floating-point view of the payoffs. Counts as a query.
  std::span<const double> QueryValues(std::span<const int> profile);

  int64_t query_count() const { return query_count_; }
  const NormalFormGame& game() const { return *game_; }

 private:
  const NormalFormGame* game_;
  int64_t query_count_ = 0;
};

struct GenerativeAnswer {
  std::vector<StateProb> next_states;
  std::vector<Rational> rewards;
};

// Query interface (h, s, joint action) -> exact dynamics. Implemented by the
// tabular wrapper below and by payoff-backed simulators of constructed games.
class GenerativeModel {
 public:
  virtual ~GenerativeModel() = default;
  virtual GenerativeAnswer Query(int h, int s, std::span<const int> joint) = 0;
  virtual int64_t query_count() const = 0;
  virtual int num_states() const = 0;
  virtual int horizon() const = 0;
  virtual std::vector<int> action_counts() const = 0;
};

class GenerativeModelOracle : public GenerativeModel {
 public:
  explicit GenerativeModelOracle(const MarkovGame& game) : game_(&game) {}

  GenerativeAnswer Query(int h, int s, std::span<const int> joint) override;
  int64_t query_count() const override { return query_count_; }
  int num_states() const override { return game_->num_states(); }
  int horizon() const override { return game_->horizon(); }
  std::vector<int> action_counts() const override {
    return game_->action_counts();
  }

 private:
  const MarkovGame* game_;
  int64_t query_count_ = 0;
};

}  // namespace ccelab

#endif  // CCELAB_GAMES_H_
