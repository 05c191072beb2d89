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

#include "ccelab/games.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ccelab {

namespace {

int64_t CheckedPower(int base, int exponent) {
  int64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (out > (int64_t{1} << 40) / std::max(base, 1)) {
      throw std::invalid_argument("joint action space too large");
    }
    out *= base;
  }
  return out;
}

std::string Where(int player, int64_t profile) {
  std::ostringstream os;
  os << "player " << player << ", profile " << profile;
  return os.str();
}

}  // namespace

NormalFormGame::NormalFormGame(int num_players, int num_actions,
                               std::vector<std::vector<Rational>> payoffs,
                               int bit_budget)
    : num_players_(num_players),
      num_actions_(num_actions),
      bit_budget_(bit_budget) {
  if (num_players < 1 || num_actions < 1) {
    throw std::invalid_argument("need at least one player and one action");
  }
  num_profiles_ = CheckedPower(num_actions, num_players);
  if (static_cast<int>(payoffs.size()) != num_players) {
    throw std::invalid_argument("one payoff tensor per player required");
  }
  payoffs_.resize(num_profiles_ * num_players);
  values_.resize(payoffs_.size());
  for (int i = 0; i < num_players; ++i) {
    if (static_cast<int64_t>(payoffs[i].size()) != num_profiles_) {
      throw std::invalid_argument("payoff tensor shapes differ");
    }
    for (int64_t p = 0; p < num_profiles_; ++p) {
      payoffs_[p * num_players + i] = payoffs[i][p];
      values_[p * num_players + i] = ToDouble(payoffs[i][p]);
    }
  }
}

int64_t NormalFormGame::ProfileIndex(std::span<const int> profile) const {
  if (static_cast<int>(profile.size()) != num_players_) {
    throw std::out_of_range("profile has wrong number of players");
  }
  int64_t index = 0;
  for (int a : profile) {
    if (a < 0 || a >= num_actions_) throw std::out_of_range("action index");
    index = index * num_actions_ + a;
  }
  return index;
}

JointAction NormalFormGame::ProfileFromIndex(int64_t index) const {
  if (index < 0 || index >= num_profiles_) throw std::out_of_range("profile");
  JointAction out(num_players_);
  for (int i = num_players_ - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % num_actions_);
    index /= num_actions_;
  }
  return out;
}

ValidationReport ValidateNormalForm(const NormalFormGame& game) {
  ValidationReport report;
  if (game.num_players() < 2) report.Fail("fewer than two players");
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    for (int i = 0; i < game.num_players(); ++i) {
      const Rational& x = game.Payoff(i, p);
      if (x < 0 || x > 1) {
        report.Fail("payoff out of [0,1] at " + Where(i, p));
      }
      if (!IsDyadic(x) || BitLength(x) > game.bit_budget()) {
        report.Fail("not dyadic within budget at " + Where(i, p));
      }
    }
  }
  return report;
}

MarkovGame::MarkovGame(int num_states, int horizon,
                       std::vector<int> action_counts)
    : num_states_(num_states),
      horizon_(horizon),
      action_counts_(std::move(action_counts)) {
  if (num_states < 1 || horizon < 1 || action_counts_.empty()) {
    throw std::invalid_argument("empty Markov game");
  }
  num_joint_ = 1;
  for (int a : action_counts_) {
    if (a < 1) throw std::invalid_argument("action count must be positive");
    num_joint_ *= a;
    if (num_joint_ > (int64_t{1} << 32)) {
      throw std::invalid_argument("joint action space too large");
    }
  }
  size_t cells = static_cast<size_t>(horizon) * num_states * num_joint_;
  transitions_.resize(cells);
  transition_values_.resize(cells);
  rewards_.resize(cells * num_players());
  reward_values_.resize(cells * num_players(), 0.0);
}

int64_t MarkovGame::JointIndex(std::span<const int> joint) const {
  if (joint.size() != action_counts_.size()) {
    throw std::out_of_range("joint action has wrong number of players");
  }
  int64_t index = 0;
  for (size_t i = 0; i < joint.size(); ++i) {
    if (joint[i] < 0 || joint[i] >= action_counts_[i]) {
      throw std::out_of_range("action index");
    }
    index = index * action_counts_[i] + joint[i];
  }
  return index;
}

JointAction MarkovGame::JointFromIndex(int64_t index) const {
  if (index < 0 || index >= num_joint_) throw std::out_of_range("joint index");
  JointAction out(action_counts_.size());
  for (int i = num_players() - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % action_counts_[i]);
    index /= action_counts_[i];
  }
  return out;
}

void MarkovGame::SetInitial(std::vector<StateProb> dist) {
  initial_values_.clear();
  for (const StateProb& sp : dist) {
    if (sp.state < 0 || sp.state >= num_states_) throw std::out_of_range("state");
    initial_values_.push_back(ToDouble(sp.prob));
  }
  initial_ = std::move(dist);
}

void MarkovGame::SetTransition(int h, int s, int64_t joint,
                               std::vector<StateProb> dist) {
  if (h < 0 || h >= horizon_ || s < 0 || s >= num_states_ || joint < 0 ||
      joint >= num_joint_) {
    throw std::out_of_range("transition index");
  }
  std::vector<double> values;
  for (const StateProb& sp : dist) {
    if (sp.state < 0 || sp.state >= num_states_) throw std::out_of_range("state");
    values.push_back(ToDouble(sp.prob));
  }
  transitions_[Cell(h, s, joint)] = std::move(dist);
  transition_values_[Cell(h, s, joint)] = std::move(values);
}

void MarkovGame::SetReward(int h, int s, int64_t joint, int player,
                           Rational value) {
  if (h < 0 || h >= horizon_ || s < 0 || s >= num_states_ || joint < 0 ||
      joint >= num_joint_ || player < 0 || player >= num_players()) {
    throw std::out_of_range("reward index");
  }
  size_t k = Cell(h, s, joint) * num_players() + player;
  reward_values_[k] = ToDouble(value);
  rewards_[k] = std::move(value);
}

bool MarkovGame::operator==(const MarkovGame& other) const {
  return num_states_ == other.num_states_ && horizon_ == other.horizon_ &&
         action_counts_ == other.action_counts_ &&
         initial_ == other.initial_ && transitions_ == other.transitions_ &&
         rewards_ == other.rewards_;
}

ValidationReport ValidateMarkovGame(const MarkovGame& game) {
  ValidationReport report;
  auto check_dist = [&](const std::vector<StateProb>& dist,
                        const std::string& where) {
    Rational total = 0;
    for (const StateProb& sp : dist) {
      if (sp.prob < 0) report.Fail("negative probability at " + where);
      total += sp.prob;
    }
    if (total != 1) report.Fail("distribution does not sum to 1 at " + where);
  };
  check_dist(game.initial(), "initial distribution");
  Rational bound(1, game.horizon());
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      for (int64_t j = 0; j < game.num_joint_actions(); ++j) {
        std::ostringstream where;
        where << "h=" << h << " s=" << s << " joint=" << j;
        check_dist(game.Transition(h, s, j), where.str());
        for (int i = 0; i < game.num_players(); ++i) {
          const Rational& r = game.Reward(h, s, j, i);
          if (r > bound || r < -bound) {
            report.Fail("reward out of [-1/H,1/H] at " + where.str());
          }
        }
      }
    }
  }
  return report;
}

int MaxEntryBits(const MarkovGame& game) {
  int beta = 1;
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      for (int64_t j = 0; j < game.num_joint_actions(); ++j) {
        for (const StateProb& sp : game.Transition(h, s, j)) {
          beta = std::max(beta, BitLength(sp.prob));
        }
        for (int i = 0; i < game.num_players(); ++i) {
          beta = std::max(beta, BitLength(game.Reward(h, s, j, i)));
        }
      }
    }
  }
  return beta;
}

int GameSize(const MarkovGame& game) {
  int size = std::max(game.num_states(), game.horizon());
  for (int a : game.action_counts()) size = std::max(size, a);
  return std::max(size, MaxEntryBits(game));
}

std::span<const Rational> PayoffOracle::Query(std::span<const int> profile) {
  int64_t index = game_->ProfileIndex(profile);
  ++query_count_;
  return game_->PayoffRow(index);
}

std::span<const double> PayoffOracle::QueryValues(
    std::span<const int> profile) {
  int64_t index = game_->ProfileIndex(profile);
  ++query_count_;
  return game_->PayoffValueRow(index);
}

GenerativeAnswer GenerativeModelOracle::Query(int h, int s,
                                              std::span<const int> joint) {
  if (h < 0 || h >= game_->horizon() || s < 0 || s >= game_->num_states()) {
    throw std::out_of_range("generative query index");
  }
  int64_t j = game_->JointIndex(joint);
  ++query_count_;
  GenerativeAnswer answer;
  answer.next_states = game_->Transition(h, s, j);
  for (int i = 0; i < game_->num_players(); ++i) {
    answer.rewards.push_back(game_->Reward(h, s, j, i));
  }
  return answer;
}

}  // namespace ccelab
