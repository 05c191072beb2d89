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

#include "ccelab/policies.h"

#include <cmath>
#include <sstream>

namespace ccelab {

std::string HistoryKey(const OwnHistory& history, int state) {
  std::string key;
  for (const OwnStep& step : history) {
    key += std::to_string(step.state);
    key += '.';
    key += std::to_string(step.action);
    key += '.';
    key += ToString(step.reward);
    key += ';';
  }
  key += '|';
  key += std::to_string(state);
  return key;
}

Distribution PointMass(int num_actions, int action) {
  Distribution d(num_actions, 0.0);
  d.at(action) = 1.0;
  return d;
}

Distribution UniformDistribution(int num_actions) {
  return Distribution(num_actions, 1.0 / num_actions);
}

bool IsDistribution(const Distribution& d, double tol) {
  double total = 0.0;
  for (double p : d) {
    if (!(p >= 0.0)) return false;
    total += p;
  }
  return std::abs(total - 1.0) <= tol;
}

MarkovPolicy::MarkovPolicy(int horizon, int num_states, int num_actions)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      probs_(static_cast<size_t>(horizon) * num_states * num_actions,
             1.0 / num_actions) {}

MarkovPolicy MarkovPolicy::Constant(int horizon, int num_states,
                                    const Distribution& row) {
  MarkovPolicy p(horizon, num_states, static_cast<int>(row.size()));
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) p.SetRow(h, s, row);
  }
  return p;
}

void MarkovPolicy::SetRow(int h, int s, const Distribution& row) {
  if (static_cast<int>(row.size()) != num_actions_ || !IsDistribution(row)) {
    throw std::invalid_argument("Markov policy row is not a distribution");
  }
  if (h < 0 || h >= horizon_ || s < 0 || s >= num_states_) {
    throw std::out_of_range("Markov policy row index");
  }
  std::copy(row.begin(), row.end(),
            probs_.begin() + (static_cast<size_t>(h) * num_states_ + s) * num_actions_);
}

std::string PolicyKindName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kMarkov:
      return "markov";
    case PolicyKind::kTabularGeneral:
      return "tabular-general";
    case PolicyKind::kProcedural:
      return "procedural";
  }
  return "unknown";
}

PolicyProgram PolicyProgram::FromMarkov(MarkovPolicy policy) {
  auto impl = std::make_shared<Impl>();
  impl->kind = PolicyKind::kMarkov;
  impl->num_actions = policy.num_actions();
  impl->declared_size = static_cast<int64_t>(policy.horizon()) *
                        policy.num_states() * policy.num_actions();
  impl->markov = std::move(policy);
  PolicyProgram out;
  out.impl_ = std::move(impl);
  return out;
}

PolicyProgram PolicyProgram::FromTable(int num_actions, Table table) {
  for (const auto& [key, row] : table) {
    if (static_cast<int>(row.size()) != num_actions || !IsDistribution(row)) {
      throw std::invalid_argument("table row is not a distribution: " + key);
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = PolicyKind::kTabularGeneral;
  impl->num_actions = num_actions;
  impl->declared_size = static_cast<int64_t>(table.size() + 1) * num_actions;
  impl->table = std::move(table);
  PolicyProgram out;
  out.impl_ = std::move(impl);
  return out;
}

PolicyProgram PolicyProgram::Procedural(int num_actions, int64_t declared_size,
                                        Evaluator evaluator) {
  auto impl = std::make_shared<Impl>();
  impl->kind = PolicyKind::kProcedural;
  impl->num_actions = num_actions;
  impl->declared_size = declared_size;
  impl->evaluator = std::move(evaluator);
  PolicyProgram out;
  out.impl_ = std::move(impl);
  return out;
}

PolicyProgram PolicyProgram::ProceduralSampler(int num_actions,
                                               int64_t declared_size,
                                               Sampler sampler) {
  auto impl = std::make_shared<Impl>();
  impl->kind = PolicyKind::kProcedural;
  impl->num_actions = num_actions;
  impl->declared_size = declared_size;
  impl->sampler = std::move(sampler);
  PolicyProgram out;
  out.impl_ = std::move(impl);
  return out;
}

Distribution PolicyProgram::Evaluate(const OwnHistory& history,
                                     int state) const {
  switch (impl_->kind) {
    case PolicyKind::kMarkov: {
      int h = static_cast<int>(history.size());
      if (h >= impl_->markov.horizon() || state < 0 ||
          state >= impl_->markov.num_states()) {
        throw std::out_of_range("Markov policy evaluated outside its table");
      }
      return impl_->markov.RowVector(h, state);
    }
    case PolicyKind::kTabularGeneral: {
      auto it = impl_->table.find(HistoryKey(history, state));
      if (it == impl_->table.end()) return PointMass(impl_->num_actions, 0);
      return it->second;
    }
    case PolicyKind::kProcedural:
      if (!impl_->evaluator) {
        throw std::logic_error("sampler-only policy has no closed-form distribution");
      }
      return impl_->evaluator(history, state);
  }
  throw std::logic_error("unknown policy kind");
}

int PolicyProgram::Sample(const OwnHistory& history, int state,
                          Rng& rng) const {
  if (impl_->kind == PolicyKind::kMarkov) {
    int h = static_cast<int>(history.size());
    return SampleIndex(std::span<const double>(impl_->markov.Row(h, state),
                                               impl_->num_actions),
                       rng);
  }
  if (impl_->kind == PolicyKind::kProcedural && !impl_->evaluator) {
    return impl_->sampler(history, state, rng);
  }
  Distribution d = Evaluate(history, state);
  return SampleIndex(d, rng);
}

int DeterministicPolicy::Act(const OwnHistory& history, int state) const {
  return ActByKey(HistoryKey(history, state));
}

int DeterministicPolicy::ActByKey(const std::string& key) const {
  auto it = actions_.find(key);
  return it == actions_.end() ? 0 : it->second;
}

PolicyProgram DeterministicPolicy::ToProgram() const {
  PolicyProgram::Table table;
  for (const auto& [key, a] : actions_) table[key] = PointMass(num_actions_, a);
  return PolicyProgram::FromTable(num_actions_, std::move(table));
}

ProductPolicy MarkovProduct(const std::vector<MarkovPolicy>& policies) {
  ProductPolicy out;
  for (const MarkovPolicy& p : policies) {
    out.players.push_back(PolicyProgram::FromMarkov(p));
  }
  return out;
}

DistributionalPolicy DistributionalPolicy::Single(ProductPolicy policy) {
  DistributionalPolicy out;
  out.weights = {1.0};
  out.members.push_back(std::move(policy));
  return out;
}

DistributionalPolicy DistributionalPolicy::Uniform(
    std::vector<ProductPolicy> members) {
  if (members.empty()) throw std::invalid_argument("empty mixture");
  DistributionalPolicy out;
  out.weights.assign(members.size(), 1.0 / members.size());
  out.members = std::move(members);
  return out;
}

DistributionalPolicy WithDeviation(const DistributionalPolicy& mixture,
                                   int player, const PolicyProgram& deviation) {
  DistributionalPolicy out = mixture;
  for (ProductPolicy& member : out.members) member.players.at(player) = deviation;
  return out;
}

std::string TrajectoryKey(const Trajectory& t) {
  std::ostringstream os;
  for (size_t h = 0; h < t.states.size(); ++h) {
    os << t.states[h] << ":";
    for (size_t i = 0; i < t.actions[h].size(); ++i) {
      os << t.actions[h][i] << (i + 1 < t.actions[h].size() ? "," : "");
    }
    os << (h + 1 < t.states.size() ? "|" : "");
  }
  return os.str();
}

OwnHistory ProjectHistory(const Trajectory& t, int player, int steps) {
  OwnHistory out;
  for (int h = 0; h < steps; ++h) {
    out.push_back({t.states[h], t.actions[h][player], t.rewards[h][player]});
  }
  return out;
}

void CheckDimensions(const MarkovGame& game, const ProductPolicy& policy) {
  if (static_cast<int>(policy.players.size()) != game.num_players()) {
    throw std::invalid_argument("policy has wrong number of players");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    const PolicyProgram& p = policy.players[i];
    if (!p.valid() || p.num_actions() != game.num_actions(i)) {
      throw std::invalid_argument("policy action count mismatch for player " +
                                  std::to_string(i));
    }
    if (const MarkovPolicy* mp = p.markov()) {
      if (mp->horizon() != game.horizon() || mp->num_states() != game.num_states()) {
        throw std::invalid_argument("Markov policy shape mismatch");
      }
    }
  }
}

void CheckDimensions(const MarkovGame& game, const DistributionalPolicy& policy) {
  if (policy.members.empty() || policy.members.size() != policy.weights.size()) {
    throw std::invalid_argument("mixture weights and members disagree");
  }
  double total = 0.0;
  for (double w : policy.weights) {
    if (w < 0) throw std::invalid_argument("negative mixture weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kFloatTolerance) {
    throw std::invalid_argument("mixture weights do not sum to 1");
  }
  for (const ProductPolicy& member : policy.members) CheckDimensions(game, member);
}

namespace {

Trajectory Play(const MarkovGame& game, const ProductPolicy& policy, Rng& rng) {
  int m = game.num_players();
  Trajectory t;
  std::vector<OwnHistory> histories(m);
  int s = game.initial()[SampleIndex(game.initial_values(), rng)].state;
  JointAction joint(m);
  for (int h = 0; h < game.horizon(); ++h) {
    for (int i = 0; i < m; ++i) joint[i] = policy.players[i].Sample(histories[i], s, rng);
    int64_t j = game.JointIndex(joint);
    std::vector<Rational> rewards;
    for (int i = 0; i < m; ++i) {
      rewards.push_back(game.Reward(h, s, j, i));
      histories[i].push_back({s, joint[i], rewards.back()});
    }
    t.states.push_back(s);
    t.actions.push_back(joint);
    t.rewards.push_back(std::move(rewards));
    if (h + 1 < game.horizon()) {
      const auto& next = game.Transition(h, s, j);
      s = next[SampleIndex(game.TransitionValues(h, s, j), rng)].state;
    }
  }
  return t;
}

class Enumerator {
 public:
  Enumerator(const MarkovGame& game, int64_t budget,
             const std::function<void(const Trajectory&, double)>& visit)
      : game_(game), budget_(budget), visit_(visit),
        histories_(game.num_players()) {}

  void Run(const ProductPolicy& policy, double weight) {
    policy_ = &policy;
    const auto& init = game_.initial();
    for (size_t k = 0; k < init.size(); ++k) {
      double p = weight * game_.initial_values()[k];
      if (p <= 0.0) continue;
      Tick();
      Recurse(0, init[k].state, p);
    }
  }

 private:
  void Tick() {
    if (++nodes_ > budget_) {
      throw BudgetExceeded("trajectory enumeration exceeded " +
                           std::to_string(budget_) + " nodes");
    }
  }

  void Recurse(int h, int s, double prob) {
    int m = game_.num_players();
    std::vector<Distribution> dists(m);
    std::vector<std::vector<int>> support(m);
    for (int i = 0; i < m; ++i) {
      dists[i] = policy_->players[i].Evaluate(histories_[i], s);
      for (int a = 0; a < static_cast<int>(dists[i].size()); ++a) {
        if (dists[i][a] > 0.0) support[i].push_back(a);
      }
      if (support[i].empty()) return;
    }
    std::vector<int> cursor(m, 0);
    JointAction joint(m);
    while (true) {
      double q = prob;
      for (int i = 0; i < m; ++i) {
        joint[i] = support[i][cursor[i]];
        q *= dists[i][joint[i]];
      }
      int64_t j = game_.JointIndex(joint);
      Descend(h, s, j, joint, q);
      int i = m - 1;
      while (i >= 0 && ++cursor[i] == static_cast<int>(support[i].size())) {
        cursor[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }

  void Descend(int h, int s, int64_t j, const JointAction& joint, double q) {
    int m = game_.num_players();
    std::vector<Rational> rewards(m);
    for (int i = 0; i < m; ++i) {
      rewards[i] = game_.Reward(h, s, j, i);
      histories_[i].push_back({s, joint[i], rewards[i]});
    }
    trajectory_.states.push_back(s);
    trajectory_.actions.push_back(joint);
    trajectory_.rewards.push_back(rewards);
    if (h + 1 == game_.horizon()) {
      visit_(trajectory_, q);
    } else {
      const auto& next = game_.Transition(h, s, j);
      const auto& probs = game_.TransitionValues(h, s, j);
      for (size_t k = 0; k < next.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        Tick();
        Recurse(h + 1, next[k].state, q * probs[k]);
      }
    }
    trajectory_.states.pop_back();
    trajectory_.actions.pop_back();
    trajectory_.rewards.pop_back();
    for (int i = 0; i < m; ++i) histories_[i].pop_back();
  }

  const MarkovGame& game_;
  int64_t budget_;
  const std::function<void(const Trajectory&, double)>& visit_;
  const ProductPolicy* policy_ = nullptr;
  int64_t nodes_ = 0;
  std::vector<OwnHistory> histories_;
  Trajectory trajectory_;
};

}  // namespace

Trajectory SampleTrajectory(const MarkovGame& game, const ProductPolicy& policy,
                            Rng& rng) {
  CheckDimensions(game, policy);
  return Play(game, policy, rng);
}

Trajectory SampleTrajectory(const MarkovGame& game,
                            const DistributionalPolicy& policy, Rng& rng) {
  CheckDimensions(game, policy);
  int member = SampleIndex(policy.weights, rng);
  return Play(game, policy.members[member], rng);
}

Trajectory SampleTrajectory(const MarkovGame& game,
                            const DistributionalPolicy& policy, uint64_t seed) {
  Rng rng(seed);
  return SampleTrajectory(game, policy, rng);
}

void ForEachLeaf(const MarkovGame& game, const DistributionalPolicy& policy,
                 int64_t budget,
                 const std::function<void(const Trajectory&, double)>& visit) {
  CheckDimensions(game, policy);
  for (const ProductPolicy& member : policy.members) {
    for (const PolicyProgram& p : member.players) {
      if (!p.has_distribution()) {
        throw BudgetExceeded("sampler-only policy cannot be enumerated");
      }
    }
  }
  Enumerator e(game, budget, visit);
  for (int k = 0; k < policy.size(); ++k) {
    if (policy.weights[k] > 0.0) e.Run(policy.members[k], policy.weights[k]);
  }
}

TrajectoryDistribution EnumerateTrajectoryDistribution(
    const MarkovGame& game, const DistributionalPolicy& policy,
    int64_t budget) {
  TrajectoryDistribution out;
  ForEachLeaf(game, policy, budget,
              [&](const Trajectory& t, double p) { out[t] += p; });
  return out;
}

TrajectoryDistribution EnumerateTrajectoryDistribution(
    const MarkovGame& game, const ProductPolicy& policy, int64_t budget) {
  return EnumerateTrajectoryDistribution(
      game, DistributionalPolicy::Single(policy), budget);
}

}  // namespace ccelab
