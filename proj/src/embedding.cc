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

#include "ccelab/embedding.h"

#include <functional>
#include <set>
#include <utility>

namespace ccelab {

namespace {

class DomainBuilder {
 public:
  DomainBuilder(const MarkovGame& game, int player, int64_t budget)
      : game_(game), player_(player), budget_(budget) {}

  std::shared_ptr<const DecisionDomain> Build() {
    domain_ = std::make_shared<DecisionDomain>();
    domain_->player = player_;
    domain_->num_actions = game_.num_actions(player_);
    std::set<int> starts;
    for (size_t k = 0; k < game_.initial().size(); ++k) {
      if (game_.initial_values()[k] > 0.0) starts.insert(game_.initial()[k].state);
    }
    OwnHistory history;
    std::vector<int> prefixes;
    for (int s : starts) Visit(history, s, prefixes);
    return domain_;
  }

 private:
  void Visit(OwnHistory& history, int s, std::vector<int>& prefixes) {
    std::string key = HistoryKey(history, s);
    if (domain_->index.count(key)) return;
    if (static_cast<int64_t>(domain_->points.size()) >= budget_) {
      throw BudgetExceeded("decision domain exceeds budget");
    }
    int id = static_cast<int>(domain_->points.size());
    domain_->points.push_back({history, s, key, prefixes});
    domain_->index[key] = id;
    int h = static_cast<int>(history.size());
    if (h + 1 == game_.horizon()) return;
    prefixes.push_back(id);
    for (int a = 0; a < game_.num_actions(player_); ++a) {
      std::set<std::pair<Rational, int>> outcomes;
      for (int64_t j = 0; j < game_.num_joint_actions(); ++j) {
        if (game_.JointFromIndex(j)[player_] != a) continue;
        const auto& next = game_.Transition(h, s, j);
        const auto& probs = game_.TransitionValues(h, s, j);
        for (size_t k = 0; k < next.size(); ++k) {
          if (probs[k] > 0.0) {
            outcomes.insert({game_.Reward(h, s, j, player_), next[k].state});
          }
        }
      }
      for (const auto& [r, next_state] : outcomes) {
        history.push_back({s, a, r});
        Visit(history, next_state, prefixes);
        history.pop_back();
      }
    }
    prefixes.pop_back();
  }

  const MarkovGame& game_;
  int player_;
  int64_t budget_;
  std::shared_ptr<DecisionDomain> domain_;
};

// Calls fn(choice vector) for every element of the product of per-point
// option lists.
void ForEachProduct(const std::vector<std::vector<int>>& options,
                    const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cursor(options.size(), 0);
  std::vector<int> choice(options.size());
  for (size_t d = 0; d < options.size(); ++d) {
    if (options[d].empty()) return;
    choice[d] = options[d][0];
  }
  while (true) {
    fn(choice);
    int d = static_cast<int>(options.size()) - 1;
    while (d >= 0 && ++cursor[d] == static_cast<int>(options[d].size())) {
      cursor[d] = 0;
      choice[d] = options[d][0];
      --d;
    }
    if (d < 0) return;
    choice[d] = options[d][cursor[d]];
  }
}

int64_t ProductSize(const std::vector<std::vector<int>>& options,
                    int64_t budget) {
  int64_t total = 1;
  for (const auto& o : options) {
    total *= static_cast<int64_t>(o.size());
    if (total > budget) {
      throw BudgetExceeded("deterministic policy space exceeds budget");
    }
  }
  return total;
}

}  // namespace

std::shared_ptr<const DecisionDomain> ReachableDecisionPoints(
    const MarkovGame& game, int player, int64_t budget) {
  return DomainBuilder(game, player, budget).Build();
}

DeterministicPolicy DeterministicMixture::Member(int k) const {
  DeterministicPolicy out(domain->num_actions);
  for (size_t d = 0; d < domain->points.size(); ++d) {
    out.Set(domain->points[d].key, choices[k][d]);
  }
  return out;
}

DeterministicMixture AllDeterministicPolicies(
    std::shared_ptr<const DecisionDomain> domain, int64_t budget) {
  std::vector<int> all(domain->num_actions);
  for (int a = 0; a < domain->num_actions; ++a) all[a] = a;
  std::vector<std::vector<int>> options(domain->points.size(), all);
  int64_t count = ProductSize(options, budget);
  DeterministicMixture out;
  out.domain = domain;
  ForEachProduct(options, [&](const std::vector<int>& c) {
    out.choices.push_back(c);
    out.weights.push_back(1.0 / count);
  });
  return out;
}

DeterministicMixture PeEmbed(const PolicyProgram& policy,
                             std::shared_ptr<const DecisionDomain> domain,
                             int64_t budget) {
  std::vector<Distribution> rows;
  std::vector<std::vector<int>> options;
  for (const DecisionPoint& point : domain->points) {
    rows.push_back(policy.Evaluate(point.history, point.state));
    std::vector<int> support;
    for (int a = 0; a < static_cast<int>(rows.back().size()); ++a) {
      if (rows.back()[a] > 0.0) support.push_back(a);
    }
    options.push_back(std::move(support));
  }
  ProductSize(options, budget);
  DeterministicMixture out;
  out.domain = domain;
  ForEachProduct(options, [&](const std::vector<int>& c) {
    double w = 1.0;
    for (size_t d = 0; d < c.size(); ++d) w *= rows[d][c[d]];
    out.choices.push_back(c);
    out.weights.push_back(w);
  });
  return out;
}

PolicyProgram PfInverse(const DeterministicMixture& mixture) {
  const DecisionDomain& domain = *mixture.domain;
  PolicyProgram::Table table;
  for (size_t d = 0; d < domain.points.size(); ++d) {
    const DecisionPoint& point = domain.points[d];
    double denominator = 0.0;
    Distribution numerator(domain.num_actions, 0.0);
    for (size_t k = 0; k < mixture.choices.size(); ++k) {
      const std::vector<int>& c = mixture.choices[k];
      bool consistent = true;
      for (size_t g = 0; g < point.prefixes.size() && consistent; ++g) {
        consistent = c[point.prefixes[g]] == point.history[g].action;
      }
      if (!consistent) continue;
      denominator += mixture.weights[k];
      numerator[c[d]] += mixture.weights[k];
    }
    if (denominator <= 0.0) {
      table[point.key] = PointMass(domain.num_actions, 0);
    } else {
      for (double& x : numerator) x /= denominator;
      table[point.key] = numerator;
    }
  }
  return PolicyProgram::FromTable(domain.num_actions, std::move(table));
}

namespace {

class MixtureEnumerator {
 public:
  MixtureEnumerator(const MarkovGame& game,
                    const std::vector<DeterministicMixture>& players,
                    int64_t budget)
      : game_(game), players_(players), budget_(budget),
        histories_(game.num_players()) {}

  TrajectoryDistribution Run() {
    int m = game_.num_players();
    std::vector<std::vector<int>> alive(m);
    for (int i = 0; i < m; ++i) {
      for (size_t k = 0; k < players_[i].choices.size(); ++k) {
        if (players_[i].weights[k] > 0.0) alive[i].push_back(static_cast<int>(k));
      }
    }
    const auto& init = game_.initial();
    for (size_t k = 0; k < init.size(); ++k) {
      double p = game_.initial_values()[k];
      if (p > 0.0) Recurse(0, init[k].state, p, alive);
    }
    return std::move(out_);
  }

 private:
  void Recurse(int h, int s, double prob,
               const std::vector<std::vector<int>>& alive) {
    if (++nodes_ > budget_) throw BudgetExceeded("mixture enumeration budget");
    int m = game_.num_players();
    std::vector<int> point(m);
    for (int i = 0; i < m; ++i) {
      point[i] = players_[i].domain->Find(HistoryKey(histories_[i], s));
      if (point[i] < 0) throw std::logic_error("history outside decision domain");
    }
    for (int64_t j = 0; j < game_.num_joint_actions(); ++j) {
      JointAction joint = game_.JointFromIndex(j);
      std::vector<std::vector<int>> next_alive(m);
      bool empty = false;
      for (int i = 0; i < m && !empty; ++i) {
        for (int k : alive[i]) {
          if (players_[i].choices[k][point[i]] == joint[i]) next_alive[i].push_back(k);
        }
        empty = next_alive[i].empty();
      }
      if (empty) continue;
      std::vector<Rational> rewards(m);
      for (int i = 0; i < m; ++i) {
        rewards[i] = game_.Reward(h, s, j, i);
        histories_[i].push_back({s, joint[i], rewards[i]});
      }
      trajectory_.states.push_back(s);
      trajectory_.actions.push_back(joint);
      trajectory_.rewards.push_back(rewards);
      if (h + 1 == game_.horizon()) {
        double q = prob;
        for (int i = 0; i < m; ++i) {
          double mass = 0.0;
          for (int k : next_alive[i]) mass += players_[i].weights[k];
          q *= mass;
        }
        if (q > 0.0) out_[trajectory_] += q;
      } else {
        const auto& next = game_.Transition(h, s, j);
        const auto& probs = game_.TransitionValues(h, s, j);
        for (size_t k = 0; k < next.size(); ++k) {
          if (probs[k] > 0.0) Recurse(h + 1, next[k].state, prob * probs[k], next_alive);
        }
      }
      trajectory_.states.pop_back();
      trajectory_.actions.pop_back();
      trajectory_.rewards.pop_back();
      for (int i = 0; i < m; ++i) histories_[i].pop_back();
    }
  }

  const MarkovGame& game_;
  const std::vector<DeterministicMixture>& players_;
  int64_t budget_;
  int64_t nodes_ = 0;
  std::vector<OwnHistory> histories_;
  Trajectory trajectory_;
  TrajectoryDistribution out_;
};

}  // namespace

TrajectoryDistribution EnumerateMixtureTrajectories(
    const MarkovGame& game, const std::vector<DeterministicMixture>& players,
    int64_t budget) {
  if (static_cast<int>(players.size()) != game.num_players()) {
    throw std::invalid_argument("one mixture per player required");
  }
  return MixtureEnumerator(game, players, budget).Run();
}

}  // namespace ccelab
