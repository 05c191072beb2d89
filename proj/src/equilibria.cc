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

#include "ccelab/equilibria.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace ccelab {

namespace {

// Calls fn(joint, prob) over the product of per-player distributions,
// skipping zero-probability entries.
void ForEachJoint(const std::vector<Distribution>& dists,
                  const std::function<void(const JointAction&, double)>& fn) {
  int m = static_cast<int>(dists.size());
  std::vector<std::vector<int>> support(m);
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < static_cast<int>(dists[i].size()); ++a) {
      if (dists[i][a] > 0.0) support[i].push_back(a);
    }
    if (support[i].empty()) return;
  }
  std::vector<int> cursor(m, 0);
  JointAction joint(m);
  while (true) {
    double q = 1.0;
    for (int i = 0; i < m; ++i) {
      joint[i] = support[i][cursor[i]];
      q *= dists[i][joint[i]];
    }
    fn(joint, q);
    int i = m - 1;
    while (i >= 0 && ++cursor[i] == static_cast<int>(support[i].size())) {
      cursor[i] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

}  // namespace

int ArgmaxLowest(std::span<const double> values) {
  int best = 0;
  for (size_t a = 1; a < values.size(); ++a) {
    if (values[a] > values[best] + kTieTolerance) best = static_cast<int>(a);
  }
  return best;
}

std::string ValueReport::MethodTag() const {
  switch (method) {
    case ValueMethod::kExactDp:
      return "exact-dp";
    case ValueMethod::kExactEnum:
      return "exact-enum";
    case ValueMethod::kMonteCarlo: {
      std::ostringstream os;
      os << "monte-carlo(n=" << samples << ",seed=" << seed << ")";
      return os.str();
    }
  }
  return "unknown";
}

ValueReport ValueMarkovProduct(const MarkovGame& game,
                               const std::vector<MarkovPolicy>& policy) {
  int m = game.num_players();
  if (static_cast<int>(policy.size()) != m) {
    throw std::invalid_argument("one Markov policy per player required");
  }
  for (int i = 0; i < m; ++i) {
    if (policy[i].horizon() != game.horizon() ||
        policy[i].num_states() != game.num_states() ||
        policy[i].num_actions() != game.num_actions(i)) {
      throw std::invalid_argument("Markov policy shape mismatch");
    }
  }
  int S = game.num_states();
  std::vector<std::vector<double>> next(S, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> current = next;
  for (int h = game.horizon() - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      std::vector<Distribution> dists(m);
      for (int i = 0; i < m; ++i) dists[i] = policy[i].RowVector(h, s);
      std::vector<double> v(m, 0.0);
      ForEachJoint(dists, [&](const JointAction& joint, double q) {
        int64_t j = game.JointIndex(joint);
        const auto& to = game.Transition(h, s, j);
        const auto& probs = game.TransitionValues(h, s, j);
        for (int i = 0; i < m; ++i) {
          double future = 0.0;
          for (size_t k = 0; k < to.size(); ++k) future += probs[k] * next[to[k].state][i];
          v[i] += q * (game.RewardValue(h, s, j, i) + future);
        }
      });
      current[s] = v;
    }
    std::swap(current, next);
  }
  ValueReport report;
  report.method = ValueMethod::kExactDp;
  report.values.assign(m, 0.0);
  report.standard_errors.assign(m, 0.0);
  for (size_t k = 0; k < game.initial().size(); ++k) {
    for (int i = 0; i < m; ++i) {
      report.values[i] += game.initial_values()[k] * next[game.initial()[k].state][i];
    }
  }
  return report;
}

ValueReport ValueGeneral(const MarkovGame& game,
                         const DistributionalPolicy& policy,
                         const ValueOptions& options) {
  int m = game.num_players();
  if (options.mode != ValueOptions::Mode::kMonteCarlo) {
    try {
      ValueReport report;
      report.method = ValueMethod::kExactEnum;
      report.values.assign(m, 0.0);
      report.standard_errors.assign(m, 0.0);
      ForEachLeaf(game, policy, options.budget,
                  [&](const Trajectory& t, double p) {
                    for (int i = 0; i < m; ++i) {
                      double total = 0.0;
                      for (const auto& r : t.rewards) total += ToDouble(r[i]);
                      report.values[i] += p * total;
                    }
                  });
      return report;
    } catch (const BudgetExceeded&) {
      if (options.mode == ValueOptions::Mode::kExact) throw;
    }
  }
  CheckDimensions(game, policy);
  int64_t n = options.samples;
  std::vector<std::vector<double>> totals(n, std::vector<double>(m, 0.0));
  ParallelFor(n, [&](int64_t e) {
    Rng rng(DeriveSeed(options.seed, static_cast<uint64_t>(e)));
    Trajectory t = SampleTrajectory(game, policy, rng);
    for (const auto& r : t.rewards) {
      for (int i = 0; i < m; ++i) totals[e][i] += ToDouble(r[i]);
    }
  });
  ValueReport report;
  report.method = ValueMethod::kMonteCarlo;
  report.samples = n;
  report.seed = options.seed;
  report.values.assign(m, 0.0);
  report.standard_errors.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double sum = 0.0;
    double sq = 0.0;
    for (int64_t e = 0; e < n; ++e) {
      sum += totals[e][i];
      sq += totals[e][i] * totals[e][i];
    }
    double mean = sum / n;
    double var = n > 1 ? std::max(0.0, (sq - n * mean * mean) / (n - 1)) : 0.0;
    report.values[i] = mean;
    report.standard_errors[i] = std::sqrt(var / n);
  }
  return report;
}

ValueReport ValueGeneral(const MarkovGame& game, const ProductPolicy& policy,
                         const ValueOptions& options) {
  return ValueGeneral(game, DistributionalPolicy::Single(policy), options);
}

MarkovBestResponse BestResponseMarkov(
    const MarkovGame& game, int player,
    const std::vector<MarkovPolicy>& opponents) {
  int m = game.num_players();
  int S = game.num_states();
  int A = game.num_actions(player);
  if (static_cast<int>(opponents.size()) != m) {
    throw std::invalid_argument("one opponent entry per player required");
  }
  MarkovBestResponse out;
  out.policy = MarkovPolicy(game.horizon(), S, A);
  std::vector<double> next(S, 0.0);
  std::vector<double> current(S, 0.0);
  for (int h = game.horizon() - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      std::vector<Distribution> dists(m);
      for (int j = 0; j < m; ++j) {
        dists[j] = j == player ? Distribution{1.0} : opponents[j].RowVector(h, s);
      }
      std::vector<double> q(A, 0.0);
      for (int a = 0; a < A; ++a) {
        ForEachJoint(dists, [&](const JointAction& partial, double p) {
          JointAction joint = partial;
          joint[player] = a;
          int64_t j = game.JointIndex(joint);
          const auto& to = game.Transition(h, s, j);
          const auto& probs = game.TransitionValues(h, s, j);
          double future = 0.0;
          for (size_t k = 0; k < to.size(); ++k) future += probs[k] * next[to[k].state];
          q[a] += p * (game.RewardValue(h, s, j, player) + future);
        });
      }
      int best = 0;
      for (int a = 1; a < A; ++a) {
        if (q[a] > q[best] + kTieTolerance) best = a;
      }
      out.policy.SetRow(h, s, PointMass(A, best));
      current[s] = q[best];
    }
    std::swap(current, next);
  }
  for (size_t k = 0; k < game.initial().size(); ++k) {
    out.value += game.initial_values()[k] * next[game.initial()[k].state];
  }
  return out;
}

MarkovBestResponse BestResponseMarkovAgainst(
    const MarkovGame& game, int player, const DistributionalPolicy& others,
    int64_t budget) {
  int H = game.horizon();
  int S = game.num_states();
  int A = game.num_actions(player);
  int cells = H * S;
  double count = std::pow(static_cast<double>(A), cells);
  if (count > static_cast<double>(budget)) {
    throw BudgetExceeded("deterministic Markov policy space exceeds budget");
  }
  std::vector<int> choice(cells, 0);
  MarkovBestResponse best;
  bool first = true;
  while (true) {
    MarkovPolicy candidate(H, S, A);
    for (int c = 0; c < cells; ++c) candidate.SetRow(c / S, c % S, PointMass(A, choice[c]));
    DistributionalPolicy mixture =
        WithDeviation(others, player, PolicyProgram::FromMarkov(candidate));
    ValueOptions exact;
    exact.mode = ValueOptions::Mode::kExact;
    exact.budget = budget;
    double v = ValueGeneral(game, mixture, exact).values[player];
    if (first || v > best.value + kTieTolerance) {
      best.policy = candidate;
      best.value = v;
      first = false;
    }
    int c = cells - 1;
    while (c >= 0 && ++choice[c] == A) {
      choice[c] = 0;
      --c;
    }
    if (c < 0) break;
  }
  return best;
}

std::vector<MarkovPolicy> AverageMarkovBehavior(
    const DistributionalPolicy& mixture) {
  if (mixture.members.empty()) throw std::invalid_argument("empty mixture");
  int m = static_cast<int>(mixture.members[0].players.size());
  std::vector<MarkovPolicy> out;
  for (int i = 0; i < m; ++i) {
    const MarkovPolicy* first = mixture.members[0].players[i].markov();
    if (first == nullptr) throw std::invalid_argument("member is not Markov");
    MarkovPolicy avg(first->horizon(), first->num_states(), first->num_actions());
    for (int h = 0; h < first->horizon(); ++h) {
      for (int s = 0; s < first->num_states(); ++s) {
        Distribution row(first->num_actions(), 0.0);
        for (int k = 0; k < mixture.size(); ++k) {
          const MarkovPolicy* p = mixture.members[k].players[i].markov();
          if (p == nullptr) throw std::invalid_argument("member is not Markov");
          for (int a = 0; a < first->num_actions(); ++a) {
            row[a] += mixture.weights[k] * p->Row(h, s)[a];
          }
        }
        avg.SetRow(h, s, row);
      }
    }
    out.push_back(std::move(avg));
  }
  return out;
}

bool IsActionRevealing(const MarkovGame& game, int player) {
  int m = game.num_players();
  for (int h = 0; h + 1 < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      bool inert = true;
      for (int64_t j = 1; j < game.num_joint_actions() && inert; ++j) {
        if (!(game.Transition(h, s, j) == game.Transition(h, s, 0))) inert = false;
        for (int i = 0; i < m && inert; ++i) {
          if (game.Reward(h, s, j, i) != game.Reward(h, s, 0, i)) inert = false;
        }
      }
      if (inert) continue;
      for (int64_t j = 0; j < game.num_joint_actions(); ++j) {
        JointAction a = game.JointFromIndex(j);
        for (int64_t k = j + 1; k < game.num_joint_actions(); ++k) {
          JointAction b = game.JointFromIndex(k);
          if (a[player] != b[player]) continue;
          if (game.Reward(h, s, j, player) != game.Reward(h, s, k, player)) continue;
          std::set<int> support;
          for (const StateProb& sp : game.Transition(h, s, j)) {
            if (sp.prob > 0) support.insert(sp.state);
          }
          for (const StateProb& sp : game.Transition(h, s, k)) {
            if (sp.prob > 0 && support.count(sp.state)) return false;
          }
        }
      }
    }
  }
  return true;
}

namespace {

class GeneralBestResponder {
 public:
  GeneralBestResponder(const MarkovGame& game, const DistributionalPolicy& mixture,
                       int player, int64_t budget)
      : game_(game), mixture_(mixture), player_(player), budget_(budget),
        policy_(game.num_actions(player)) {}

  GeneralBestResponse Run() {
    std::map<int, std::vector<Node>> roots;
    int m = game_.num_players();
    for (int t = 0; t < mixture_.size(); ++t) {
      if (mixture_.weights[t] <= 0.0) continue;
      for (size_t k = 0; k < game_.initial().size(); ++k) {
        double w = mixture_.weights[t] * game_.initial_values()[k];
        if (w <= 0.0) continue;
        Tick();
        roots[game_.initial()[k].state].push_back(
            Node{w, t, std::vector<OwnHistory>(m)});
      }
    }
    GeneralBestResponse out;
    OwnHistory mine;
    for (auto& [s, nodes] : roots) out.value += Solve(0, s, nodes, mine);
    out.policy = policy_;
    out.nodes = nodes_;
    return out;
  }

 private:
  struct Node {
    double weight;
    int member;
    std::vector<OwnHistory> histories;
  };

  void Tick() {
    if (++nodes_ > budget_) {
      throw BudgetExceeded("general best response exceeds node budget");
    }
  }

  double Solve(int h, int s, const std::vector<Node>& nodes, OwnHistory& mine) {
    int m = game_.num_players();
    int A = game_.num_actions(player_);
    bool last = h + 1 == game_.horizon();
    std::vector<std::vector<Distribution>> opp(nodes.size());
    for (size_t n = 0; n < nodes.size(); ++n) {
      opp[n].resize(m);
      const ProductPolicy& member = mixture_.members[nodes[n].member];
      for (int j = 0; j < m; ++j) {
        opp[n][j] = j == player_ ? Distribution{1.0}
                                 : member.players[j].Evaluate(nodes[n].histories[j], s);
      }
    }
    double best_value = 0.0;
    int best_action = 0;
    for (int a = 0; a < A; ++a) {
      double total = 0.0;
      std::map<std::pair<Rational, int>, std::vector<Node>> buckets;
      for (size_t n = 0; n < nodes.size(); ++n) {
        ForEachJoint(opp[n], [&](const JointAction& partial, double q) {
          JointAction joint = partial;
          joint[player_] = a;
          int64_t j = game_.JointIndex(joint);
          double w = nodes[n].weight * q;
          total += w * game_.RewardValue(h, s, j, player_);
          if (last) return;
          const auto& to = game_.Transition(h, s, j);
          const auto& probs = game_.TransitionValues(h, s, j);
          for (size_t k = 0; k < to.size(); ++k) {
            if (probs[k] <= 0.0) continue;
            Tick();
            Node child{w * probs[k], nodes[n].member, nodes[n].histories};
            for (int i = 0; i < m; ++i) {
              child.histories[i].push_back({s, joint[i], game_.Reward(h, s, j, i)});
            }
            buckets[{game_.Reward(h, s, j, player_), to[k].state}].push_back(
                std::move(child));
          }
        });
      }
      for (auto& [obs, children] : buckets) {
        mine.push_back({s, a, obs.first});
        total += Solve(h + 1, obs.second, children, mine);
        mine.pop_back();
      }
      if (a == 0 || total > best_value + kTieTolerance) {
        best_value = total;
        best_action = a;
      }
    }
    policy_.Set(HistoryKey(mine, s), best_action);
    return best_value;
  }

  const MarkovGame& game_;
  const DistributionalPolicy& mixture_;
  int player_;
  int64_t budget_;
  int64_t nodes_ = 0;
  DeterministicPolicy policy_;
};

}  // namespace

GeneralBestResponse BestResponseGeneralExact(const MarkovGame& game,
                                             const DistributionalPolicy& mixture,
                                             int player, int64_t budget) {
  CheckDimensions(game, mixture);
  for (const ProductPolicy& member : mixture.members) {
    for (int j = 0; j < game.num_players(); ++j) {
      if (j != player && !member.players[j].has_distribution()) {
        throw BudgetExceeded("sampler-only opponent cannot be solved exactly");
      }
    }
  }
  return GeneralBestResponder(game, mixture, player, budget).Run();
}

double GapReport::MaxGain() const {
  double best = -std::numeric_limits<double>::infinity();
  for (double g : gains) best = std::max(best, g);
  return best;
}

GapReport CceGap(const MarkovGame& game, const DistributionalPolicy& mixture,
                 GapMode mode, const std::vector<PolicyProgram>* witnesses,
                 const ValueOptions& value_options) {
  int m = game.num_players();
  GapReport report;
  report.mode = mode;
  if (mode == GapMode::kExact) {
    ValueOptions exact = value_options;
    exact.mode = ValueOptions::Mode::kExact;
    ValueReport on_path = ValueGeneral(game, mixture, exact);
    report.value_method = on_path.MethodTag();
    for (int i = 0; i < m; ++i) {
      GeneralBestResponse br =
          BestResponseGeneralExact(game, mixture, i, value_options.budget);
      report.on_path_values.push_back(on_path.values[i]);
      report.deviation_values.push_back(br.value);
      report.gains.push_back(br.value - on_path.values[i]);
      report.standard_errors.push_back(0.0);
      report.witnesses.push_back(br.policy.ToProgram());
    }
    return report;
  }
  if (witnesses == nullptr || static_cast<int>(witnesses->size()) != m) {
    throw std::invalid_argument("witness mode needs one deviation per player");
  }
  ValueReport on_path = ValueGeneral(game, mixture, value_options);
  report.value_method = on_path.MethodTag();
  for (int i = 0; i < m; ++i) {
    ValueOptions opts = value_options;
    opts.seed = DeriveSeed(value_options.seed, static_cast<uint64_t>(i + 1));
    ValueReport dev =
        ValueGeneral(game, WithDeviation(mixture, i, (*witnesses)[i]), opts);
    report.on_path_values.push_back(on_path.values[i]);
    report.deviation_values.push_back(dev.values[i]);
    report.gains.push_back(dev.values[i] - on_path.values[i]);
    report.standard_errors.push_back(std::sqrt(
        dev.standard_errors[i] * dev.standard_errors[i] +
        on_path.standard_errors[i] * on_path.standard_errors[i]));
    report.witnesses.push_back((*witnesses)[i]);
  }
  return report;
}

RegretReport RegretOfSequence(const MarkovGame& game,
                              const std::vector<ProductPolicy>& sequence,
                              GapMode mode,
                              const std::vector<PolicyProgram>* witnesses,
                              const ValueOptions& value_options) {
  int m = game.num_players();
  double T = static_cast<double>(sequence.size());
  RegretReport report;
  report.mode = mode;
  ValueOptions member_options = value_options;
  if (mode == GapMode::kExact) member_options.mode = ValueOptions::Mode::kExact;
  std::vector<double> realized(m, 0.0);
  for (const ProductPolicy& member : sequence) {
    ValueReport v = ValueGeneral(game, member, member_options);
    for (int i = 0; i < m; ++i) realized[i] += v.values[i];
  }
  DistributionalPolicy mixture = DistributionalPolicy::Uniform(sequence);
  for (int i = 0; i < m; ++i) {
    double best;
    if (mode == GapMode::kExact) {
      best = T * BestResponseGeneralExact(game, mixture, i, value_options.budget).value;
    } else {
      if (witnesses == nullptr || static_cast<int>(witnesses->size()) != m) {
        throw std::invalid_argument("witness mode needs one deviation per player");
      }
      best = 0.0;
      for (const ProductPolicy& member : sequence) {
        ProductPolicy deviated = member;
        deviated.players[i] = (*witnesses)[i];
        best += ValueGeneral(game, deviated, member_options).values[i];
      }
    }
    report.regrets.push_back(best - realized[i]);
  }
  return report;
}

std::vector<double> EpsNashGap(const NormalFormGame& game,
                               const std::vector<Distribution>& profile) {
  int m = game.num_players();
  int n = game.num_actions();
  if (static_cast<int>(profile.size()) != m) {
    throw std::invalid_argument("profile needs one distribution per player");
  }
  for (const Distribution& d : profile) {
    if (static_cast<int>(d.size()) != n || !IsDistribution(d, 1e-9)) {
      throw std::invalid_argument("profile rows must be distributions");
    }
  }
  std::vector<std::vector<double>> u(m, std::vector<double>(n, 0.0));
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    JointAction a = game.ProfileFromIndex(p);
    for (int i = 0; i < m; ++i) {
      double others = 1.0;
      for (int j = 0; j < m && others > 0.0; ++j) {
        if (j != i) others *= profile[j][a[j]];
      }
      if (others > 0.0) u[i][a[i]] += others * game.PayoffValue(i, p);
    }
  }
  std::vector<double> gaps(m);
  for (int i = 0; i < m; ++i) {
    double current = 0.0;
    for (int a = 0; a < n; ++a) current += profile[i][a] * u[i][a];
    gaps[i] = *std::max_element(u[i].begin(), u[i].end()) - current;
  }
  return gaps;
}

double MaxNashGap(const NormalFormGame& game,
                  const std::vector<Distribution>& profile) {
  std::vector<double> gaps = EpsNashGap(game, profile);
  return *std::max_element(gaps.begin(), gaps.end());
}

std::optional<std::vector<Distribution>> BruteForceNash(
    const NormalFormGame& game, double eps, int resolution) {
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  int m = game.num_players();
  int n = game.num_actions();
  std::vector<Distribution> simplex;
  std::vector<int> counts(n, 0);
  std::function<void(int, int)> compose = [&](int k, int left) {
    if (k == n - 1) {
      counts[k] = left;
      Distribution d(n);
      for (int a = 0; a < n; ++a) d[a] = static_cast<double>(counts[a]) / resolution;
      simplex.push_back(std::move(d));
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[k] = c;
      compose(k + 1, left - c);
    }
  };
  compose(0, resolution);
  double total = std::pow(static_cast<double>(simplex.size()), m);
  if (total > 5e7) throw BudgetExceeded("Nash grid too large; coarsen resolution");
  std::vector<int> cursor(m, 0);
  std::vector<Distribution> profile(m, simplex[0]);
  std::vector<Distribution> best;
  double best_gap = std::numeric_limits<double>::infinity();
  while (true) {
    for (int i = 0; i < m; ++i) profile[i] = simplex[cursor[i]];
    double gap = MaxNashGap(game, profile);
    if (gap < best_gap - kTieTolerance) {
      best_gap = gap;
      best = profile;
    }
    int i = m - 1;
    while (i >= 0 && ++cursor[i] == static_cast<int>(simplex.size())) {
      cursor[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  if (best_gap <= eps + kTieTolerance) return best;
  return std::nullopt;
}

}  // namespace ccelab
