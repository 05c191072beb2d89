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

#ifndef CCELAB_POLICIES_H_
#define CCELAB_POLICIES_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "ccelab/games.h"
#include "ccelab/random.h"

namespace ccelab {

using Distribution = std::vector<double>;

inline constexpr int64_t kEnumerationBudget = 1000000;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One step of a player's own history: the state seen, the action taken and
// the reward received, exactly.
struct OwnStep {
  int state;
  int action;
  Rational reward;
};
using OwnHistory = std::vector<OwnStep>;

// Canonical string for (tau_{h-1}, s_h): "s.a.r;" per past step, then "|s".
std::string HistoryKey(const OwnHistory& history, int state);

Distribution PointMass(int num_actions, int action);
Distribution UniformDistribution(int num_actions);
bool IsDistribution(const Distribution& d, double tol = kFloatTolerance);

class MarkovPolicy {
 public:
  MarkovPolicy() = default;
  // Uniform rows.
  MarkovPolicy(int horizon, int num_states, int num_actions);
  // The same row at every (h, s).
  static MarkovPolicy Constant(int horizon, int num_states,
                               const Distribution& row);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  const double* Row(int h, int s) const {
    return probs_.data() + (static_cast<size_t>(h) * num_states_ + s) * num_actions_;
  }
  Distribution RowVector(int h, int s) const {
    const double* r = Row(h, s);
    return Distribution(r, r + num_actions_);
  }
  void SetRow(int h, int s, const Distribution& row);

  bool operator==(const MarkovPolicy& o) const {
    return horizon_ == o.horizon_ && num_states_ == o.num_states_ &&
           num_actions_ == o.num_actions_ && probs_ == o.probs_;
  }

 private:
  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<double> probs_;
};

enum class PolicyKind { kMarkov, kTabularGeneral, kProcedural };

std::string PolicyKindName(PolicyKind kind);

// A general policy of one player: (own history, current state) -> action
// distribution. Cheap to copy; the implementation is shared and immutable.
class PolicyProgram {
 public:
  using Evaluator = std::function<Distribution(const OwnHistory&, int)>;
  using Sampler = std::function<int(const OwnHistory&, int, Rng&)>;
  using Table = std::unordered_map<std::string, Distribution>;

  PolicyProgram() = default;

  static PolicyProgram FromMarkov(MarkovPolicy policy);
  // Histories absent from the table play action 0.
  static PolicyProgram FromTable(int num_actions, Table table);
  static PolicyProgram Procedural(int num_actions, int64_t declared_size,
                                  Evaluator evaluator);
  // Randomized procedure exposing only a sampler; cannot be enumerated.
  static PolicyProgram ProceduralSampler(int num_actions, int64_t declared_size,
                                         Sampler sampler);

  PolicyKind kind() const { return impl_->kind; }
  int num_actions() const { return impl_->num_actions; }
  int64_t declared_size() const { return impl_->declared_size; }
  bool has_distribution() const {
    return impl_->kind != PolicyKind::kProcedural || impl_->evaluator != nullptr;
  }
  bool serializable() const { return impl_->kind != PolicyKind::kProcedural; }
  bool valid() const { return impl_ != nullptr; }

  Distribution Evaluate(const OwnHistory& history, int state) const;
  int Sample(const OwnHistory& history, int state, Rng& rng) const;

  // Non-null only for the matching kind.
  const MarkovPolicy* markov() const {
    return impl_->kind == PolicyKind::kMarkov ? &impl_->markov : nullptr;
  }
  const Table* table() const {
    return impl_->kind == PolicyKind::kTabularGeneral ? &impl_->table : nullptr;
  }

 private:
  struct Impl {
    PolicyKind kind;
    int num_actions = 0;
    int64_t declared_size = 0;
    MarkovPolicy markov;
    Table table;
    Evaluator evaluator;
    Sampler sampler;
  };
  std::shared_ptr<const Impl> impl_;
};

// Point-mass policy over canonical history keys; unknown keys play 0.
class DeterministicPolicy {
 public:
  DeterministicPolicy() = default;
  explicit DeterministicPolicy(int num_actions) : num_actions_(num_actions) {}

  void Set(const std::string& key, int action) { actions_[key] = action; }
  int Act(const OwnHistory& history, int state) const;
  int ActByKey(const std::string& key) const;
  int num_actions() const { return num_actions_; }
  const std::unordered_map<std::string, int>& entries() const { return actions_; }
  PolicyProgram ToProgram() const;

 private:
  int num_actions_ = 0;
  std::unordered_map<std::string, int> actions_;
};

struct ProductPolicy {
  std::vector<PolicyProgram> players;
};

ProductPolicy MarkovProduct(const std::vector<MarkovPolicy>& policies);

struct DistributionalPolicy {
  std::vector<double> weights;
  std::vector<ProductPolicy> members;

  static DistributionalPolicy Single(ProductPolicy policy);
  static DistributionalPolicy Uniform(std::vector<ProductPolicy> members);
  int size() const { return static_cast<int>(members.size()); }
};

// Replaces player i's policy in every member.
DistributionalPolicy WithDeviation(const DistributionalPolicy& mixture,
                                   int player, const PolicyProgram& deviation);

struct Trajectory {
  std::vector<int> states;
  std::vector<JointAction> actions;
  std::vector<std::vector<Rational>> rewards;

  bool operator<(const Trajectory& o) const {
    return std::tie(states, actions) < std::tie(o.states, o.actions);
  }
  bool operator==(const Trajectory& o) const {
    return states == o.states && actions == o.actions;
  }
};

std::string TrajectoryKey(const Trajectory& t);

// Player i's own history through the first `steps` steps of t.
OwnHistory ProjectHistory(const Trajectory& t, int player, int steps);

void CheckDimensions(const MarkovGame& game, const ProductPolicy& policy);
void CheckDimensions(const MarkovGame& game, const DistributionalPolicy& policy);

Trajectory SampleTrajectory(const MarkovGame& game, const ProductPolicy& policy,
                            Rng& rng);
// Draws the member once, then plays it for the whole episode.
Trajectory SampleTrajectory(const MarkovGame& game,
                            const DistributionalPolicy& policy, Rng& rng);
Trajectory SampleTrajectory(const MarkovGame& game,
                            const DistributionalPolicy& policy, uint64_t seed);

using TrajectoryDistribution = std::map<Trajectory, double>;

// Exact trajectory law by depth-first expansion of positive-probability
// branches. Throws BudgetExceeded past `budget` expanded nodes.
TrajectoryDistribution EnumerateTrajectoryDistribution(
    const MarkovGame& game, const DistributionalPolicy& policy,
    int64_t budget = kEnumerationBudget);
TrajectoryDistribution EnumerateTrajectoryDistribution(
    const MarkovGame& game, const ProductPolicy& policy,
    int64_t budget = kEnumerationBudget);

// Visits every positive-probability complete trajectory with its
// probability. Same budget semantics.
void ForEachLeaf(const MarkovGame& game, const DistributionalPolicy& policy,
                 int64_t budget,
                 const std::function<void(const Trajectory&, double)>& visit);

}  // namespace ccelab

#endif  // CCELAB_POLICIES_H_
