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

#ifndef CCELAB_AGGREGATION_H_
#define CCELAB_AGGREGATION_H_

#include <functional>
#include <string>
#include <vector>

#include "ccelab/policies.h"

namespace ccelab {

// Exponential weights under log loss. Losses use the natural logarithm.
struct AggregatorState {
  // Finite part of each expert's cumulative log loss.
  std::vector<double> finite_loss;
  // Number of outcomes each expert assigned probability zero.
  std::vector<int> zero_hits;
  int step = 0;
  double learner_loss = 0.0;
  int learner_infinite_steps = 0;

  static AggregatorState Initial(int num_experts);
  int num_experts() const { return static_cast<int>(finite_loss.size()); }
  // +inf once the expert has assigned zero to an observed outcome.
  double CumulativeLoss(int expert) const;
};

// Softmax of negative cumulative losses via log-sum-exp. Experts with an
// infinite loss get weight 0; if every expert is infinite, the softmax runs
// over those with the fewest zero hits.
Distribution Posterior(const AggregatorState& state);

// rows[i] is expert i's prediction at the current context.
Distribution PredictFromRows(const AggregatorState& state,
                             const std::vector<Distribution>& rows);

// Returns the updated state; `learner_step_loss` receives log 1/qhat(y).
AggregatorState UpdateFromRows(const AggregatorState& state,
                               const std::vector<Distribution>& rows,
                               int outcome, double* learner_step_loss = nullptr);

struct ExpertSet {
  using Expert = std::function<Distribution(int context)>;
  int num_outcomes = 0;
  int num_contexts = 0;
  std::vector<Expert> experts;

  std::vector<Distribution> Rows(int context) const;
};

Distribution Predict(const AggregatorState& state, const ExpertSet& experts,
                     int context);
AggregatorState Update(const AggregatorState& state, const ExpertSet& experts,
                       int context, int outcome,
                       double* learner_step_loss = nullptr);

struct AggregationStep {
  int context;
  int outcome;
  double learner_loss;
  Distribution posterior;
  Distribution prediction;
};

struct AggregationRun {
  std::vector<AggregationStep> steps;
  AggregatorState final_state;
};

// Runs the learner over a fixed stream.
AggregationRun RunAggregation(const ExpertSet& experts,
                              const std::vector<int>& contexts,
                              const std::vector<int>& outcomes);

// Runs against an adaptive outcome rule that sees the current prediction.
AggregationRun RunAggregationAdaptive(
    const ExpertSet& experts, const std::vector<int>& contexts,
    const std::function<int(int step, const Distribution& prediction)>& outcome);

// Learner loss minus the best expert's loss.
double RegretAgainstExperts(const AggregationRun& run);

// step,context,outcome,learner_loss,q1..qI
std::string RunTraceCsv(const AggregationRun& run);

double TotalVariation(const Distribution& p, const Distribution& q);

}  // namespace ccelab

#endif  // CCELAB_AGGREGATION_H_
