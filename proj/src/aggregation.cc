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

#include "ccelab/aggregation.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ccelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

AggregatorState AggregatorState::Initial(int num_experts) {
  if (num_experts < 1) throw std::invalid_argument("need at least one expert");
  AggregatorState s;
  s.finite_loss.assign(num_experts, 0.0);
  s.zero_hits.assign(num_experts, 0);
  return s;
}

double AggregatorState::CumulativeLoss(int expert) const {
  return zero_hits[expert] > 0 ? kInf : finite_loss[expert];
}

Distribution Posterior(const AggregatorState& state) {
  int n = state.num_experts();
  int fewest = *std::min_element(state.zero_hits.begin(), state.zero_hits.end());
  double min_loss = kInf;
  for (int i = 0; i < n; ++i) {
    if (state.zero_hits[i] == fewest) min_loss = std::min(min_loss, state.finite_loss[i]);
  }
  Distribution w(n, 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (state.zero_hits[i] != fewest) continue;
    w[i] = std::exp(-(state.finite_loss[i] - min_loss));
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

Distribution PredictFromRows(const AggregatorState& state,
                             const std::vector<Distribution>& rows) {
  if (static_cast<int>(rows.size()) != state.num_experts()) {
    throw std::invalid_argument("expert count mismatch");
  }
  Distribution q = Posterior(state);
  Distribution out(rows[0].size(), 0.0);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (q[i] == 0.0) continue;
    for (size_t y = 0; y < out.size(); ++y) out[y] += q[i] * rows[i][y];
  }
  return out;
}

AggregatorState UpdateFromRows(const AggregatorState& state,
                               const std::vector<Distribution>& rows,
                               int outcome, double* learner_step_loss) {
  if (outcome < 0 || outcome >= static_cast<int>(rows.at(0).size())) {
    throw std::out_of_range("outcome outside Y");
  }
  Distribution prediction = PredictFromRows(state, rows);
  AggregatorState next = state;
  double loss = prediction[outcome] > 0.0 ? -std::log(prediction[outcome]) : kInf;
  if (std::isinf(loss)) ++next.learner_infinite_steps;
  next.learner_loss += loss;
  for (int i = 0; i < state.num_experts(); ++i) {
    double p = rows[i][outcome];
    if (p > 0.0) {
      next.finite_loss[i] += -std::log(p);
    } else {
      ++next.zero_hits[i];
    }
  }
  ++next.step;
  if (learner_step_loss != nullptr) *learner_step_loss = loss;
  return next;
}

std::vector<Distribution> ExpertSet::Rows(int context) const {
  if (context < 0 || (num_contexts > 0 && context >= num_contexts)) {
    throw std::out_of_range("context outside X");
  }
  std::vector<Distribution> rows;
  rows.reserve(experts.size());
  for (const Expert& e : experts) rows.push_back(e(context));
  return rows;
}

Distribution Predict(const AggregatorState& state, const ExpertSet& experts,
                     int context) {
  return PredictFromRows(state, experts.Rows(context));
}

AggregatorState Update(const AggregatorState& state, const ExpertSet& experts,
                       int context, int outcome, double* learner_step_loss) {
  return UpdateFromRows(state, experts.Rows(context), outcome, learner_step_loss);
}

AggregationRun RunAggregationAdaptive(
    const ExpertSet& experts, const std::vector<int>& contexts,
    const std::function<int(int, const Distribution&)>& outcome) {
  AggregationRun run;
  run.final_state = AggregatorState::Initial(static_cast<int>(experts.experts.size()));
  for (size_t t = 0; t < contexts.size(); ++t) {
    std::vector<Distribution> rows = experts.Rows(contexts[t]);
    AggregationStep step;
    step.context = contexts[t];
    step.posterior = Posterior(run.final_state);
    step.prediction = PredictFromRows(run.final_state, rows);
    step.outcome = outcome(static_cast<int>(t), step.prediction);
    run.final_state =
        UpdateFromRows(run.final_state, rows, step.outcome, &step.learner_loss);
    run.steps.push_back(std::move(step));
  }
  return run;
}

AggregationRun RunAggregation(const ExpertSet& experts,
                              const std::vector<int>& contexts,
                              const std::vector<int>& outcomes) {
  if (contexts.size() != outcomes.size()) {
    throw std::invalid_argument("contexts and outcomes differ in length");
  }
  return RunAggregationAdaptive(
      experts, contexts, [&](int t, const Distribution&) { return outcomes[t]; });
}

double RegretAgainstExperts(const AggregationRun& run) {
  const AggregatorState& s = run.final_state;
  double best = kInf;
  for (int i = 0; i < s.num_experts(); ++i) best = std::min(best, s.CumulativeLoss(i));
  if (std::isinf(s.learner_loss)) return kInf;
  return s.learner_loss - best;
}

std::string RunTraceCsv(const AggregationRun& run) {
  std::ostringstream os;
  os << std::setprecision(17);
  int n = run.final_state.num_experts();
  os << "step,context,outcome,learner_loss";
  for (int i = 0; i < n; ++i) os << ",q" << i + 1;
  os << "\n";
  for (size_t t = 0; t < run.steps.size(); ++t) {
    const AggregationStep& st = run.steps[t];
    os << t + 1 << "," << st.context << "," << st.outcome << "," << st.learner_loss;
    for (double q : st.posterior) os << "," << q;
    os << "\n";
  }
  return os.str();
}

double TotalVariation(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("support mismatch");
  double total = 0.0;
  for (size_t y = 0; y < p.size(); ++y) total += std::abs(p[y] - q[y]);
  return 0.5 * total;
}

}  // namespace ccelab
