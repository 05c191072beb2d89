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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ccelab/aggregation.h"
#include "test_util.h"

namespace ccelab {
namespace {

ExpertSet ConstantExperts(const std::vector<Distribution>& rows) {
  ExpertSet set;
  set.num_outcomes = static_cast<int>(rows[0].size());
  set.num_contexts = 1;
  for (const Distribution& r : rows) set.experts.push_back([r](int) { return r; });
  return set;
}

TEST_CASE("a single expert is copied exactly") {
  ExpertSet set = ConstantExperts({{0.25, 0.75}});
  AggregationRun run = RunAggregation(set, {0, 0, 0}, {1, 0, 1});
  for (const AggregationStep& s : run.steps) CHECK(s.prediction == Distribution{0.25, 0.75});
  CHECK(RegretAgainstExperts(run) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("an expert that assigned zero is eliminated") {
  ExpertSet set = ConstantExperts({{1.0, 0.0}, {0.5, 0.5}});
  AggregatorState s = AggregatorState::Initial(2);
  CHECK(Predict(s, set, 0) == Distribution{0.75, 0.25});
  s = Update(s, set, 0, 1);
  CHECK(Posterior(s) == Distribution{0.0, 1.0});
  CHECK(std::isinf(s.CumulativeLoss(0)));
  CHECK(s.zero_hits[0] == 1);
}

TEST_CASE("posterior is the softmax of negative losses") {
  ExpertSet set = ConstantExperts({{0.5, 0.5}, {0.25, 0.75}, {0.8, 0.2}});
  AggregatorState s = AggregatorState::Initial(3);
  for (int y : {1, 1, 0}) s = Update(s, set, 0, y);
  double l[3] = {-3 * std::log(0.5), -2 * std::log(0.75) - std::log(0.25),
                 -2 * std::log(0.2) - std::log(0.8)};
  double z = std::exp(-l[0]) + std::exp(-l[1]) + std::exp(-l[2]);
  Distribution q = Posterior(s);
  for (int i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(std::exp(-l[i]) / z));
}

TEST_CASE("every expert infinite keeps a defined posterior") {
  ExpertSet set = ConstantExperts({{1.0, 0.0}, {0.0, 1.0}});
  AggregationRun run = RunAggregation(set, {0, 0}, {0, 1});
  Distribution q = Posterior(run.final_state);
  CHECK(q[0] + q[1] == doctest::Approx(1.0));
}

TEST_CASE("log-loss regret stays below ln of the expert count") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Distribution> rows;
    for (int i = 0; i < 4; ++i) rows.push_back(testing::RandomDyadicRow(rng, 3));
    for (Distribution& r : rows) {
      for (double& x : r) x = 0.9 * x + 0.1 / 3;
    }
    ExpertSet set = ConstantExperts(rows);
    std::vector<int> contexts(64, 0);
    AggregationRun run = RunAggregationAdaptive(set, contexts, [&](int, const Distribution& q) {
      return static_cast<int>(std::min_element(q.begin(), q.end()) - q.begin());
    });
    CHECK(RegretAgainstExperts(run) <= std::log(4.0) + 1e-9);
  }
}

TEST_CASE("trace CSV and total variation") {
  ExpertSet set = ConstantExperts({{0.5, 0.5}, {0.25, 0.75}});
  AggregationRun run = RunAggregation(set, {0}, {1});
  std::string csv = RunTraceCsv(run);
  CHECK(csv.rfind("step,context,outcome,learner_loss,q1,q2\n", 0) == 0);
  CHECK(csv.find("1,0,1,") != std::string::npos);
  CHECK(TotalVariation({0.5, 0.5}, {0.25, 0.75}) == 0.25);
  CHECK_THROWS(TotalVariation({1.0}, {0.5, 0.5}));
  CHECK_THROWS(Update(AggregatorState::Initial(2), set, 0, 5));
}

}  // namespace
}  // namespace ccelab
