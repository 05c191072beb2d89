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

#include "ccelab/extraction.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "ccelab/equilibria.h"
#include "json.hpp"

namespace ccelab {

namespace {

const PolicyProgram& MemberPolicy(const SparseCceCertificate& c, int t, int player) {
  return c.members[t].players.at(player);
}

const MarkovPolicy& MarkovMember(const SparseCceCertificate& c, int t, int player) {
  const MarkovPolicy* p = MemberPolicy(c, t, player).markov();
  if (p == nullptr) throw std::invalid_argument("certificate member is not Markov");
  return *p;
}

using RowLookup = std::function<std::span<const double>(const JointAction&)>;

// Rhat(k) = sum_p count_p / K * R_m(p, k).
std::vector<double> RhatFromCounts(const KibitzerGameSpec& spec,
                                   const std::map<int64_t, int64_t>& counts,
                                   int64_t samples, const RowLookup& row) {
  int m = spec.num_players();
  int n0 = spec.num_actions();
  const NormalFormGame& g = spec.source;
  std::vector<double> rhat(spec.kibitzer_actions(), 0.0);
  JointAction full(m + 1);
  for (const auto& [index, count] : counts) {
    JointAction a = g.ProfileFromIndex(index);
    std::span<const double> span_a = row(a);
    std::vector<double> at_profile(span_a.begin(), span_a.end());
    std::copy(a.begin(), a.end(), full.begin());
    double w = static_cast<double>(count) / static_cast<double>(samples);
    for (int k = 0; k < spec.kibitzer_actions(); ++k) {
      full[m] = k;
      JointAction advised = AdvisedProfile(full, n0);
      std::vector<double> at_advised = at_profile;
      if (advised != a) {
        std::span<const double> span_b = row(advised);
        at_advised.assign(span_b.begin(), span_b.end());
      }
      rhat[k] += w * KibitzerRewardValue(spec, full, m, at_profile, at_advised);
    }
  }
  return rhat;
}

nlohmann::json DistributionJson(const Distribution& d) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : d) out.push_back(x);
  return out;
}

}  // namespace

std::string CertificateSourceName(CertificateSource source) {
  switch (source) {
    case CertificateSource::kExactStageNash:
      return "exact-stage-nash";
    case CertificateSource::kLearnerProduced:
      return "learner-produced";
    case CertificateSource::kAdversarialFixture:
      return "adversarial-fixture";
  }
  return "unknown";
}

CertificateSource ParseCertificateSource(const std::string& name) {
  if (name == "exact-stage-nash") return CertificateSource::kExactStageNash;
  if (name == "learner-produced") return CertificateSource::kLearnerProduced;
  if (name == "adversarial-fixture") return CertificateSource::kAdversarialFixture;
  throw std::invalid_argument("unknown certificate source: " + name);
}

DistributionalPolicy SparseCceCertificate::Mixture() const {
  return DistributionalPolicy::Uniform(members);
}

void ValidateCertificate(const MarkovGame& game, const SparseCceCertificate& certificate) {
  if (certificate.members.empty()) throw std::invalid_argument("empty certificate");
  for (const ProductPolicy& member : certificate.members) CheckDimensions(game, member);
}

QhatTracker::QhatTracker(const SparseCceCertificate& certificate, int player)
    : certificate_(&certificate),
      player_(player),
      state_(AggregatorState::Initial(certificate.size())) {}

Distribution QhatTracker::Predict(const OwnHistory& history, int state) {
  rows_.clear();
  for (int t = 0; t < certificate_->size(); ++t) {
    const PolicyProgram& p = MemberPolicy(*certificate_, t, player_);
    if (!p.has_distribution()) {
      throw std::invalid_argument("certificate member exposes no distribution");
    }
    rows_.push_back(p.Evaluate(history, state));
  }
  return PredictFromRows(state_, rows_);
}

void QhatTracker::Observe(int action) {
  if (rows_.empty()) throw std::logic_error("Observe without Predict");
  state_ = UpdateFromRows(state_, rows_, action);
  rows_.clear();
}

Distribution ComputeQhat(const SparseCceCertificate& certificate, int player,
                         const OwnHistory& history, int state) {
  QhatTracker tracker(certificate, player);
  OwnHistory prefix;
  for (const OwnStep& step : history) {
    tracker.Predict(prefix, step.state);
    tracker.Observe(step.action);
    prefix.push_back(step);
  }
  return tracker.Predict(history, state);
}

PolicyProgram BuildDeviationPolicyRepeated(const MarkovGame& game,
                                           const SparseCceCertificate& certificate,
                                           int player) {
  int n0 = game.num_actions(0);
  if (game.num_players() != 2 || game.num_actions(1) != n0 ||
      game.num_states() != n0 * n0 + 1 || game.horizon() % 2 != 0) {
    throw std::invalid_argument("not a repeated-game construction");
  }
  ValidateCertificate(game, certificate);
  int other = 1 - player;
  for (int t = 0; t < certificate.size(); ++t) MarkovMember(certificate, t, other);
  SparseCceCertificate cert = certificate;
  auto evaluator = [game, cert, player, other, n0](const OwnHistory& history,
                                                   int state) -> Distribution {
    int h = static_cast<int>(history.size());
    if (!IsStageStep(h)) return PointMass(n0, 0);
    int T = cert.size();
    AggregatorState agg = AggregatorState::Initial(T);
    std::vector<Distribution> rows(T);
    for (int g = 0; g < h; g += 2) {
      int next = history[g + 1].state - 1;
      if (next < 0) throw std::invalid_argument("history does not reveal actions");
      int observed = other == 0 ? next / n0 : next % n0;
      for (int t = 0; t < T; ++t) {
        rows[t] = MarkovMember(cert, t, other).RowVector(g, history[g].state);
      }
      agg = UpdateFromRows(agg, rows, observed);
    }
    for (int t = 0; t < T; ++t) {
      rows[t] = MarkovMember(cert, t, other).RowVector(h, state);
    }
    Distribution q = PredictFromRows(agg, rows);
    std::vector<double> value(n0, 0.0);
    JointAction joint(2);
    for (int a = 0; a < n0; ++a) {
      joint[player] = a;
      for (int b = 0; b < n0; ++b) {
        if (q[b] == 0.0) continue;
        joint[other] = b;
        value[a] += q[b] * game.RewardValue(h, state, game.JointIndex(joint), player);
      }
    }
    return PointMass(n0, ArgmaxLowest(value));
  };
  return PolicyProgram::Procedural(n0, static_cast<int64_t>(certificate.size()) *
                                           game.horizon() * n0,
                                   evaluator);
}

Algorithm1Result Algorithm1Extract(const NormalFormGame& game,
                                   const MarkovGame& repeated,
                                   const SparseCceCertificate& certificate,
                                   double threshold) {
  ValidateCertificate(repeated, certificate);
  Algorithm1Result result;
  for (int t = 0; t < certificate.size(); ++t) {
    for (int h = 0; h < repeated.horizon(); ++h) {
      if (!IsStageStep(h)) continue;
      std::vector<Distribution> profile;
      for (int i = 0; i < 2; ++i) {
        profile.push_back(MarkovMember(certificate, t, i).RowVector(h, 0));
      }
      ++result.scanned;
      double gap = MaxNashGap(game, profile);
      if (gap <= threshold) {
        result.found = true;
        result.member = t;
        result.step = h;
        result.profile = std::move(profile);
        result.gap = gap;
        return result;
      }
    }
  }
  return result;
}

double Algorithm2Delta(double eps, int horizon) { return eps / (6.0 * horizon); }

int64_t Algorithm2SampleCount(int m, int n0, double eps, int horizon) {
  double delta = Algorithm2Delta(eps, horizon);
  return static_cast<int64_t>(
      std::ceil(4.0 * std::log(static_cast<double>(m) * n0 / delta) / (eps * eps)));
}

std::vector<JointAction> RecoverProfiles(const KibitzerGameSpec& spec,
                                         const OwnHistory& history) {
  std::vector<JointAction> out;
  out.reserve(history.size());
  for (const OwnStep& step : history) {
    out.push_back(DecodeProfileFromReward(spec, step.reward));
  }
  return out;
}

OwnHistory ReconstructHistory(const KibitzerGameSpec& spec,
                              const std::vector<JointAction>& profiles, int player) {
  OwnHistory out;
  out.reserve(profiles.size());
  for (const JointAction& full : profiles) {
    out.push_back({0, full[player], KibitzerRewards(spec, full)[player]});
  }
  return out;
}

std::map<int64_t, int64_t> SampleProfileCounts(const KibitzerGameSpec& spec,
                                               const std::vector<Distribution>& qhats,
                                               int64_t samples, Rng& rng) {
  int m = spec.num_players();
  int n0 = spec.num_actions();
  std::map<int64_t, int64_t> counts;
  for (int64_t k = 0; k < samples; ++k) {
    int64_t index = 0;
    for (int j = 0; j < m; ++j) index = index * n0 + SampleIndex(qhats[j], rng);
    ++counts[index];
  }
  return counts;
}

int KibitzerBestResponse(const KibitzerGameSpec& spec,
                         const std::vector<Distribution>& qhats, int player) {
  const NormalFormGame& g = spec.source;
  int m = spec.num_players();
  std::vector<double> value(spec.num_actions(), 0.0);
  for (int64_t p = 0; p < g.num_profiles(); ++p) {
    JointAction a = g.ProfileFromIndex(p);
    double w = 1.0;
    for (int j = 0; j < m && w > 0.0; ++j) {
      if (j != player) w *= qhats[j][a[j]];
    }
    if (w > 0.0) value[a[player]] += w * g.PayoffValue(player, p);
  }
  return ArgmaxLowest(value);
}

PolicyProgram BuildKibitzerDeviation(const KibitzerGameSpec& spec,
                                     const SparseCceCertificate& certificate,
                                     int player, int64_t samples) {
  int m = spec.num_players();
  if (player < 0 || player > m) throw std::out_of_range("player");
  if (certificate.members.empty()) throw std::invalid_argument("empty certificate");
  auto qhats_for = [spec, certificate, m](const OwnHistory& history, int state) {
    std::vector<JointAction> profiles = RecoverProfiles(spec, history);
    std::vector<Distribution> qhats;
    for (int j = 0; j < m; ++j) {
      qhats.push_back(
          ComputeQhat(certificate, j, ReconstructHistory(spec, profiles, j), state));
    }
    return qhats;
  };
  int64_t size = static_cast<int64_t>(certificate.size()) * spec.horizon;
  if (player < m) {
    int n0 = spec.num_actions();
    return PolicyProgram::Procedural(
        n0, size, [spec, qhats_for, player, n0](const OwnHistory& history, int state) {
          return PointMass(n0, KibitzerBestResponse(spec, qhats_for(history, state), player));
        });
  }
  if (samples <= 0) {
    samples = Algorithm2SampleCount(m, spec.num_actions(), spec.eps, spec.horizon);
  }
  return PolicyProgram::ProceduralSampler(
      spec.kibitzer_actions(), size,
      [spec, qhats_for, samples](const OwnHistory& history, int state, Rng& rng) {
        std::vector<Distribution> qhats = qhats_for(history, state);
        std::map<int64_t, int64_t> counts = SampleProfileCounts(spec, qhats, samples, rng);
        const NormalFormGame& g = spec.source;
        std::vector<double> rhat =
            RhatFromCounts(spec, counts, samples, [&g](const JointAction& a) {
              return g.PayoffValueRow(g.ProfileIndex(a));
            });
        return ArgmaxLowest(rhat);
      });
}

DeviationPolicyBundle BuildKibitzerDeviations(const KibitzerGameSpec& spec,
                                              const SparseCceCertificate& certificate,
                                              int64_t samples) {
  DeviationPolicyBundle bundle;
  int m = spec.num_players();
  bundle.samples = samples > 0 ? samples
                               : Algorithm2SampleCount(m, spec.num_actions(), spec.eps,
                                                       spec.horizon);
  for (int i = 0; i <= m; ++i) {
    bundle.policies.push_back(BuildKibitzerDeviation(spec, certificate, i, bundle.samples));
  }
  return bundle;
}

void QueryLedger::Add(const std::string& name, int64_t count) {
  for (auto& [key, value] : items) {
    if (key == name) {
      value += count;
      return;
    }
  }
  items.emplace_back(name, count);
}

int64_t QueryLedger::Get(const std::string& name) const {
  for (const auto& [key, value] : items) {
    if (key == name) return value;
  }
  return 0;
}

int64_t QueryLedger::ItemSum() const {
  int64_t sum = 0;
  for (const auto& item : items) sum += item.second;
  return sum;
}

Algorithm2Result Algorithm2Extract(const KibitzerGameSpec& spec, PayoffOracle& oracle,
                                   const SparseCceCertificate& certificate,
                                   uint64_t seed, const Algorithm2Options& options) {
  int m = spec.num_players();
  int n0 = spec.num_actions();
  int H = spec.horizon;
  if (certificate.members.empty()) throw std::invalid_argument("empty certificate");
  for (const ProductPolicy& member : certificate.members) {
    if (static_cast<int>(member.players.size()) != m + 1) {
      throw std::invalid_argument("certificate is not over the kibitzer game");
    }
  }
  Algorithm2Result result;
  result.samples = options.samples > 0 ? options.samples
                                       : Algorithm2SampleCount(m, n0, spec.eps, H);
  result.threshold = 14.0 * (m + 1) * spec.eps / H;
  result.queries.Add("rhat_estimation", 0);
  result.queries.Add("reward_realization", 0);
  int64_t start = oracle.query_count();

  Rng rng(seed);
  int t_star = UniformInt(rng, certificate.size());
  result.member = t_star;
  std::vector<QhatTracker> trackers;
  for (int j = 0; j < m; ++j) trackers.emplace_back(certificate, j);
  std::vector<OwnHistory> histories(m);

  for (int h = 0; h < H; ++h) {
    const int s = 0;
    Algorithm2Step step;
    step.step = h;
    for (int j = 0; j < m; ++j) {
      step.posteriors.push_back(trackers[j].posterior());
      step.qhats.push_back(trackers[j].Predict(histories[j], s));
    }
    step.sample_counts = SampleProfileCounts(spec, step.qhats, result.samples, rng);
    int64_t before = oracle.query_count();
    step.rhat = RhatFromCounts(spec, step.sample_counts, result.samples,
                               [&oracle](const JointAction& a) {
                                 return oracle.QueryValues(a);
                               });
    result.queries.Add("rhat_estimation", oracle.query_count() - before);
    step.kibitzer_action = ArgmaxLowest(step.rhat);
    for (int j = 0; j < m; ++j) {
      step.played.push_back(MemberPolicy(certificate, t_star, j).Sample(histories[j], s, rng));
    }
    step.played.push_back(step.kibitzer_action);
    step.check_value = step.rhat[step.kibitzer_action];
    step.passed = step.check_value <= result.threshold;
    if (step.passed && !result.success) {
      result.success = true;
      result.success_step = h;
      result.profile = step.qhats;
    }
    bool stop = step.passed && options.stop_on_pass;

    if (!stop) {
      before = oracle.query_count();
      JointAction a(step.played.begin(), step.played.begin() + m);
      JointAction advised = AdvisedProfile(step.played, n0);
      std::vector<Rational> rewards(m + 1);
      for (int p = 0; p <= m; ++p) {
        std::span<const Rational> row = oracle.Query(a);
        std::vector<Rational> at_profile(row.begin(), row.end());
        row = oracle.Query(advised);
        std::vector<Rational> at_advised(row.begin(), row.end());
        rewards[p] =
            KibitzerRewardsFromPayoffs(spec, step.played, at_profile, at_advised)[p];
      }
      result.queries.Add("reward_realization", oracle.query_count() - before);
      for (int j = 0; j < m; ++j) {
        trackers[j].Observe(step.played[j]);
        histories[j].push_back({s, step.played[j], rewards[j]});
      }
      result.trajectory.states.push_back(s);
      result.trajectory.actions.push_back(step.played);
      result.trajectory.rewards.push_back(rewards);
    }
    result.transcript.push_back(std::move(step));
    if (stop) break;
  }
  result.queries.total = oracle.query_count() - start;
  return result;
}

std::string TranscriptJson(const Algorithm2Result& result) {
  nlohmann::json doc;
  doc["success"] = result.success;
  doc["success_step"] = result.success_step;
  doc["member"] = result.member;
  doc["samples"] = result.samples;
  doc["threshold"] = result.threshold;
  nlohmann::json steps = nlohmann::json::array();
  for (const Algorithm2Step& st : result.transcript) {
    nlohmann::json rec;
    rec["h"] = st.step + 1;
    rec["posteriors"] = nlohmann::json::array();
    for (const Distribution& d : st.posteriors) rec["posteriors"].push_back(DistributionJson(d));
    rec["qhats"] = nlohmann::json::array();
    for (const Distribution& d : st.qhats) rec["qhats"].push_back(DistributionJson(d));
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [index, count] : st.sample_counts) counts[std::to_string(index)] = count;
    rec["sample_counts"] = counts;
    rec["rhat"] = DistributionJson(st.rhat);
    rec["kibitzer_action"] = st.kibitzer_action;
    rec["played"] = st.played;
    rec["check_value"] = st.check_value;
    rec["passed"] = st.passed;
    steps.push_back(rec);
  }
  doc["steps"] = steps;
  nlohmann::json queries = nlohmann::json::object();
  for (const auto& [name, count] : result.queries.items) queries[name] = count;
  queries["total"] = result.queries.total;
  doc["queries"] = queries;
  return doc.dump(1) + "\n";
}

QueryLedger QueryAccounting(const std::vector<Algorithm2Result>& runs,
                            int64_t producer_queries, int64_t oracle_total) {
  QueryLedger ledger;
  ledger.Add("producer", producer_queries);
  for (const Algorithm2Result& run : runs) {
    for (const auto& [name, count] : run.queries.items) ledger.Add(name, count);
  }
  ledger.total = oracle_total;
  return ledger;
}

}  // namespace ccelab
