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

#include "ccelab/game_io.h"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ccelab {

using json = nlohmann::json;

namespace {

constexpr char kFormat[] = "ccelab-game/1";

json DistToJson(const std::vector<StateProb>& dist) {
  json out = json::array();
  for (const StateProb& sp : dist) out.push_back({sp.state, ToString(sp.prob)});
  return out;
}

std::vector<StateProb> DistFromJson(const json& j) {
  std::vector<StateProb> out;
  for (const json& e : j) {
    out.push_back({e.at(0).get<int>(), ParseRational(e.at(1).get<std::string>())});
  }
  return out;
}

json Parse(const std::string& text) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object() || doc.value("format", "") != kFormat) {
      throw std::invalid_argument("not a ccelab game document");
    }
    return doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed game document: ") +
                                e.what());
  }
}

}  // namespace

std::string SerializeGame(const NormalFormGame& game) {
  json doc;
  doc["format"] = kFormat;
  doc["kind"] = "normal-form";
  doc["players"] = game.num_players();
  doc["actions"] = game.num_actions();
  doc["bit_budget"] = game.bit_budget();
  json tensors = json::array();
  for (int i = 0; i < game.num_players(); ++i) {
    json t = json::array();
    for (int64_t p = 0; p < game.num_profiles(); ++p) {
      t.push_back(ToString(game.Payoff(i, p)));
    }
    tensors.push_back(std::move(t));
  }
  doc["payoffs"] = std::move(tensors);
  return doc.dump(1) + "\n";
}

std::string SerializeGame(const MarkovGame& game) {
  json doc;
  doc["format"] = kFormat;
  doc["kind"] = "markov";
  doc["states"] = game.num_states();
  doc["horizon"] = game.horizon();
  doc["actions"] = game.action_counts();
  doc["initial"] = DistToJson(game.initial());
  json transitions = json::array();
  json rewards = json::array();
  for (int h = 0; h < game.horizon(); ++h) {
    json th = json::array();
    json rh = json::array();
    for (int s = 0; s < game.num_states(); ++s) {
      json ts = json::array();
      json rs = json::array();
      for (int64_t j = 0; j < game.num_joint_actions(); ++j) {
        ts.push_back(DistToJson(game.Transition(h, s, j)));
        json r = json::array();
        for (int i = 0; i < game.num_players(); ++i) {
          r.push_back(ToString(game.Reward(h, s, j, i)));
        }
        rs.push_back(std::move(r));
      }
      th.push_back(std::move(ts));
      rh.push_back(std::move(rs));
    }
    transitions.push_back(std::move(th));
    rewards.push_back(std::move(rh));
  }
  doc["transitions"] = std::move(transitions);
  doc["rewards"] = std::move(rewards);
  return doc.dump(1) + "\n";
}

std::string GameKind(const std::string& text) {
  return Parse(text).at("kind").get<std::string>();
}

NormalFormGame DeserializeNormalFormGame(const std::string& text) {
  json doc = Parse(text);
  try {
    if (doc.at("kind") != "normal-form") {
      throw std::invalid_argument("document is not a normal-form game");
    }
    int m = doc.at("players").get<int>();
    int n = doc.at("actions").get<int>();
    std::vector<std::vector<Rational>> payoffs;
    for (const json& t : doc.at("payoffs")) {
      std::vector<Rational> tensor;
      for (const json& x : t) tensor.push_back(ParseRational(x.get<std::string>()));
      payoffs.push_back(std::move(tensor));
    }
    return NormalFormGame(m, n, std::move(payoffs),
                          doc.at("bit_budget").get<int>());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed game document: ") +
                                e.what());
  }
}

MarkovGame DeserializeMarkovGame(const std::string& text) {
  json doc = Parse(text);
  try {
    if (doc.at("kind") != "markov") {
      throw std::invalid_argument("document is not a Markov game");
    }
    MarkovGame game(doc.at("states").get<int>(), doc.at("horizon").get<int>(),
                    doc.at("actions").get<std::vector<int>>());
    game.SetInitial(DistFromJson(doc.at("initial")));
    const json& transitions = doc.at("transitions");
    const json& rewards = doc.at("rewards");
    for (int h = 0; h < game.horizon(); ++h) {
      for (int s = 0; s < game.num_states(); ++s) {
        for (int64_t j = 0; j < game.num_joint_actions(); ++j) {
          game.SetTransition(h, s, j, DistFromJson(transitions.at(h).at(s).at(j)));
          const json& r = rewards.at(h).at(s).at(j);
          for (int i = 0; i < game.num_players(); ++i) {
            game.SetReward(h, s, j, i, ParseRational(r.at(i).get<std::string>()));
          }
        }
      }
    }
    return game;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed game document: ") +
                                e.what());
  }
}

std::string PayoffTableCsv(const NormalFormGame& game) {
  std::ostringstream os;
  int m = game.num_players();
  for (int i = 0; i < m; ++i) os << "a" << i + 1 << ",";
  for (int i = 0; i < m; ++i) os << "u" << i + 1 << (i + 1 < m ? "," : "\n");
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    JointAction a = game.ProfileFromIndex(p);
    for (int x : a) os << x + 1 << ",";
    for (int i = 0; i < m; ++i) {
      os << ToString(game.Payoff(i, p)) << (i + 1 < m ? "," : "\n");
    }
  }
  return os.str();
}

std::string ContentHash(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace ccelab
