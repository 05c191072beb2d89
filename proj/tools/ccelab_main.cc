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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ccelab/cli_harness.h"

namespace {

void AddCommonFlags(CLI::App* cmd, ccelab::ExperimentConfig& c) {
  cmd->add_option("--game", c.game, "fixture name, game file, or separation");
  cmd->add_option("--kind", c.kind, "repeated | kibitzer | alternative");
  cmd->add_option("--eps", c.eps, "accuracy in (0, 1/2]");
  cmd->add_option("--T", c.T, "certificate length");
  cmd->add_option("--K", c.K, "sample count override (0 = formula)");
  cmd->add_option("--seed", c.seed, "master seed")->required();
  cmd->add_option("--reps", c.reps, "repetitions");
  cmd->add_option("--mode", c.mode, "exact | witness | monte-carlo");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--producer", c.producer, "stage-nash | hedge | adversarial");
  cmd->add_option("--certificate", c.certificate, "certificate file");
  cmd->add_option("--nash-eps", c.nash_eps, "grid Nash tolerance for stage-nash");
  cmd->add_option("--horizon", c.horizon, "horizon override for the repeated game");
  cmd->add_option("--threshold", c.threshold, "verify threshold (default eps)");
  cmd->add_option("--samples", c.mc_samples, "Monte Carlo episodes");
  cmd->add_flag("--allow-witness", c.allow_witness,
                "fall back to witness mode when exact mode is refused");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccelab: CCE-to-Nash extraction experiments on Markov games"};
  app.require_subcommand(1);
  ccelab::ExperimentConfig config;
  std::string command;
  for (const char* name : {"build", "certify", "extract", "verify", "report"}) {
    CLI::App* sub = app.add_subcommand(name);
    AddCommonFlags(sub, config);
    sub->callback([&command, name] { command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ccelab::kExitUsage;
  }
  config.seed_set = true;
  return ccelab::RunCommand(command, config, std::cout, std::cerr);
}
