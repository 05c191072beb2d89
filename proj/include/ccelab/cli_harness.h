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

#ifndef CCELAB_CLI_HARNESS_H_
#define CCELAB_CLI_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ccelab/games.h"

namespace ccelab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitUsage = 2;

struct ExperimentConfig {
  // Fixture name, path to a normal-form game file, or "separation" for verify.
  std::string game;
  std::string kind = "repeated";
  double eps = 0.1;
  int T = 1;
  // 0 uses the sample-count formula.
  int64_t K = 0;
  uint64_t seed = 0;
  bool seed_set = false;
  int reps = 1;
  // exact | witness | monte-carlo
  std::string mode = "exact";
  std::string out = ".";
  // stage-nash | hedge | adversarial
  std::string producer = "stage-nash";
  // Optional certificate file; overrides the producer.
  std::string certificate;
  // Grid Nash tolerance for the stage-nash producer.
  double nash_eps = 0.0;
  int horizon = 0;
  // Verify threshold; negative means eps.
  double threshold = -1.0;
  bool allow_witness = false;
  int64_t mc_samples = 20000;
};

// Loads a fixture by name or a normal-form game file. Throws std::runtime_error
// for missing files.
NormalFormGame LoadGame(const std::string& source);

// command is one of build, certify, extract, verify, report. Returns the
// process exit code; diagnostics go to `err`.
int RunCommand(const std::string& command, const ExperimentConfig& config,
               std::ostream& out, std::ostream& err);

}  // namespace ccelab

#endif  // CCELAB_CLI_HARNESS_H_
