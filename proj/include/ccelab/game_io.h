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

#ifndef CCELAB_GAME_IO_H_
#define CCELAB_GAME_IO_H_

#include <string>

#include "ccelab/games.h"

namespace ccelab {

// One JSON document per game. Exact numbers are strings in "num/2^k" form
// (or "num/den" for non-dyadic rationals). Joint actions are flattened
// row-major, player 0 most significant.
std::string SerializeGame(const NormalFormGame& game);
std::string SerializeGame(const MarkovGame& game);

NormalFormGame DeserializeNormalFormGame(const std::string& text);
MarkovGame DeserializeMarkovGame(const std::string& text);

// "normal-form" or "markov"; throws on malformed documents.
std::string GameKind(const std::string& text);

// Header a1..am,u1..um; one row per profile, actions 1-based.
std::string PayoffTableCsv(const NormalFormGame& game);

// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string ContentHash(const std::string& bytes);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace ccelab

#endif  // CCELAB_GAME_IO_H_
