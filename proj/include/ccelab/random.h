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

#ifndef CCELAB_RANDOM_H_
#define CCELAB_RANDOM_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>

namespace ccelab {

using Rng = std::mt19937_64;

// Independent stream seed for (master seed, stream index).
uint64_t DeriveSeed(uint64_t master, uint64_t index);

// Uniform double in [0, 1) with 53 random bits; portable across libraries.
double Uniform01(Rng& rng);

// Uniform integer in [0, n).
int UniformInt(Rng& rng, int n);

// Inverse-CDF draw from a probability vector. Falls back to the last index
// with positive mass when rounding leaves the cumulative sum short of u.
int SampleIndex(std::span<const double> probs, Rng& rng);

// Number of workers for parallel loops: CCELAB_WORKERS if set, else 1.
int WorkerCount();

// Runs fn(i) for i in [0, n) over WorkerCount() threads. fn must only write
// to slots owned by index i.
void ParallelFor(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace ccelab

#endif  // CCELAB_RANDOM_H_
