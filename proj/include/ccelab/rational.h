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

#ifndef CCELAB_RATIONAL_H_
#define CCELAB_RATIONAL_H_

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ccelab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 2^e for any integer e, exactly.
Rational Pow2(int e);

// True when the denominator is a power of two.
bool IsDyadic(const Rational& r);

// k such that the reduced denominator equals 2^k. Throws on non-dyadic input.
int DyadicExponent(const Rational& r);

// Number of binary digits from the leading integer bit down to the last
// fractional bit (sign ignored, zero counts as one bit). For non-dyadic
// values this is the bit length of numerator plus denominator.
int BitLength(const Rational& r);

// Fractional bits needed to write r exactly, or -1 when r is not dyadic.
int FractionalBits(const Rational& r);

// floor(|r| * 2^bits) / 2^bits with the sign of r restored.
Rational TruncateTowardZero(const Rational& r, int bits);

double ToDouble(const Rational& r);

// Dyadic values print as "num/2^k", other rationals as "num/den".
std::string ToString(const Rational& r);

// Accepts "n", "n/2^k" and "n/d". Throws std::invalid_argument otherwise.
Rational ParseRational(const std::string& text);

// Smallest c >= 0 with 2^-c <= eps, i.e. ceil(log2(1/eps)) computed exactly.
int CeilLog2Inverse(double eps);

// ceil(log2(x)) for x >= 1; 0 for x == 1.
int CeilLog2(long long x);

}  // namespace ccelab

#endif  // CCELAB_RATIONAL_H_
