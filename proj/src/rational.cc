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

#include "ccelab/rational.h"

#include <cmath>
#include <stdexcept>

namespace ccelab {

namespace mp = boost::multiprecision;

namespace {

int BitCount(const BigInt& x) {
  if (x == 0) return 0;
  BigInt a = x < 0 ? BigInt(-x) : x;
  return static_cast<int>(mp::msb(a)) + 1;
}

bool IsPowerOfTwo(const BigInt& x) {
  return x > 0 && (x & (x - 1)) == 0;
}

BigInt ParseInteger(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("bad integer: " + s);
  for (size_t j = i; j < s.size(); ++j) {
    if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("bad integer: " + s);
  }
  return BigInt(s);
}

}  // namespace

Rational Pow2(int e) {
  BigInt one = 1;
  if (e >= 0) return Rational(one << e);
  return Rational(one, one << (-e));
}

bool IsDyadic(const Rational& r) {
  return IsPowerOfTwo(mp::denominator(r));
}

int DyadicExponent(const Rational& r) {
  const BigInt& d = mp::denominator(r);
  if (!IsPowerOfTwo(d)) throw std::invalid_argument("value is not dyadic");
  return static_cast<int>(mp::msb(d));
}

int FractionalBits(const Rational& r) {
  if (!IsDyadic(r)) return -1;
  return DyadicExponent(r);
}

int BitLength(const Rational& r) {
  if (r == 0) return 1;
  if (!IsDyadic(r)) {
    return BitCount(mp::numerator(r)) + BitCount(mp::denominator(r));
  }
  int k = DyadicExponent(r);
  BigInt num = mp::numerator(r);
  if (num < 0) num = -num;
  BigInt integer_part = num >> k;
  int bits = k + BitCount(integer_part);
  return bits == 0 ? 1 : bits;
}

Rational TruncateTowardZero(const Rational& r, int bits) {
  BigInt num = mp::numerator(r);
  BigInt den = mp::denominator(r);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt scaled = (num << bits) / den;
  Rational out(scaled, BigInt(1) << bits);
  return negative ? Rational(-out) : out;
}

double ToDouble(const Rational& r) {
  if (IsDyadic(r)) {
    int k = DyadicExponent(r);
    double num = mp::numerator(r).convert_to<double>();
    return std::ldexp(num, -k);
  }
  return r.convert_to<double>();
}

std::string ToString(const Rational& r) {
  const BigInt& num = mp::numerator(r);
  if (IsDyadic(r)) {
    return num.str() + "/2^" + std::to_string(DyadicExponent(r));
  }
  return num.str() + "/" + mp::denominator(r).str();
}

Rational ParseRational(const std::string& text) {
  size_t slash = text.find('/');
  if (slash == std::string::npos) return Rational(ParseInteger(text));
  BigInt num = ParseInteger(text.substr(0, slash));
  std::string rest = text.substr(slash + 1);
  if (rest.rfind("2^", 0) == 0) {
    BigInt k = ParseInteger(rest.substr(2));
    if (k < 0 || k > 100000) throw std::invalid_argument("bad exponent: " + text);
    return Rational(num, BigInt(1) << k.convert_to<int>());
  }
  BigInt den = ParseInteger(rest);
  if (den == 0) throw std::invalid_argument("zero denominator: " + text);
  return Rational(num, den);
}

int CeilLog2Inverse(double eps) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  int c = 0;
  while (std::ldexp(1.0, -c) > eps) ++c;
  return c;
}

int CeilLog2(long long x) {
  if (x < 1) throw std::invalid_argument("CeilLog2 needs x >= 1");
  int c = 0;
  while ((1LL << c) < x) ++c;
  return c;
}

}  // namespace ccelab
