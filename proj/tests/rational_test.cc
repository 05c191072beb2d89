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

#include "ccelab/rational.h"

namespace ccelab {
namespace {

TEST_CASE("powers of two and dyadic detection") {
  CHECK(Pow2(3) == 8);
  CHECK(Pow2(-2) == Rational(1, 4));
  CHECK(IsDyadic(Rational(3, 8)));
  CHECK_FALSE(IsDyadic(Rational(1, 3)));
  CHECK(DyadicExponent(Rational(5, 16)) == 4);
  CHECK_THROWS_AS(DyadicExponent(Rational(1, 6)), std::invalid_argument);
}

TEST_CASE("bit length counts integer and fractional bits") {
  CHECK(BitLength(Rational(0)) == 1);
  CHECK(BitLength(Rational(1)) == 1);
  CHECK(BitLength(Rational(5, 8)) == 3);
  CHECK(BitLength(Rational(-5, 8)) == 3);
  CHECK(BitLength(Rational(3, 2)) == 2);
  CHECK(FractionalBits(Rational(7, 32)) == 5);
  CHECK(FractionalBits(Rational(1, 3)) == -1);
}

TEST_CASE("truncation toward zero") {
  CHECK(TruncateTowardZero(Rational(7, 10), 3) == Rational(5, 8));
  CHECK(TruncateTowardZero(Rational(-7, 10), 3) == Rational(-5, 8));
  CHECK(TruncateTowardZero(Rational(1, 2), 1) == Rational(1, 2));
  CHECK(TruncateTowardZero(Rational(1, 3), 4) == Rational(5, 16));
}

TEST_CASE("string round trip") {
  for (const Rational& r : {Rational(0), Rational(3, 8), Rational(-7, 1024), Rational(2, 3),
                            Rational(5)}) {
    CHECK(ParseRational(ToString(r)) == r);
  }
  CHECK(ToString(Rational(3, 8)) == "3/2^3");
  CHECK(ToString(Rational(2, 3)) == "2/3");
  CHECK(ParseRational("12") == 12);
  CHECK_THROWS(ParseRational("1/0"));
  CHECK_THROWS(ParseRational("x/2"));
}

TEST_CASE("exact doubles and log helpers") {
  CHECK(ToDouble(Rational(3, 8)) == 0.375);
  CHECK(ToDouble(Rational(1, 3)) == doctest::Approx(1.0 / 3));
  CHECK(CeilLog2Inverse(0.5) == 1);
  CHECK(CeilLog2Inverse(0.25) == 2);
  CHECK(CeilLog2Inverse(0.1) == 4);
  CHECK(CeilLog2Inverse(0.01) == 7);
  CHECK(CeilLog2(1) == 0);
  CHECK(CeilLog2(4) == 2);
  CHECK(CeilLog2(5) == 3);
}

}  // namespace
}  // namespace ccelab
