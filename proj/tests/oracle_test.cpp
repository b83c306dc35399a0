// Copyright 2026 The hypotlab Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "hypotlab/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "hypotlab/verify.hpp"

namespace hypotlab {
namespace {

using boost::multiprecision::cpp_rational;

cpp_rational as_rational(const ExactValue& v) {
  cpp_rational r(v.mantissa());
  const BigInt p = BigInt(1) << static_cast<unsigned>(std::llabs(v.exponent()));
  if (v.exponent() >= 0) return cpp_rational(r * p);
  return cpp_rational(r / p);
}

TEST(ExactValue, CanonicalForm) {
  const ExactValue two(2, 0);
  EXPECT_EQ(two.mantissa(), 1);
  EXPECT_EQ(two.exponent(), 1);
  const ExactValue zero(0, 17);
  EXPECT_EQ(zero.exponent(), 0);
  EXPECT_THROW(ExactValue(-1, 0), measurement_error);
  EXPECT_LT(ExactValue(3, -1), ExactValue(1, 1));
  EXPECT_EQ(abs_diff(ExactValue(3, 0), ExactValue(5, 0)), ExactValue(2, 0));
}

TEST(ExactSumOfSquares, Examples) {
  EXPECT_EQ(exact_sum_of_squares(3.0, 4.0), ExactValue(25, 0));
  EXPECT_EQ(exact_sum_of_squares(1.0, -1.0), ExactValue(2, 0));

  // (3/2)^2 + (2^-30)^2 = (9 * 2^58 + 1) * 2^-60.
  const ExactValue v = exact_sum_of_squares(1.5, std::ldexp(1.0, -30));
  EXPECT_EQ(v.mantissa(), (BigInt(9) << 58) + 1);
  EXPECT_EQ(v.exponent(), -60);
  const cpp_rational independent =
      cpp_rational(9, 4) + cpp_rational(1, BigInt(1) << 60);
  EXPECT_EQ(as_rational(v), independent);
}

TEST(ExactSumOfSquares, RejectsNonFinite) {
  EXPECT_THROW(exact_sum_of_squares(std::numeric_limits<double>::infinity(), 1.0), measurement_error);
  EXPECT_THROW(oracle_hypot(1.0f, std::numeric_limits<float>::quiet_NaN()), measurement_error);
}

TEST(ExactSumOfSquares, MatchesRationalArithmetic) {
  std::mt19937_64 eng(3);
  std::uniform_int_distribution<int> ex(-1074, 1023);
  for (int i = 0; i < 2000; ++i) {
    const double a = std::ldexp(static_cast<double>(eng() >> 11), ex(eng) - 53);
    const double b = std::ldexp(static_cast<double>(eng() >> 11), ex(eng) - 53);
    const cpp_rational ra = as_rational(exact_magnitude(a));
    const cpp_rational rb = as_rational(exact_magnitude(b));
    ASSERT_EQ(as_rational(exact_sum_of_squares(a, b)), ra * ra + rb * rb);
  }
}

TEST(CorrectlyRoundedSqrt, Examples) {
  const auto five = correctly_rounded_sqrt<double>(ExactValue(25, 0));
  EXPECT_EQ(five.result, 5.0);
  EXPECT_EQ(five.direction, RoundingDirection::exact);

  const auto zero = correctly_rounded_sqrt<double>(ExactValue{});
  EXPECT_EQ(zero.result, 0.0);
  EXPECT_EQ(zero.direction, RoundingDirection::exact);

  // sqrt(2): with r = R * 2^-52, the midpoints (2R -+ 1) * 2^-53 must
  // bracket sqrt(2), i.e. (2R-1)^2 < 2^107 < (2R+1)^2.
  const auto root2 = correctly_rounded_sqrt<double>(ExactValue(2, 0));
  EXPECT_FALSE(root2.is_tie);
  EXPECT_NE(root2.direction, RoundingDirection::exact);
  const BigInt r = static_cast<std::uint64_t>(std::ldexp(root2.result, 52));
  const BigInt target = BigInt(1) << 107;
  EXPECT_LT((2 * r - 1) * (2 * r - 1), target);
  EXPECT_GT((2 * r + 1) * (2 * r + 1), target);
  const bool below = r * r < (BigInt(2) << 104);
  EXPECT_EQ(root2.direction, below ? RoundingDirection::rounded_down : RoundingDirection::rounded_up);
}

TEST(CorrectlyRoundedSqrt, RuntimeFormatOverload) {
  const auto r32 = correctly_rounded_sqrt(ExactValue(2, 0), format_for(Precision::binary32));
  EXPECT_EQ(r32.result, static_cast<double>(std::sqrt(2.0f)));
  const auto r64 = correctly_rounded_sqrt(ExactValue(2, 0), format_for(Precision::binary64));
  EXPECT_EQ(r64.result, std::sqrt(2.0));
}

// Hardware sqrt is correctly rounded, including in the subnormal range, so
// it is an independent reference for the integer path.
template <class T>
class OracleAgainstHardware : public ::testing::Test {};
using Floats = ::testing::Types<float, double>;
TYPED_TEST_SUITE(OracleAgainstHardware, Floats);

template <class T>
T random_nonnegative(std::mt19937_64& eng) {
  using U = typename Format<T>::bits_type;
  for (;;) {
    const T x = std::fabs(std::bit_cast<T>(static_cast<U>(eng())));
    if (std::isfinite(x)) return x;
  }
}

TYPED_TEST(OracleAgainstHardware, SqrtOfSingleFloat) {
  using T = TypeParam;
  std::mt19937_64 eng(17);
  for (int i = 0; i < 100'000; ++i) {
    const T x = random_nonnegative<T>(eng);
    ASSERT_EQ(correctly_rounded_sqrt<T>(exact_magnitude(x)).result, std::sqrt(x)) << hex(x);
  }
}

TYPED_TEST(OracleAgainstHardware, RoundingOfProducts) {
  using T = TypeParam;
  using F = Format<T>;
  std::mt19937_64 eng(18);
  std::uniform_int_distribution<int> ex(F::min_exponent - F::precision_bits, F::max_exponent);
  for (int i = 0; i < 100'000; ++i) {
    // Products spread from deep subnormal to overflow.
    constexpr int frac = F::precision_bits - 1;
    const int e = ex(eng);
    const T a = std::ldexp(T(1) + std::ldexp(static_cast<T>(eng() >> (64 - frac)), -frac), e / 2);
    const T b = std::ldexp(T(1) + std::ldexp(static_cast<T>(eng() >> (64 - frac)), -frac), e - e / 2);
    const T want = a * b;
    const auto got = round_to_nearest<T>(exact_magnitude(a) * exact_magnitude(b));
    ASSERT_EQ(got.result, want) << hex(a) << " * " << hex(b);
  }
}

TEST(RoundToNearest, TiesGoToEven) {
  // 1 + 2^-53 sits halfway between 1 and 1 + 2^-52.
  const auto down = round_to_nearest<double>(ExactValue((BigInt(1) << 53) + 1, -53));
  EXPECT_EQ(down.result, 1.0);
  EXPECT_TRUE(down.is_tie);
  EXPECT_EQ(down.direction, RoundingDirection::rounded_down);
  const auto up = round_to_nearest<double>(ExactValue((BigInt(1) << 53) + 3, -53));
  EXPECT_EQ(up.result, 1.0 + std::ldexp(1.0, -51));
  EXPECT_TRUE(up.is_tie);
  EXPECT_EQ(up.direction, RoundingDirection::rounded_up);
}

TEST(RoundToNearest, OverflowAndSubnormals) {
  const auto big = round_to_nearest<float>(exact_magnitude(std::ldexp(1.0, 128)));
  EXPECT_EQ(big.result, std::numeric_limits<float>::infinity());
  EXPECT_EQ(big.direction, RoundingDirection::rounded_up);
  // 2^-1075 is half the smallest subnormal: a tie, rounded to even zero.
  const auto half = round_to_nearest<double>(ExactValue(1, -1075));
  EXPECT_EQ(half.result, 0.0);
  EXPECT_TRUE(half.is_tie);
  const auto three_halves = round_to_nearest<double>(ExactValue(3, -1075));
  EXPECT_EQ(three_halves.result, 2 * std::numeric_limits<double>::denorm_min());
}

TEST(OracleHypot, Examples) {
  EXPECT_EQ(oracle_hypot(3.0, 4.0), 5.0);
  const double m = std::numeric_limits<double>::max();
  EXPECT_EQ(oracle_hypot(m, m), std::numeric_limits<double>::infinity());
  // 2^-54 relative perturbation is below eps/4.
  EXPECT_EQ(oracle_hypot(1.0, std::ldexp(1.0, -27)), 1.0);
  const double d = std::numeric_limits<double>::denorm_min();
  EXPECT_EQ(oracle_hypot(3 * d, 4 * d), 5 * d);
  EXPECT_EQ(oracle_hypot(d, 0.0), d);
}

TEST(OracleHypot, SquaredNeighborOptimalBinary64) {
  const auto p = check_oracle_neighbors<double>(100'000, 31);
  EXPECT_TRUE(p.passed()) << p.reproducer;
}

TEST(OracleHypot, SquaredNeighborOptimalBinary32) {
  const auto p = check_oracle_neighbors<float>(100'000, 32);
  EXPECT_TRUE(p.passed()) << p.reproducer;
}

TEST(OracleHypot, ExactIffPythagorean) {
  // Triples are exact; nudging one leg by an ulp breaks exactness.
  std::mt19937_64 eng(33);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const auto t = detail::random_triple(eng, 26);
    const int s = std::uniform_int_distribution<int>(-900, 900)(eng);
    const double a = std::ldexp(static_cast<double>(t[0]), s);
    const double b = std::ldexp(static_cast<double>(t[1]), s);
    const auto v = correctly_rounded_sqrt<double>(exact_sum_of_squares(a, b));
    ASSERT_EQ(v.direction, RoundingDirection::exact);
    ASSERT_EQ(v.result, std::ldexp(static_cast<double>(t[2]), s));

    const double a2 = next_up(a);
    const auto w = correctly_rounded_sqrt<double>(exact_sum_of_squares(a2, b));
    const ExactValue er = exact_magnitude(w.result);
    EXPECT_EQ(w.direction == RoundingDirection::exact, er * er == exact_sum_of_squares(a2, b));
    ++checked;
  }
  EXPECT_EQ(checked, 500);
}

// Rounding the binary64 oracle to binary32 agrees with the binary32 oracle
// except where the binary64 rounding itself landed on a binary32 midpoint.
TEST(OracleHypot, CrossFormatConsistency) {
  std::mt19937_64 eng(34);
  int disagreements = 0, hazards = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    float a, b;
    do {
      a = std::bit_cast<float>(static_cast<std::uint32_t>(eng()));
      b = std::bit_cast<float>(static_cast<std::uint32_t>(eng()));
    } while (!std::isfinite(a) || !std::isfinite(b));
    const ExactValue v = exact_sum_of_squares(a, b);
    const float direct = correctly_rounded_sqrt<float>(v).result;
    const auto wide = correctly_rounded_sqrt<double>(v);
    const auto twice = round_to_nearest<float>(exact_magnitude(wide.result));
    if (twice.result != direct) {
      ++disagreements;
      if (twice.is_tie || wide.is_tie) ++hazards;
    }
  }
  EXPECT_EQ(disagreements, hazards);
}

TEST(OracleHypot, NaiveSumWithinEpsilon) {
  for (auto p : {check_naive_sum_bound<double>(100'000, 35), check_naive_sum_bound<float>(100'000, 36)}) {
    EXPECT_TRUE(p.passed()) << p.name << ' ' << p.reproducer;
  }
}

}  // namespace
}  // namespace hypotlab
