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

// Exact, correctly rounded sqrt(a^2 + b^2).
//
// a^2 + b^2 is carried exactly as an arbitrary-precision integer times a
// power of two. Its square root is taken in the integer domain with two
// guard bits below the target ulp; the integer remainder (plus any bits
// shifted out) forms the sticky bit. Round-to-nearest-even is then decided
// without any floating-point arithmetic, so there is no double rounding.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/integer.hpp>

#include "hypotlab/format.hpp"

namespace hypotlab {

using BigInt = boost::multiprecision::cpp_int;

/// Nonnegative dyadic rational mantissa * 2^exponent.
///
/// Canonical form: a zero mantissa has exponent 0, any other mantissa is
/// odd. Two values are equal iff their canonical fields are equal.
class ExactValue {
 public:
  ExactValue() = default;
  ExactValue(BigInt mantissa, std::int64_t exponent)
      : mantissa_(std::move(mantissa)), exponent_(exponent) {
    if (mantissa_ < 0) throw measurement_error("ExactValue must be nonnegative");
    normalize();
  }

  const BigInt& mantissa() const noexcept { return mantissa_; }
  std::int64_t exponent() const noexcept { return exponent_; }
  bool is_zero() const noexcept { return mantissa_.is_zero(); }

  /// Exponent of the leading bit, i.e. floor(log2(value)). Zero has none.
  std::int64_t leading_exponent() const {
    return static_cast<std::int64_t>(boost::multiprecision::msb(mantissa_)) + exponent_;
  }

  friend bool operator==(const ExactValue&, const ExactValue&) = default;

  friend std::strong_ordering operator<=>(const ExactValue& x, const ExactValue& y) {
    if (x.is_zero() || y.is_zero()) return !x.is_zero() <=> !y.is_zero();
    if (x.leading_exponent() != y.leading_exponent()) {
      return x.leading_exponent() <=> y.leading_exponent();
    }
    const auto [mx, my] = aligned(x, y);
    return mx == my ? std::strong_ordering::equal
                    : (mx < my ? std::strong_ordering::less : std::strong_ordering::greater);
  }

  friend ExactValue operator+(const ExactValue& x, const ExactValue& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    auto [mx, my] = aligned(x, y);
    return {mx + my, std::min(x.exponent_, y.exponent_)};
  }

  friend ExactValue operator*(const ExactValue& x, const ExactValue& y) {
    return {x.mantissa_ * y.mantissa_, x.exponent_ + y.exponent_};
  }

  /// |x - y|.
  friend ExactValue abs_diff(const ExactValue& x, const ExactValue& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    auto [mx, my] = aligned(x, y);
    return {mx >= my ? BigInt(mx - my) : BigInt(my - mx), std::min(x.exponent_, y.exponent_)};
  }

 private:
  void normalize() {
    if (mantissa_.is_zero()) {
      exponent_ = 0;
      return;
    }
    const auto tz = boost::multiprecision::lsb(mantissa_);
    if (tz != 0) {
      mantissa_ >>= tz;
      exponent_ += static_cast<std::int64_t>(tz);
    }
  }

  // Mantissas of x and y over the common exponent min(ex, ey).
  static std::pair<BigInt, BigInt> aligned(const ExactValue& x, const ExactValue& y) {
    const std::int64_t e = std::min(x.exponent_, y.exponent_);
    return {x.mantissa_ << static_cast<unsigned>(x.exponent_ - e),
            y.mantissa_ << static_cast<unsigned>(y.exponent_ - e)};
  }

  BigInt mantissa_;
  std::int64_t exponent_ = 0;
};

/// Exact value of |x|.
template <SupportedFloat T>
ExactValue exact_magnitude(T x) {
  if (!std::isfinite(x)) throw measurement_error("exact value of a non-finite float");
  if (x == 0) return {};
  int e = 0;
  const T f = std::frexp(std::fabs(x), &e);  // |x| = f * 2^e, f in [0.5, 1)
  constexpr int p = Format<T>::precision_bits;
  const auto m = static_cast<std::uint64_t>(std::ldexp(f, p));
  return {BigInt(m), static_cast<std::int64_t>(e) - p};
}

template <SupportedFloat T>
ExactValue exact_sum_of_squares(T a, T b) {
  const ExactValue ea = exact_magnitude(a);
  const ExactValue eb = exact_magnitude(b);
  return ea * ea + eb * eb;
}

enum class RoundingDirection { exact, rounded_down, rounded_up };

template <SupportedFloat T>
struct RoundingVerdict {
  T result;
  RoundingDirection direction;
  /// The exact value lay halfway between two neighbours (resolved to even).
  bool is_tie;
};

namespace detail {

inline std::int64_t floor_div2(std::int64_t k) { return k >= 0 ? k / 2 : -((-k + 1) / 2); }

// ulp exponent for a result whose leading bit has exponent `lead`, with
// the reduced precision of the subnormal range.
template <SupportedFloat T>
std::int64_t ulp_exponent(std::int64_t lead) {
  using F = Format<T>;
  return std::max<std::int64_t>(lead, F::min_exponent) - (F::precision_bits - 1);
}

// m * 2^shift as an integer plus a flag for nonzero bits dropped on the way.
inline std::pair<BigInt, bool> shift_with_sticky(const BigInt& m, std::int64_t shift) {
  if (shift >= 0) return {m << static_cast<unsigned>(shift), false};
  const auto drop = static_cast<unsigned>(-shift);
  const bool sticky = !m.is_zero() && boost::multiprecision::lsb(m) < drop;
  return {m >> drop, sticky};
}

// q carries two bits below the ulp 2^ulp_exp; sticky marks a nonzero tail
// beyond them.
template <SupportedFloat T>
RoundingVerdict<T> round_guarded(const BigInt& q, bool sticky, std::int64_t ulp_exp) {
  const auto low = static_cast<unsigned>(q & 3);
  const BigInt base = q >> 2;
  const bool odd = (base & 1) != 0;
  const bool tie = low == 2 && !sticky;
  const bool up = low > 2 || (low == 2 && (sticky || odd));
  const bool exact = low == 0 && !sticky;

  const std::uint64_t digits = static_cast<std::uint64_t>(base) + (up ? 1 : 0);
  constexpr std::int64_t kClamp = 1 << 20;
  const int e = static_cast<int>(std::clamp(ulp_exp, -kClamp, kClamp));
  const T result = std::ldexp(static_cast<T>(digits), e);

  RoundingDirection dir = exact ? RoundingDirection::exact
                                : (up ? RoundingDirection::rounded_up : RoundingDirection::rounded_down);
  if (std::isinf(result)) dir = RoundingDirection::rounded_up;
  return {result, dir, tie};
}

}  // namespace detail

/// Round-to-nearest-even of an exact value into format T.
template <SupportedFloat T>
RoundingVerdict<T> round_to_nearest(const ExactValue& v) {
  if (v.is_zero()) return {T(0), RoundingDirection::exact, false};
  const std::int64_t u = detail::ulp_exponent<T>(v.leading_exponent());
  const auto [q, sticky] = detail::shift_with_sticky(v.mantissa(), v.exponent() - (u - 2));
  return detail::round_guarded<T>(q, sticky, u);
}

/// Round-to-nearest-even of sqrt(v) into format T, decided exactly.
template <SupportedFloat T>
RoundingVerdict<T> correctly_rounded_sqrt(const ExactValue& v) {
  if (v.is_zero()) return {T(0), RoundingDirection::exact, false};
  const std::int64_t lead = detail::floor_div2(v.leading_exponent());
  const std::int64_t u = detail::ulp_exponent<T>(lead);
  // sqrt(v) / 2^(u-2) = sqrt(v / 4^(u-2)); floor(sqrt(floor(z))) == floor(sqrt(z)).
  auto [radicand, sticky] = detail::shift_with_sticky(v.mantissa(), v.exponent() - 2 * (u - 2));
  BigInt rem;
  const BigInt q = boost::multiprecision::sqrt(radicand, rem);
  sticky = sticky || !rem.is_zero();
  return detail::round_guarded<T>(q, sticky, u);
}

/// Runtime-format overload; a binary32 result is returned widened.
inline RoundingVerdict<double> correctly_rounded_sqrt(const ExactValue& v, const FpFormat& fmt) {
  if (fmt.tag == Precision::binary64) return correctly_rounded_sqrt<double>(v);
  const auto r = correctly_rounded_sqrt<float>(v);
  return {static_cast<double>(r.result), r.direction, r.is_tie};
}

/// The correctly rounded sqrt(a^2 + b^2): ground truth for every ulp count.
template <SupportedFloat T>
T oracle_hypot(T a, T b) {
  return correctly_rounded_sqrt<T>(exact_sum_of_squares(a, b)).result;
}

}  // namespace hypotlab
