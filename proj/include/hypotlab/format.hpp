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

// Binary floating-point format constants, the ordered-integer view of a
// float and ulp-distance measurement.

#pragma once

#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace hypotlab {

/// Raised when a measurement is requested on values it is not defined for
/// (NaN or infinite operands).
class measurement_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for invalid experiment or format configuration.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Precision { binary32, binary64 };

template <class T>
concept SupportedFloat = std::same_as<T, float> || std::same_as<T, double>;

namespace detail {

template <SupportedFloat T>
constexpr T pow2(int k) {
  T v = 1;
  for (; k > 0; --k) v *= 2;
  for (; k < 0; ++k) v /= 2;
  return v;
}

constexpr int floor_div2(int k) { return k >= 0 ? k / 2 : -((-k + 1) / 2); }

}  // namespace detail

/// Compile-time description of an IEEE 754 binary format.
///
/// `rescale` is the epsilon of sqrt(f_min): multiplying by it, or by its
/// reciprocal, moves operands clear of overflow/underflow without rounding.
template <SupportedFloat T>
struct Format {
  static_assert(std::numeric_limits<T>::is_iec559);

  using bits_type = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  using ordered_type = std::make_signed_t<bits_type>;

  static constexpr Precision tag =
      std::same_as<T, float> ? Precision::binary32 : Precision::binary64;
  static constexpr int precision_bits = std::numeric_limits<T>::digits;
  static constexpr int storage_bits = sizeof(T) * 8;
  /// Exponent of f_min and of f_max, unbiased.
  static constexpr int min_exponent = std::numeric_limits<T>::min_exponent - 1;
  static constexpr int max_exponent = std::numeric_limits<T>::max_exponent - 1;

  static constexpr T epsilon = std::numeric_limits<T>::epsilon();
  static constexpr T f_min = std::numeric_limits<T>::min();
  static constexpr T f_max = std::numeric_limits<T>::max();
  static constexpr int rescale_exponent =
      detail::floor_div2(min_exponent) - (precision_bits - 1);
  static constexpr T rescale = detail::pow2<T>(rescale_exponent);

  // These fold to constants under optimization; std::sqrt is not constexpr.
  static T wide_threshold() noexcept { return std::sqrt(epsilon / 2); }
  static T overflow_guard() noexcept { return std::sqrt(f_max / 2); }
  static T underflow_guard() noexcept { return std::sqrt(f_min); }
};

/// Runtime counterpart of Format<T>. Every value is stored as a double,
/// which represents the binary32 constants exactly.
struct FpFormat {
  Precision tag;
  int precision_bits;
  int min_exponent;
  int max_exponent;
  double epsilon;
  double f_min;
  double f_max;
  double wide_threshold;
  double overflow_guard;
  double underflow_guard;
  double rescale;
};

template <SupportedFloat T>
FpFormat describe() {
  using F = Format<T>;
  return {F::tag,
          F::precision_bits,
          F::min_exponent,
          F::max_exponent,
          F::epsilon,
          F::f_min,
          F::f_max,
          F::wide_threshold(),
          F::overflow_guard(),
          F::underflow_guard(),
          F::rescale};
}

inline FpFormat format_for(Precision tag) {
  return tag == Precision::binary32 ? describe<float>() : describe<double>();
}

inline std::string_view to_string(Precision tag) {
  return tag == Precision::binary32 ? "binary32" : "binary64";
}

inline Precision parse_precision(std::string_view name) {
  if (name == "binary32") return Precision::binary32;
  if (name == "binary64") return Precision::binary64;
  throw config_error("unsupported floating-point format: " + std::string(name));
}

inline FpFormat format_for(std::string_view name) { return format_for(parse_precision(name)); }

/// Monotone map from floats to signed integers: negative values land below
/// positive ones and adjacent floats differ by one. Both zeros map to 0.
/// Infinities map one past the extreme finite values; NaN is meaningless.
template <SupportedFloat T>
constexpr typename Format<T>::ordered_type to_ordered(T x) noexcept {
  using F = Format<T>;
  using U = typename F::bits_type;
  using S = typename F::ordered_type;
  constexpr U sign_mask = U{1} << (F::storage_bits - 1);
  const U bits = std::bit_cast<U>(x);
  const S magnitude = static_cast<S>(bits & ~sign_mask);
  return (bits & sign_mask) ? static_cast<S>(-magnitude) : magnitude;
}

template <SupportedFloat T>
constexpr T from_ordered(typename Format<T>::ordered_type v) noexcept {
  using F = Format<T>;
  using U = typename F::bits_type;
  constexpr U sign_mask = U{1} << (F::storage_bits - 1);
  if (v < 0) return std::bit_cast<T>(static_cast<U>(static_cast<U>(-v) | sign_mask));
  return std::bit_cast<T>(static_cast<U>(v));
}

/// Signed distance in ulps from `reference` to `computed`, counting the
/// representable floats between them. Saturates at the int64 range.
template <SupportedFloat T>
std::int64_t ulp_distance(T computed, T reference) {
  if (!std::isfinite(computed) || !std::isfinite(reference)) {
    throw measurement_error("ulp_distance requires finite operands");
  }
  const __int128 d = static_cast<__int128>(to_ordered(computed)) -
                     static_cast<__int128>(to_ordered(reference));
  constexpr __int128 lo = -std::numeric_limits<std::int64_t>::max();
  constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(d < lo ? lo : (d > hi ? hi : d));
}

/// Smallest float above x; f_max steps to +infinity.
template <SupportedFloat T>
T next_up(T x) {
  if (!std::isfinite(x)) throw measurement_error("next_up requires a finite operand");
  return std::nextafter(x, std::numeric_limits<T>::infinity());
}

/// Largest float below x; -f_max steps to -infinity.
template <SupportedFloat T>
T next_down(T x) {
  if (!std::isfinite(x)) throw measurement_error("next_down requires a finite operand");
  return std::nextafter(x, -std::numeric_limits<T>::infinity());
}

/// Hex-float rendering ("%a"), exact and reparseable with strtod/strtof.
template <SupportedFloat T>
std::string hex(T x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", static_cast<double>(x));
  return buf;
}

/// Shortest-safe decimal rendering (round-trips for the given format).
template <SupportedFloat T>
std::string decimal(T x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", std::numeric_limits<T>::max_digits10,
                static_cast<double>(x));
  return buf;
}

}  // namespace hypotlab
