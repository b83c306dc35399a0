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

// Port of the long-standing fdlibm/msun __ieee754_hypot routine.
//
// The original operates on the high 32 bits of the binary64 encoding and is
// reproduced here as-is, including its x/y > 2**60 shortcut. Only the word
// access macros are replaced by std::bit_cast helpers.
//
// Original notice:
//   Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//   Developed at SunSoft, a Sun Microsystems, Inc. business.
//   Permission to use, copy, modify, and distribute this
//   software is freely granted, provided that this notice
//   is preserved.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace hypotlab {

namespace msun {

inline std::int32_t get_high_word(double d) noexcept {
  return static_cast<std::int32_t>(std::bit_cast<std::uint64_t>(d) >> 32);
}

inline std::uint32_t get_low_word(double d) noexcept {
  return static_cast<std::uint32_t>(std::bit_cast<std::uint64_t>(d));
}

inline void set_high_word(double& d, std::int32_t hi) noexcept {
  const std::uint64_t lo = std::bit_cast<std::uint64_t>(d) & 0xffffffffULL;
  d = std::bit_cast<double>((static_cast<std::uint64_t>(static_cast<std::uint32_t>(hi)) << 32) | lo);
}

}  // namespace msun

/* __ieee754_hypot(x,y)
 *
 * Method :
 *	If (assume round-to-nearest) z=x*x+y*y
 *	has error less than sqrt(2)/2 ulp, than
 *	sqrt(z) has error less than 1 ulp (exercise).
 *
 *	So, compute sqrt(x*x+y*y) with some care as
 *	follows to get the error below 1 ulp:
 *
 *	Assume x>y>0;
 *	1. if x > 2y  use
 *		x1*x1+(y*y+(x2*(x+x1))) for x*x+y*y
 *	where x1 = x with lower 32 bits cleared, x2 = x-x1; else
 *	2. if x <= 2y use
 *		t1*y1+((x-y)*(x-y)+(t1*y2+t2*y))
 *	where t1 = 2x with lower 32 bits cleared, t2 = 2x-t1,
 *	y1= y with lower 32 bits chopped, y2 = y-y1.
 *
 * Special cases:
 *	hypot(x,y) is INF if x or y is +INF or -INF; else
 *	hypot(x,y) is NAN if x or y is NAN.
 */
inline double clib_hypot(double x, double y) noexcept {
  using msun::get_high_word;
  using msun::get_low_word;
  using msun::set_high_word;

  double a, b, t1, t2, y1, y2, w;
  std::int32_t j, k, ha, hb;

  ha = get_high_word(x) & 0x7fffffff;
  hb = get_high_word(y) & 0x7fffffff;
  if (hb > ha) {
    a = y;
    b = x;
    j = ha;
    ha = hb;
    hb = j;
  } else {
    a = x;
    b = y;
  }
  a = std::fabs(a);
  b = std::fabs(b);
  if ((ha - hb) > 0x3c00000) return a + b;  // x/y > 2**60
  k = 0;
  if (ha > 0x5f300000) {  // a > 2**500
    if (ha >= 0x7ff00000) {  // Inf or NaN
      // Use original arg order iff result is NaN; quieten sNaNs.
      w = std::fabs(x + 0.0) - std::fabs(y + 0.0);
      if (((ha & 0xfffff) | get_low_word(a)) == 0) w = a;
      if (((hb ^ 0x7ff00000) | get_low_word(b)) == 0) w = b;
      return w;
    }
    // scale a and b by 2**-600
    ha -= 0x25800000;
    hb -= 0x25800000;
    k += 600;
    set_high_word(a, ha);
    set_high_word(b, hb);
  }
  if (hb < 0x20b00000) {  // b < 2**-500
    if (hb <= 0x000fffff) {  // subnormal b or 0
      if ((hb | get_low_word(b)) == 0) return a;
      t1 = 0;
      set_high_word(t1, 0x7fd00000);  // t1 = 2^1022
      b *= t1;
      a *= t1;
      k -= 1022;
    } else {  // scale a and b by 2^600
      ha += 0x25800000;
      hb += 0x25800000;
      k -= 600;
      set_high_word(a, ha);
      set_high_word(b, hb);
    }
  }
  // medium size a and b
  w = a - b;
  if (w > b) {
    t1 = 0;
    set_high_word(t1, ha);
    t2 = a - t1;
    w = std::sqrt(t1 * t1 - (b * (-b) - t2 * (a + t1)));
  } else {
    a = a + a;
    y1 = 0;
    set_high_word(y1, hb);
    y2 = b - y1;
    t1 = 0;
    set_high_word(t1, ha + 0x00100000);
    t2 = a - t1;
    w = std::sqrt(t1 * y1 - (w * (-w) - (t1 * y2 + t2 * b)));
  }
  if (k != 0) {
    t1 = 1.0;
    const std::int32_t high = get_high_word(t1);
    set_high_word(t1, high + (k << 20));
    return t1 * w;
  }
  return w;
}

}  // namespace hypotlab
