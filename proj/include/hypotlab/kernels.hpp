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

// The six sqrt(x^2 + y^2) kernels compared by this library.
//
// Four of them share a prelude: +inf if either operand is infinite, NaN for
// any remaining NaN, early return of the larger magnitude when the operands
// are widely separated, and power-of-two rescaling of operands that would
// overflow or underflow when squared. The textbook ratio kernel (julia11)
// only takes the special-value part of the prelude; the msun port handles
// everything itself.
//
// All kernels must be compiled with floating-point contraction disabled
// (-ffp-contract=off); the unfused variants depend on every product being
// rounded on its own.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypotlab/clib_hypot.hpp"
#include "hypotlab/format.hpp"

namespace hypotlab {

enum class AlgorithmId : std::uint8_t {
  julia11,
  clib,
  naive_unfused,
  naive_fused,
  corrected_unfused,
  corrected_fused,
};

inline constexpr std::array<AlgorithmId, 6> kAllAlgorithms = {
    AlgorithmId::julia11,     AlgorithmId::clib,
    AlgorithmId::naive_unfused, AlgorithmId::naive_fused,
    AlgorithmId::corrected_unfused, AlgorithmId::corrected_fused,
};

inline constexpr std::string_view name(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::julia11: return "julia11";
    case AlgorithmId::clib: return "clib";
    case AlgorithmId::naive_unfused: return "naive_unfused";
    case AlgorithmId::naive_fused: return "naive_fused";
    case AlgorithmId::corrected_unfused: return "corrected_unfused";
    case AlgorithmId::corrected_fused: return "corrected_fused";
  }
  return "?";
}

inline AlgorithmId parse_algorithm(std::string_view text) {
  for (AlgorithmId id : kAllAlgorithms) {
    if (name(id) == text) return id;
  }
  throw config_error("unknown algorithm: " + std::string(text));
}

/// The msun port is tied to the binary64 word layout.
inline constexpr bool supports(AlgorithmId id, Precision p) {
  return id != AlgorithmId::clib || p == Precision::binary64;
}

inline std::vector<AlgorithmId> algorithms_for(Precision p) {
  std::vector<AlgorithmId> out;
  for (AlgorithmId id : kAllAlgorithms) {
    if (supports(id, p)) out.push_back(id);
  }
  return out;
}

/// Ordered, possibly rescaled operands: ax >= ay >= 0, and the final result
/// is the kernel's value times `scale`.
template <SupportedFloat T>
struct KernelPrelude {
  T ax;
  T ay;
  T scale;
};

/// Either the result is already known (`early`), or `operands` holds the
/// inputs for the main computation.
template <SupportedFloat T>
struct PreludeOutcome {
  std::optional<T> early;
  KernelPrelude<T> operands{};
};

/// +inf beats NaN, as in IEEE 754 hypot.
template <SupportedFloat T>
inline std::optional<T> special_value(T x, T y) noexcept {
  if (std::isinf(x) || std::isinf(y)) return std::numeric_limits<T>::infinity();
  if (std::isnan(x) || std::isnan(y)) return std::numeric_limits<T>::quiet_NaN();
  return std::nullopt;
}

template <SupportedFloat T>
inline PreludeOutcome<T> prelude(T x, T y) noexcept {
  using F = Format<T>;
  if (auto s = special_value(x, y)) return {s, {}};

  T ax = std::fabs(x);
  T ay = std::fabs(y);
  if (ay > ax) std::swap(ax, ay);

  // Also catches ay == 0.
  if (ay <= ax * F::wide_threshold()) return {ax, {}};

  T scale = F::rescale;
  if (ax > F::overflow_guard()) {
    ax *= scale;
    ay *= scale;
    scale = 1 / scale;
  } else if (ay < F::underflow_guard()) {
    ax /= scale;
    ay /= scale;
  } else {
    scale = 1;
  }
  return {std::nullopt, {ax, ay, scale}};
}

/// a * sqrt(1 + r*r) with r = b/a; rescales unconditionally.
template <SupportedFloat T>
inline T julia11(T x, T y) noexcept {
  if (auto s = special_value(x, y)) return *s;
  T a = std::fabs(x);
  T b = std::fabs(y);
  if (b > a) std::swap(a, b);
  if (a == 0) return 0;
  const T r = b / a;
  return a * std::sqrt(1 + r * r);
}

template <SupportedFloat T>
inline T naive_unfused(T x, T y) noexcept {
  const auto p = prelude(x, y);
  if (p.early) return *p.early;
  const auto [ax, ay, scale] = p.operands;
  return std::sqrt(ax * ax + ay * ay) * scale;
}

template <SupportedFloat T>
inline T naive_fused(T x, T y) noexcept {
  const auto p = prelude(x, y);
  if (p.early) return *p.early;
  const auto [ax, ay, scale] = p.operands;
  return std::sqrt(std::fma(ax, ax, ay * ay)) * scale;
}

/// Naive result followed by one first-order correction h -= (h^2-a^2-b^2)/(2h).
/// The residual is evaluated in one of two arrangements chosen so that
/// delta = h - ay or delta = h - ax is exact.
template <SupportedFloat T>
inline T corrected_unfused(T x, T y) noexcept {
  const auto p = prelude(x, y);
  if (p.early) return *p.early;
  const auto [ax, ay, scale] = p.operands;
  T h = std::sqrt(ax * ax + ay * ay);
  if (h <= 2 * ay) {
    const T delta = h - ay;
    h -= (ax * (2 * delta - ax) + (delta - 2 * (ax - ay)) * delta) / (2 * h);
  } else {
    const T delta = h - ax;
    h -= (2 * delta * (ax - 2 * ay) + (4 * delta - ay) * ay + delta * delta) / (2 * h);
  }
  return h * scale;
}

/// The residual h^2 - a^2 - b^2 is recovered with fma error-free products.
template <SupportedFloat T>
inline T corrected_fused(T x, T y) noexcept {
  const auto p = prelude(x, y);
  if (p.early) return *p.early;
  const auto [ax, ay, scale] = p.operands;
  T h = std::sqrt(std::fma(ax, ax, ay * ay));
  const T h_sq = h * h;
  const T ax_sq = ax * ax;
  const T residual =
      std::fma(-ay, ay, h_sq - ax_sq) + std::fma(h, h, -h_sq) - std::fma(ax, ax, -ax_sq);
  h -= residual / (2 * h);
  return h * scale;
}

namespace detail {

// Single-branch residual 2d(a-b) + (2d-b)b + d^2 with d = h - a. Kept for
// comparison in tests; the two-branch form is the shipped kernel.
template <SupportedFloat T>
inline T corrected_unfused_single_branch(T x, T y) noexcept {
  const auto p = prelude(x, y);
  if (p.early) return *p.early;
  const auto [ax, ay, scale] = p.operands;
  T h = std::sqrt(ax * ax + ay * ay);
  const T delta = h - ax;
  h -= (delta * (2 * (ax - ay)) + (2 * delta - ay) * ay + delta * delta) / (2 * h);
  return h * scale;
}

}  // namespace detail

template <SupportedFloat T>
using KernelFn = T (*)(T, T);

/// Function pointer for `id`; throws config_error for clib on binary32.
template <SupportedFloat T>
inline KernelFn<T> kernel(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::julia11: return &julia11<T>;
    case AlgorithmId::clib:
      if constexpr (std::same_as<T, double>) {
        return &clib_hypot;
      } else {
        throw config_error("clib is defined for binary64 only");
      }
    case AlgorithmId::naive_unfused: return &naive_unfused<T>;
    case AlgorithmId::naive_fused: return &naive_fused<T>;
    case AlgorithmId::corrected_unfused: return &corrected_unfused<T>;
    case AlgorithmId::corrected_fused: return &corrected_fused<T>;
  }
  throw config_error("invalid algorithm id");
}

/// Calls `f` with a stateless callable wrapping the kernel for `id`, so
/// loops inside `f` are instantiated per kernel rather than going through
/// an indirect call.
template <SupportedFloat T, class F>
inline decltype(auto) with_kernel(AlgorithmId id, F&& f) {
  switch (id) {
    case AlgorithmId::julia11: return f([](T x, T y) { return julia11(x, y); });
    case AlgorithmId::clib:
      if constexpr (std::same_as<T, double>) {
        return f([](T x, T y) { return clib_hypot(x, y); });
      } else {
        throw config_error("clib is defined for binary64 only");
      }
    case AlgorithmId::naive_unfused: return f([](T x, T y) { return naive_unfused(x, y); });
    case AlgorithmId::naive_fused: return f([](T x, T y) { return naive_fused(x, y); });
    case AlgorithmId::corrected_unfused:
      return f([](T x, T y) { return corrected_unfused(x, y); });
    case AlgorithmId::corrected_fused: return f([](T x, T y) { return corrected_fused(x, y); });
  }
  throw config_error("invalid algorithm id");
}

template <SupportedFloat T>
inline T dispatch(AlgorithmId id, T x, T y) {
  return kernel<T>(id)(x, y);
}

}  // namespace hypotlab
