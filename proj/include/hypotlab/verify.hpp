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

// Randomized property checks over the kernels and the oracle.
//
// Every check draws its inputs from its own mt19937_64 seeded with the
// caller's seed, counts violations, and keeps the first one as a hex-float
// reproducer.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hypotlab/format.hpp"
#include "hypotlab/kernels.hpp"
#include "hypotlab/oracle.hpp"

namespace hypotlab {

inline constexpr std::uint64_t kDefaultSeed = 0xB0C4E5;

/// Kernels under test, indexed by AlgorithmId. A null entry is skipped.
template <SupportedFloat T>
struct KernelSet {
  using value_type = T;

  std::array<KernelFn<T>, kAllAlgorithms.size()> fns{};

  static KernelSet standard() {
    KernelSet s;
    for (AlgorithmId id : kAllAlgorithms) {
      if (supports(id, Format<T>::tag)) s.fns[static_cast<std::size_t>(id)] = kernel<T>(id);
    }
    return s;
  }

  KernelSet with(AlgorithmId id, KernelFn<T> fn) const {
    KernelSet s = *this;
    s.fns[static_cast<std::size_t>(id)] = fn;
    return s;
  }

  KernelFn<T> operator[](AlgorithmId id) const { return fns[static_cast<std::size_t>(id)]; }
};

struct PropertyOutcome {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::string reproducer;  ///< first violation, empty if none

  bool passed() const { return violations == 0; }
};

struct VerifyConfig {
  std::uint64_t samples = 100'000;
  std::uint64_t seed = kDefaultSeed;
};

struct VerifyReport {
  std::vector<PropertyOutcome> properties;

  bool passed() const {
    for (const auto& p : properties) {
      if (!p.passed()) return false;
    }
    return true;
  }
};

namespace detail {

template <SupportedFloat T>
std::string suffix() {
  return std::string("/") + std::string(to_string(Format<T>::tag));
}

class Recorder {
 public:
  explicit Recorder(std::string name) { out_.name = std::move(name); }

  template <class Describe>
  void check(bool ok, Describe&& describe) {
    ++out_.checked;
    if (ok) return;
    if (out_.violations++ == 0) out_.reproducer = describe();
  }

  PropertyOutcome done() && { return std::move(out_); }

 private:
  PropertyOutcome out_;
};

template <SupportedFloat T>
std::string call_text(AlgorithmId id, T x, T y, T got, T want) {
  return std::string(name(id)) + "(" + hex(x) + ", " + hex(y) + ") = " + hex(got) +
         ", expected " + hex(want);
}

template <SupportedFloat T>
bool same_bits(T a, T b) {
  return std::bit_cast<typename Format<T>::bits_type>(a) ==
         std::bit_cast<typename Format<T>::bits_type>(b);
}

// Generators

template <SupportedFloat T>
T random_finite(std::mt19937_64& eng) {
  using U = typename Format<T>::bits_type;
  for (;;) {
    const T x = std::bit_cast<T>(static_cast<U>(eng()));
    if (std::isfinite(x)) return x;
  }
}

// Random significand in [1, 2) times 2^e; e must be a normal exponent.
template <SupportedFloat T>
T random_with_exponent(std::mt19937_64& eng, int e) {
  constexpr int frac_bits = Format<T>::precision_bits - 1;
  const T sig = 1 + std::ldexp(static_cast<T>(eng() >> (64 - frac_bits)), -frac_bits);
  return std::ldexp(sig, e);
}

inline int uniform_int(std::mt19937_64& eng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(eng);
}

template <SupportedFloat T>
T random_sign(std::mt19937_64& eng, T x) {
  return (eng() & 1) ? -x : x;
}

// Pairs spread over exponent gaps 0..30, plus pairs whose larger operand is
// just below f_max/2 and pairs whose smaller operand is just above f_min.
template <SupportedFloat T>
std::pair<T, T> ranged_pair(std::mt19937_64& eng) {
  using F = Format<T>;
  const int gap = uniform_int(eng, 0, 30);
  int ea;
  switch (eng() % 10) {
    case 0: ea = uniform_int(eng, F::max_exponent - 4, F::max_exponent - 1); break;
    case 1: ea = uniform_int(eng, F::min_exponent, F::min_exponent + 4) + gap; break;
    default: ea = uniform_int(eng, F::min_exponent + 31, F::max_exponent - 1); break;
  }
  T a = random_sign(eng, random_with_exponent<T>(eng, ea));
  T b = random_sign(eng, random_with_exponent<T>(eng, ea - gap));
  if (eng() & 1) std::swap(a, b);
  return {a, b};
}

}  // namespace detail

/// k(x,y) == k(y,x) == k(-x,y) == k(x,-y), bit for bit, over arbitrary
/// finite operands.
template <SupportedFloat T>
PropertyOutcome check_symmetry(const KernelSet<T>& ks, std::uint64_t samples, std::uint64_t seed) {
  detail::Recorder rec("symmetry" + detail::suffix<T>());
  std::mt19937_64 eng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const T x = detail::random_finite<T>(eng);
    const T y = detail::random_finite<T>(eng);
    for (AlgorithmId id : kAllAlgorithms) {
      const auto k = ks[id];
      if (!k) continue;
      const T r = k(x, y);
      const std::array<T, 3> others = {k(y, x), k(-x, y), k(x, -y)};
      for (T o : others) {
        rec.check(detail::same_bits(r, o), [&] { return detail::call_text(id, x, y, o, r); });
      }
    }
  }
  return std::move(rec).done();
}

/// k(x 2^s, y 2^s) == k(x, y) 2^s for the four prelude-based kernels while
/// everything stays in the normal range.
template <SupportedFloat T>
PropertyOutcome check_scale_covariance(const KernelSet<T>& ks, std::uint64_t samples,
                                       std::uint64_t seed) {
  using F = Format<T>;
  detail::Recorder rec("scale_covariance" + detail::suffix<T>());
  std::mt19937_64 eng(seed);
  // Scaling is exact only while squares and their rounding residuals stay
  // normal, so both the original and scaled pairs live in [lo, hi].
  const int lo = F::min_exponent / 2 + F::precision_bits + 2;
  const int hi = F::max_exponent / 2 - 2;
  constexpr std::array ids = {AlgorithmId::naive_unfused, AlgorithmId::naive_fused,
                              AlgorithmId::corrected_unfused, AlgorithmId::corrected_fused};
  for (std::uint64_t i = 0; i < samples; ++i) {
    const int ex = detail::uniform_int(eng, lo + 30, hi);
    const T x = detail::random_with_exponent<T>(eng, ex);
    const T y = detail::random_with_exponent<T>(eng, ex - detail::uniform_int(eng, 0, 30));
    const int s = detail::uniform_int(eng, lo + 30 - ex, hi - ex);
    for (AlgorithmId id : ids) {
      const auto k = ks[id];
      if (!k) continue;
      const T want = std::ldexp(k(x, y), s);
      const T xs = std::ldexp(x, s), ys = std::ldexp(y, s);
      const T got = k(xs, ys);
      rec.check(detail::same_bits(got, want),
                [&] { return detail::call_text(id, xs, ys, got, want); });
    }
  }
  return std::move(rec).done();
}

/// Every kernel within 1 ulp of the oracle, julia11 within 2.
template <SupportedFloat T>
PropertyOutcome check_ulp_bound(const KernelSet<T>& ks, std::uint64_t samples, std::uint64_t seed) {
  detail::Recorder rec("ulp_bound" + detail::suffix<T>());
  std::mt19937_64 eng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto [x, y] = detail::ranged_pair<T>(eng);
    const T want = oracle_hypot(x, y);
    for (AlgorithmId id : kAllAlgorithms) {
      const auto k = ks[id];
      if (!k) continue;
      const T got = k(x, y);
      const std::int64_t limit = id == AlgorithmId::julia11 ? 2 : 1;
      const bool ok = std::isfinite(got) && std::llabs(ulp_distance(got, want)) <= limit;
      rec.check(ok, [&] { return detail::call_text(id, x, y, got, want); });
    }
  }
  return std::move(rec).done();
}

/// When ay <= ax * sqrt(eps/2), the prelude kernels return ax and ax is
/// the correctly rounded result.
template <SupportedFloat T>
PropertyOutcome check_wide_branch(const KernelSet<T>& ks, std::uint64_t samples,
                                  std::uint64_t seed) {
  using F = Format<T>;
  detail::Recorder rec("wide_branch" + detail::suffix<T>());
  std::mt19937_64 eng(seed);
  constexpr int p = F::precision_bits;
  constexpr std::array ids = {AlgorithmId::naive_unfused, AlgorithmId::naive_fused,
                              AlgorithmId::corrected_unfused, AlgorithmId::corrected_fused};
  std::uint64_t taken = 0;
  while (taken < samples) {
    const int ea = detail::uniform_int(eng, F::min_exponent + 2 * p, F::max_exponent);
    const T ax = detail::random_with_exponent<T>(eng, ea);
    const T edge = ax * F::wide_threshold();
    T ay;
    switch (eng() % 20) {
      case 0: ay = edge; break;
      case 1: ay = next_down(edge); break;
      case 2: ay = 0; break;
      default:
        ay = detail::random_with_exponent<T>(eng, ea - detail::uniform_int(eng, p / 2 + 1, 3 * p));
    }
    if (!(ay <= edge)) continue;
    ++taken;
    const T x = detail::random_sign(eng, ax), y = detail::random_sign(eng, ay);
    const T want = oracle_hypot(x, y);
    rec.check(detail::same_bits(want, ax), [&] {
      return "oracle(" + hex(x) + ", " + hex(y) + ") = " + hex(want) + ", expected " + hex(ax);
    });
    for (AlgorithmId id : ids) {
      const auto k = ks[id];
      if (!k) continue;
      const T got = k(x, y);
      rec.check(detail::same_bits(got, ax), [&] { return detail::call_text(id, x, y, got, ax); });
    }
  }
  return std::move(rec).done();
}

/// No overflow to +inf and no underflow to 0 for ax <= f_max/2, ay >= f_min.
template <SupportedFloat T>
PropertyOutcome check_no_spurious_exceptions(const KernelSet<T>& ks, std::uint64_t samples,
                                             std::uint64_t seed) {
  using F = Format<T>;
  detail::Recorder rec("no_spurious_exceptions" + detail::suffix<T>());
  std::mt19937_64 eng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const int ea = detail::uniform_int(eng, F::min_exponent, F::max_exponent - 1);
    const int eb = detail::uniform_int(eng, F::min_exponent, ea);
    const T x = detail::random_with_exponent<T>(eng, ea);
    const T y = detail::random_with_exponent<T>(eng, eb);
    for (AlgorithmId id : kAllAlgorithms) {
      const auto k = ks[id];
      if (!k) continue;
      const T got = k(x, y);
      rec.check(std::isfinite(got) && got > 0, [&] {
        return detail::call_text(id, x, y, got, oracle_hypot(x, y));
      });
    }
  }
  return std::move(rec).done();
}

/// IEEE special values: +inf dominates NaN, NaN otherwise propagates, and
/// hypot(±0, ±0) = +0.
template <SupportedFloat T>
PropertyOutcome check_special_values(const KernelSet<T>& ks) {
  detail::Recorder rec("special_values" + detail::suffix<T>());
  constexpr T inf = std::numeric_limits<T>::infinity();
  constexpr T nan = std::numeric_limits<T>::quiet_NaN();
  const std::array<T, 9> others = {T(0),  T(-0.0),  T(1), T(-3.5), Format<T>::f_max,
                                   std::numeric_limits<T>::denorm_min(), nan, inf, -inf};
  const std::array<T, 5> finite = {T(0), T(1), T(-3.5), Format<T>::f_max,
                                   std::numeric_limits<T>::denorm_min()};
  for (AlgorithmId id : kAllAlgorithms) {
    const auto k = ks[id];
    if (!k) continue;
    for (T s : {inf, -inf}) {
      for (T o : others) {
        for (auto [x, y] : {std::pair{s, o}, std::pair{o, s}}) {
          const T got = k(x, y);
          rec.check(detail::same_bits(got, inf), [&] { return detail::call_text(id, x, y, got, inf); });
        }
      }
    }
    for (T o : finite) {
      for (auto [x, y] : {std::pair{nan, o}, std::pair{o, nan}, std::pair{nan, nan}}) {
        const T got = k(x, y);
        rec.check(std::isnan(got), [&] { return detail::call_text(id, x, y, got, nan); });
      }
    }
    for (T z1 : {T(0), T(-0.0)}) {
      for (T z2 : {T(0), T(-0.0)}) {
        const T got = k(z1, z2);
        rec.check(detail::same_bits(got, T(0)),
                  [&] { return detail::call_text(id, z1, z2, got, T(0)); });
      }
    }
  }
  return std::move(rec).done();
}

namespace detail {

// Pythagorean triple (p, q, r) with r < 2^limit_bits via Euclid's formula
// with a random multiplier.
inline std::array<std::uint64_t, 3> random_triple(std::mt19937_64& eng, int limit_bits) {
  const std::uint64_t limit = std::uint64_t{1} << limit_bits;
  for (;;) {
    const auto m_max = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
    const std::uint64_t m = std::uniform_int_distribution<std::uint64_t>(2, m_max)(eng);
    const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(1, m - 1)(eng);
    const std::uint64_t r = m * m + n * n;
    if (r >= limit) continue;
    const std::uint64_t k =
        std::uniform_int_distribution<std::uint64_t>(1, (limit - 1) / r)(eng);
    return {k * (m * m - n * n), k * 2 * m * n, k * r};
  }
}

}  // namespace detail

/// Scaled Pythagorean triples: the oracle reports an exact square root and
/// every kernel except julia11 returns the exact hypotenuse. julia11 rounds
/// b/a first, so it is exact on a triple only by luck.
template <SupportedFloat T>
PropertyOutcome check_exact_triples(const KernelSet<T>& ks, std::uint64_t count,
                                    std::uint64_t seed) {
  using F = Format<T>;
  detail::Recorder rec("exact_triples" + detail::suffix<T>());
  std::mt19937_64 eng(seed);
  // Squares of the legs must be exact in T.
  const int bits = F::precision_bits / 2;
  const int s_span = F::max_exponent - bits - 2;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto t = detail::random_triple(eng, bits);
    const int s = detail::uniform_int(eng, -s_span, s_span);
    const T x = std::ldexp(static_cast<T>(t[0]), s);
    const T y = std::ldexp(static_cast<T>(t[1]), s);
    const T r = std::ldexp(static_cast<T>(t[2]), s);
    const auto verdict = correctly_rounded_sqrt<T>(exact_sum_of_squares(x, y));
    rec.check(verdict.direction == RoundingDirection::exact && detail::same_bits(verdict.result, r),
              [&] { return "oracle(" + hex(x) + ", " + hex(y) + ") not exact " + hex(r); });
    for (AlgorithmId id : kAllAlgorithms) {
      const auto k = ks[id];
      if (!k || id == AlgorithmId::julia11) continue;
      const T got = k(x, y);
      rec.check(detail::same_bits(got, r), [&] { return detail::call_text(id, x, y, got, r); });
    }
  }
  return std::move(rec).done();
}

/// Exact check that r is the round-to-nearest-even of sqrt(v): v must lie
/// between the squares of the midpoints around r, and on a midpoint square
/// only when r is even.
template <SupportedFloat T>
bool is_correctly_rounded_sqrt(T r, const ExactValue& v) {
  if (!(r >= 0)) return false;
  if (std::isinf(r)) {
    // Overflow iff sqrt(v) >= f_max + ulp/2.
    const T top = Format<T>::f_max;
    const ExactValue mid = exact_magnitude(top) +
                           ExactValue(1, std::ilogb(top) - Format<T>::precision_bits);
    return (mid * mid) <= v;
  }
  const ExactValue er = exact_magnitude(r);
  const bool even = (std::bit_cast<typename Format<T>::bits_type>(r) & 1) == 0;
  const T up = next_up(r);
  // Half the gap to a neighbour, as an exact value.
  auto half_gap = [&](T n) {
    const ExactValue g = abs_diff(exact_magnitude(n), er);
    return ExactValue(g.mantissa(), g.exponent() - 1);
  };
  const ExactValue hi_mid = er + half_gap(std::isinf(up) ? next_down(r) : up);
  const auto hi = (hi_mid * hi_mid) <=> v;
  if (hi < 0 || (hi == 0 && !even)) return false;
  if (r == 0) return true;
  const ExactValue lo_gap = half_gap(next_down(r));
  const ExactValue lo_mid = abs_diff(er, lo_gap);
  const auto lo = (lo_mid * lo_mid) <=> v;
  return lo < 0 || (lo == 0 && even);
}

/// |r^2 - v| is no larger than |n^2 - v| for both neighbours n of r, ties
/// only with an even r. Checked in exact arithmetic.
template <SupportedFloat T>
bool squared_neighbor_optimal(T r, const ExactValue& v) {
  const ExactValue er = exact_magnitude(r);
  const ExactValue dr = abs_diff(er * er, v);
  const bool even = (std::bit_cast<typename Format<T>::bits_type>(r) & 1) == 0;
  for (T n : {next_up(r), next_down(r)}) {
    if (!std::isfinite(n) || n < 0) continue;
    const ExactValue en = exact_magnitude(n);
    const auto c = dr <=> abs_diff(en * en, v);
    if (c > 0 || (c == 0 && !even)) return false;
  }
  return true;
}

/// Oracle self-check on random pairs whose hypotenuse does not overflow:
/// squared-neighbour optimality and the exact midpoint bracket.
template <SupportedFloat T>
PropertyOutcome check_oracle_neighbors(std::uint64_t samples, std::uint64_t seed) {
  detail::Recorder rec("oracle_neighbors" + detail::suffix<T>());
  std::mt19937_64 eng(seed);
  const T bound = Format<T>::f_max / 2;
  for (std::uint64_t i = 0; i < samples; ++i) {
    T x, y;
    do {
      x = detail::random_finite<T>(eng);
      y = detail::random_finite<T>(eng);
    } while (std::fabs(x) >= bound || std::fabs(y) >= bound);
    const ExactValue v = exact_sum_of_squares(x, y);
    const T r = correctly_rounded_sqrt<T>(v).result;
    rec.check(squared_neighbor_optimal(r, v) && is_correctly_rounded_sqrt(r, v), [&] {
      return "oracle(" + hex(x) + ", " + hex(y) + ") = " + hex(r) + " is not nearest";
    });
  }
  return std::move(rec).done();
}

/// z = a*a + b*b in plain arithmetic satisfies |z - (a^2+b^2)| <= eps * z
/// for operands whose squares stay normal and finite.
template <SupportedFloat T>
PropertyOutcome check_naive_sum_bound(std::uint64_t samples, std::uint64_t seed) {
  using F = Format<T>;
  detail::Recorder rec("naive_sum_bound" + detail::suffix<T>());
  std::mt19937_64 eng(seed);
  const ExactValue eps = exact_magnitude(F::epsilon);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const int lo = F::min_exponent / 2 + 1, hi = F::max_exponent / 2 - 1;
    const T a = detail::random_sign(eng, detail::random_with_exponent<T>(eng, detail::uniform_int(eng, lo, hi)));
    const T b = detail::random_sign(eng, detail::random_with_exponent<T>(eng, detail::uniform_int(eng, lo, hi)));
    const T z = a * a + b * b;
    const ExactValue ez = exact_magnitude(z);
    const bool ok = abs_diff(ez, exact_sum_of_squares(a, b)) <= eps * ez;
    rec.check(ok, [&] { return "a*a+b*b at (" + hex(a) + ", " + hex(b) + ") = " + hex(z); });
  }
  return std::move(rec).done();
}

/// The whole suite for both formats.
inline VerifyReport verify(const VerifyConfig& cfg,
                           const KernelSet<double>& k64 = KernelSet<double>::standard(),
                           const KernelSet<float>& k32 = KernelSet<float>::standard()) {
  VerifyReport report;
  auto run = [&](const auto& ks, auto tag) {
    using T = decltype(tag);
    const std::uint64_t n = cfg.samples;
    const std::uint64_t s = cfg.seed;
    report.properties.push_back(check_special_values<T>(ks));
    report.properties.push_back(check_symmetry<T>(ks, n, s));
    report.properties.push_back(check_scale_covariance<T>(ks, n, s + 1));
    report.properties.push_back(check_ulp_bound<T>(ks, n, s + 2));
    report.properties.push_back(check_wide_branch<T>(ks, n, s + 3));
    report.properties.push_back(check_no_spurious_exceptions<T>(ks, n, s + 4));
    report.properties.push_back(check_exact_triples<T>(ks, std::max<std::uint64_t>(n / 10, 500), s + 5));
    report.properties.push_back(check_oracle_neighbors<T>(n, s + 6));
    report.properties.push_back(check_naive_sum_bound<T>(n, s + 7));
  };
  run(k64, double{});
  run(k32, float{});
  return report;
}

}  // namespace hypotlab
