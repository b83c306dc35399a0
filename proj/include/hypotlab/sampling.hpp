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

// Seeded generation of the two input distributions: pairs of standard
// normals, and pairs a ~ U[2^N, 2^(N+1)), b ~ U[1, 2) with uniformly
// distributed significand bits.
//
// The stream is cut into fixed blocks of kBlockSize pairs. Block k draws
// from an mt19937_64 seeded with seed_seq{seed, k}, so pair i depends only
// on (seed, i). That makes any split into shards reproduce exactly the same
// multiset of pairs as a single pass.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "hypotlab/format.hpp"

namespace hypotlab {

enum class SamplerKind { normal_pair, exponent_gap };

struct SamplerSpec {
  SamplerKind kind = SamplerKind::normal_pair;
  int gap_n = 0;                 ///< exponent_gap only
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
  std::uint64_t first_index = 0; ///< global index of the first pair (shards)

  friend bool operator==(const SamplerSpec&, const SamplerSpec&) = default;
};

template <SupportedFloat T>
struct Pair {
  T a;
  T b;
};

inline constexpr std::uint64_t kBlockSize = 4096;

namespace detail {

inline std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

// 1.f * 2^exponent with precision-1 uniformly random fraction bits.
template <SupportedFloat T>
T uniform_binade(std::mt19937_64& eng, int exponent) {
  constexpr int frac_bits = Format<T>::precision_bits - 1;
  const std::uint64_t frac = eng() >> (64 - frac_bits);
  const T significand = 1 + std::ldexp(static_cast<T>(frac), -frac_bits);
  return std::ldexp(significand, exponent);
}

}  // namespace detail

/// Calls sink(a, b) for every pair of `spec`, in index order.
template <SupportedFloat T, class Sink>
void for_each_pair(const SamplerSpec& spec, Sink&& sink) {
  if (spec.kind == SamplerKind::exponent_gap && spec.gap_n < 0) {
    throw config_error("exponent gap must be nonnegative");
  }
  std::uint64_t index = spec.first_index;
  const std::uint64_t end = spec.first_index + spec.count;
  while (index < end) {
    const std::uint64_t block = index / kBlockSize;
    const std::uint64_t block_end = std::min(end, (block + 1) * kBlockSize);
    auto eng = detail::block_engine(spec.seed, block);
    std::normal_distribution<T> normal;
    for (std::uint64_t i = block * kBlockSize; i < block_end; ++i) {
      T a, b;
      if (spec.kind == SamplerKind::normal_pair) {
        a = normal(eng);
        b = normal(eng);
      } else {
        a = detail::uniform_binade<T>(eng, spec.gap_n);
        b = detail::uniform_binade<T>(eng, 0);
      }
      if (i >= index) sink(a, b);
    }
    index = block_end;
  }
}

template <SupportedFloat T>
std::vector<Pair<T>> generate(const SamplerSpec& spec) {
  std::vector<Pair<T>> out;
  out.reserve(spec.count);
  for_each_pair<T>(spec, [&](T a, T b) { out.push_back({a, b}); });
  return out;
}

/// Contiguous, disjoint index ranges covering `spec`; shard sizes differ by
/// at most one.
inline std::vector<SamplerSpec> split(const SamplerSpec& spec, unsigned shards) {
  if (shards == 0) throw config_error("shard count must be at least 1");
  std::vector<SamplerSpec> out;
  out.reserve(shards);
  const std::uint64_t base = spec.count / shards;
  const std::uint64_t extra = spec.count % shards;
  std::uint64_t next = spec.first_index;
  for (unsigned s = 0; s < shards; ++s) {
    SamplerSpec part = spec;
    part.first_index = next;
    part.count = base + (s < extra ? 1 : 0);
    next += part.count;
    out.push_back(part);
  }
  return out;
}

}  // namespace hypotlab
