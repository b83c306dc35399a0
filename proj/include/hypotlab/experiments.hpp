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

// Runs kernels against the exact oracle over sampled pairs and tallies the
// ulp distance of every result into buckets 0, 1, 2 and 3-or-more.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hypotlab/format.hpp"
#include "hypotlab/kernels.hpp"
#include "hypotlab/oracle.hpp"
#include "hypotlab/sampling.hpp"

namespace hypotlab {

struct ExperimentSpec {
  SamplerSpec sampler;
  std::vector<AlgorithmId> algorithms;
  Precision format = Precision::binary64;
  unsigned shards = 1;
};

inline constexpr std::size_t kUlpBuckets = 4;  // |ulp| = 0, 1, 2, >= 3

struct UlpTally {
  AlgorithmId algorithm{};
  std::array<std::uint64_t, kUlpBuckets> buckets{};

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : buckets) t += c;
    return t;
  }
  std::uint64_t incorrect() const { return total() - buckets[0]; }
  double percent(std::size_t bucket) const {
    const auto t = total();
    return t == 0 ? 0.0 : 100.0 * static_cast<double>(buckets.at(bucket)) / static_cast<double>(t);
  }
  double pct_incorrect() const {
    const auto t = total();
    return t == 0 ? 0.0 : 100.0 * static_cast<double>(incorrect()) / static_cast<double>(t);
  }

  friend bool operator==(const UlpTally&, const UlpTally&) = default;
};

struct ResultTable {
  SamplerSpec sampler;
  Precision format = Precision::binary64;
  std::vector<UlpTally> rows;

  const UlpTally& at(AlgorithmId id) const {
    for (const auto& r : rows) {
      if (r.algorithm == id) return r;
    }
    throw std::out_of_range("algorithm not in table: " + std::string(name(id)));
  }

  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

/// Bucket index for |computed - reference| in ulps. Infinities sit one step
/// past the largest finite value; a NaN mismatch counts as 3+.
template <SupportedFloat T>
std::size_t ulp_bucket(T computed, T reference) {
  if (std::isnan(computed) || std::isnan(reference)) {
    return std::isnan(computed) && std::isnan(reference) ? 0 : kUlpBuckets - 1;
  }
  __int128 d = static_cast<__int128>(to_ordered(computed)) - to_ordered(reference);
  if (d < 0) d = -d;
  return static_cast<std::size_t>(std::min<__int128>(d, kUlpBuckets - 1));
}

inline void validate(const ExperimentSpec& spec) {
  if (spec.algorithms.empty()) throw config_error("experiment needs at least one algorithm");
  for (AlgorithmId id : spec.algorithms) {
    if (!supports(id, spec.format)) {
      throw config_error(std::string(name(id)) + " is not available for " +
                         std::string(to_string(spec.format)));
    }
  }
  if (spec.shards == 0) throw config_error("shard count must be at least 1");
  if (spec.sampler.kind == SamplerKind::exponent_gap && spec.sampler.gap_n < 0) {
    throw config_error("exponent gap must be nonnegative");
  }
}

namespace detail {

using Buckets = std::vector<std::array<std::uint64_t, kUlpBuckets>>;

template <SupportedFloat T>
Buckets tally_shard(const SamplerSpec& shard, std::span<const AlgorithmId> algorithms) {
  std::vector<KernelFn<T>> fns;
  for (AlgorithmId id : algorithms) fns.push_back(kernel<T>(id));
  Buckets counts(algorithms.size());
  for_each_pair<T>(shard, [&](T a, T b) {
    const T reference = oracle_hypot(a, b);
    for (std::size_t k = 0; k < fns.size(); ++k) {
      ++counts[k][ulp_bucket(fns[k](a, b), reference)];
    }
  });
  return counts;
}

template <SupportedFloat T>
ResultTable run_cell_as(const ExperimentSpec& spec) {
  const auto shards = split(spec.sampler, spec.shards);
  std::vector<Buckets> partial(shards.size());
  std::vector<std::exception_ptr> errors(shards.size());
  {
    std::vector<std::jthread> workers;
    workers.reserve(shards.size());
    for (std::size_t s = 0; s < shards.size(); ++s) {
      workers.emplace_back([&, s] {
        try {
          partial[s] = tally_shard<T>(shards[s], spec.algorithms);
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ResultTable table{spec.sampler, spec.format, {}};
  for (std::size_t k = 0; k < spec.algorithms.size(); ++k) {
    UlpTally row{spec.algorithms[k], {}};
    for (const auto& p : partial) {
      for (std::size_t b = 0; b < kUlpBuckets; ++b) row.buckets[b] += p[k][b];
    }
    if (row.total() != spec.sampler.count) throw std::logic_error("tally lost samples");
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace detail

/// One oracle evaluation per pair, shared by every algorithm in the spec.
/// Deterministic given the spec, whatever the shard count.
inline ResultTable run_cell(const ExperimentSpec& spec) {
  validate(spec);
  return spec.format == Precision::binary64 ? detail::run_cell_as<double>(spec)
                                            : detail::run_cell_as<float>(spec);
}

inline unsigned default_shards() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Standard-normal pairs, every algorithm available for the format.
inline ResultTable run_table1(std::uint64_t seed, std::uint64_t count, unsigned shards = 1,
                              Precision format = Precision::binary64) {
  if (count < 10'000) throw config_error("table1 needs at least 10^4 samples");
  ExperimentSpec spec;
  spec.sampler = {SamplerKind::normal_pair, 0, seed, count, 0};
  spec.algorithms = algorithms_for(format);
  spec.format = format;
  spec.shards = shards;
  return run_cell(spec);
}

/// One exponent-gap cell per N. Every cell uses the same seed.
inline std::vector<ResultTable> run_table2(std::uint64_t seed, std::uint64_t count,
                                           std::span<const int> n_values, unsigned shards = 1,
                                           Precision format = Precision::binary64) {
  for (int n : n_values) {
    if (n < 0) throw config_error("exponent gap must be nonnegative");
  }
  std::vector<ResultTable> out;
  out.reserve(n_values.size());
  for (int n : n_values) {
    ExperimentSpec spec;
    spec.sampler = {SamplerKind::exponent_gap, n, seed, count, 0};
    spec.algorithms = algorithms_for(format);
    spec.format = format;
    spec.shards = shards;
    out.push_back(run_cell(spec));
  }
  return out;
}

inline std::vector<int> default_gaps() {
  std::vector<int> n(30);
  for (int i = 0; i < 30; ++i) n[i] = i;
  return n;
}

}  // namespace hypotlab
