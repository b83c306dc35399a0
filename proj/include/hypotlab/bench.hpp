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

// Per-call latency of each kernel over one fixed batch of input pairs.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "hypotlab/experiments.hpp"

namespace hypotlab {

struct BenchRow {
  AlgorithmId algorithm{};
  double median_ns = 0;
  double min_ns = 0;
  double max_ns = 0;
  /// Median absolute deviation of the per-repetition timings.
  double mad_ns = 0;
  int repetitions = 0;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline volatile double bench_sink = 0;

template <SupportedFloat T>
std::vector<BenchRow> bench_as(const ExperimentSpec& spec, int repetitions) {
  const auto batch = generate<T>(spec.sampler);
  const auto n = static_cast<double>(batch.size());
  std::vector<std::vector<double>> samples(spec.algorithms.size());

  auto time_once = [&](AlgorithmId id) {
    return with_kernel<T>(id, [&](auto fn) {
      T acc = 0;
      const auto t0 = std::chrono::steady_clock::now();
      for (const auto& p : batch) acc += fn(p.a, p.b);
      const auto t1 = std::chrono::steady_clock::now();
      bench_sink = bench_sink + static_cast<double>(acc);
      return std::chrono::duration<double, std::nano>(t1 - t0).count() / n;
    });
  };

  for (AlgorithmId id : spec.algorithms) time_once(id);  // warm-up
  // Algorithms are interleaved within each repetition so drift hits all alike.
  for (int r = 0; r < repetitions; ++r) {
    for (std::size_t k = 0; k < spec.algorithms.size(); ++k) {
      samples[k].push_back(time_once(spec.algorithms[k]));
    }
  }

  std::vector<BenchRow> rows;
  for (std::size_t k = 0; k < spec.algorithms.size(); ++k) {
    const auto& s = samples[k];
    const double med = median(s);
    std::vector<double> dev;
    for (double x : s) dev.push_back(std::fabs(x - med));
    rows.push_back({spec.algorithms[k], med, *std::min_element(s.begin(), s.end()),
                    *std::max_element(s.begin(), s.end()), median(dev), repetitions});
  }
  return rows;
}

}  // namespace detail

/// Median and spread of ns/call per algorithm; the sampler defines the batch.
inline std::vector<BenchRow> bench(const ExperimentSpec& spec, int repetitions) {
  validate(spec);
  if (repetitions < 3) throw config_error("bench needs at least 3 repetitions");
  if (spec.sampler.count == 0) throw config_error("bench needs a nonempty batch");
  return spec.format == Precision::binary64 ? detail::bench_as<double>(spec, repetitions)
                                            : detail::bench_as<float>(spec, repetitions);
}

}  // namespace hypotlab
