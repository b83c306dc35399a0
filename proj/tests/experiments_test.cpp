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

#include "hypotlab/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include "hypotlab/bench.hpp"
#include "hypotlab/report.hpp"
#include "hypotlab/verify.hpp"

namespace hypotlab {
namespace {

namespace fs = std::filesystem;

ExperimentSpec gap_cell(int n, std::uint64_t count, unsigned shards = 1) {
  ExperimentSpec spec;
  spec.sampler = {SamplerKind::exponent_gap, n, kDefaultSeed, count, 0};
  spec.algorithms = algorithms_for(Precision::binary64);
  spec.shards = shards;
  return spec;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("hypotlab_" + std::to_string(::getpid()) + "_" +
                                                 std::to_string(counter_++))) {
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

TEST(UlpBucket, Classification) {
  EXPECT_EQ(ulp_bucket(1.0, 1.0), 0u);
  EXPECT_EQ(ulp_bucket(next_up(1.0), 1.0), 1u);
  EXPECT_EQ(ulp_bucket(next_down(next_down(1.0)), 1.0), 2u);
  EXPECT_EQ(ulp_bucket(2.0, 1.0), 3u);
  EXPECT_EQ(ulp_bucket(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::max()), 1u);
  EXPECT_EQ(ulp_bucket(std::numeric_limits<double>::quiet_NaN(), 1.0), 3u);
}

TEST(RunCell, TalliesAreConserved) {
  const auto t = run_cell(gap_cell(3, 20'000));
  ASSERT_EQ(t.rows.size(), 6u);
  for (const auto& r : t.rows) EXPECT_EQ(r.total(), 20'000u) << name(r.algorithm);
}

TEST(RunCell, ShardInvariance) {
  const auto one = run_cell(gap_cell(1, 30'000, 1));
  const auto eight = run_cell(gap_cell(1, 30'000, 8));
  EXPECT_EQ(one, eight);
}

TEST(RunCell, Deterministic) { EXPECT_EQ(run_cell(gap_cell(2, 10'000)), run_cell(gap_cell(2, 10'000))); }

TEST(RunCell, ConfigurationErrors) {
  auto spec = gap_cell(0, 100);
  spec.format = Precision::binary32;
  spec.algorithms = {AlgorithmId::clib};
  EXPECT_THROW(run_cell(spec), config_error);
  spec.algorithms.clear();
  EXPECT_THROW(run_cell(spec), config_error);
  auto zero_shards = gap_cell(0, 100, 0);
  EXPECT_THROW(run_cell(zero_shards), config_error);
  EXPECT_THROW(run_table1(1, 9'999), config_error);
}

TEST(RunCell, Binary32Cell) {
  ExperimentSpec spec;
  spec.sampler = {SamplerKind::normal_pair, 0, 9, 50'000, 0};
  spec.algorithms = algorithms_for(Precision::binary32);
  spec.format = Precision::binary32;
  const auto t = run_cell(spec);
  EXPECT_EQ(t.at(AlgorithmId::corrected_fused).incorrect(), 0u);
  EXPECT_EQ(t.at(AlgorithmId::naive_unfused).buckets[2], 0u);
  EXPECT_THROW(t.at(AlgorithmId::clib), std::out_of_range);
}

TEST(RunCell, WideRegimeCollapses) {
  for (int n : {28, 29, 40}) {
    const auto t = run_cell(gap_cell(n, 20'000));
    for (const auto& r : t.rows) EXPECT_EQ(r.incorrect(), 0u) << n << ' ' << name(r.algorithm);
  }
}

// Corrected kernels are never worse than the naive ones in any cell.
TEST(RunCell, OrderingAcrossGaps) {
  for (int n : {0, 3, 10, 26}) {
    const auto t = run_cell(gap_cell(n, 50'000));
    const auto cf = t.at(AlgorithmId::corrected_fused).incorrect();
    const auto cu = t.at(AlgorithmId::corrected_unfused).incorrect();
    EXPECT_LE(cf, cu) << n;
    EXPECT_LE(cu, t.at(AlgorithmId::naive_fused).incorrect()) << n;
    EXPECT_LE(cu, t.at(AlgorithmId::naive_unfused).incorrect()) << n;
  }
}

std::vector<ResultTable> synthetic_table2() {
  std::vector<ResultTable> tables;
  for (int n = 0; n < 30; ++n) {
    ResultTable t{{SamplerKind::exponent_gap, n, 5, 1000, 0}, Precision::binary64, {}};
    for (AlgorithmId id : kAllAlgorithms) {
      t.rows.push_back({id, {1000 - static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(n), 0, 0}});
    }
    tables.push_back(t);
  }
  return tables;
}

TEST(Report, CsvShape) {
  const std::string csv = results_csv(synthetic_table2());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n_gap,algorithm,samples,ulp0,ulp1,ulp2,ulp3plus,pct_incorrect");
  std::getline(in, line);
  EXPECT_EQ(line, "0,julia11,1000,1000,0,0,0,0.0000000");
  int rows = 1;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, 30 * 6);
  EXPECT_EQ(last, "29,corrected_fused,1000,971,29,0,0,2.9000000");
}

TEST(Report, NormalRowsAreLabelled) {
  ResultTable t{{SamplerKind::normal_pair, 0, 5, 3, 0}, Precision::binary64, {{AlgorithmId::clib, {2, 1, 0, 0}}}};
  EXPECT_NE(results_csv({t}).find("normal,clib,3,2,1,0,0,33.3333333"), std::string::npos);
}

TEST(Report, EmitIsByteStable) {
  TempDir a, b;
  const auto tables = synthetic_table2();
  const auto fa = emit_report(tables, a.path(), "table2");
  const auto fb = emit_report(tables, b.path(), "table2");
  ASSERT_EQ(fa.size(), 3u);
  for (std::size_t i = 0; i < fa.size(); ++i) {
    EXPECT_EQ(slurp(fa[i]), slurp(fb[i])) << fa[i];
    EXPECT_EQ(fa[i].filename(), fb[i].filename());
  }
  const std::string plot = slurp(a.path() / "table2_plot.csv");
  EXPECT_EQ(plot.substr(0, plot.find('\n')), "n_gap,algorithm,pct_incorrect");
  EXPECT_NE(slurp(a.path() / "table2_summary.txt").find("percent incorrectly rounded"), std::string::npos);
}

TEST(Report, EmptyInputWritesNothing) {
  TempDir d;
  EXPECT_THROW(emit_report({}, d.path(), "t"), config_error);
  ResultTable empty{{SamplerKind::exponent_gap, 1, 1, 10, 0}, Precision::binary64, {}};
  EXPECT_THROW(emit_report({empty}, d.path(), "t"), config_error);
  EXPECT_FALSE(fs::exists(d.path()));
}

TEST(Report, UnwritableDestination) {
  TempDir d;
  fs::create_directories(d.path());
  std::ofstream(d.path() / "file") << "x";
  EXPECT_THROW(emit_report(synthetic_table2(), d.path() / "file" / "sub", "t"), std::runtime_error);
}

TEST(Bench, EveryKernelRuns) {
  ExperimentSpec spec;
  spec.sampler = {SamplerKind::normal_pair, 0, 1, 1, 0};
  spec.algorithms = algorithms_for(Precision::binary64);
  const auto rows = bench(spec, 3);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    EXPECT_GT(r.median_ns, 0.0) << name(r.algorithm);
    EXPECT_LE(r.min_ns, r.median_ns);
    EXPECT_GE(r.max_ns, r.median_ns);
    EXPECT_EQ(r.repetitions, 3);
  }
}

TEST(Bench, RejectsTooFewRepetitions) {
  ExperimentSpec spec;
  spec.sampler = {SamplerKind::normal_pair, 0, 1, 10, 0};
  spec.algorithms = {AlgorithmId::clib};
  EXPECT_THROW(bench(spec, 2), config_error);
}

}  // namespace
}  // namespace hypotlab
