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

// hypotlab command-line driver.
//
//   hypotlab single A B [--algo NAME|all] [--format binary64|binary32]
//   hypotlab table1 [--seed S] [--samples N] [--shards K] [--out DIR]
//   hypotlab table2 [--seed S] [--samples N] [--n-list 0..29] [--shards K] [--out DIR]
//   hypotlab verify [--samples N] [--seed S]
//   hypotlab bench  [--samples N] [--reps R] [--algo ...] [--gap N] [--out DIR]
//
// Exit status: 0 success, 1 property failure or runtime error, 2 usage error.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypotlab/hypotlab.hpp"

namespace {

using namespace hypotlab;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t samples = 1'000'000;
  std::string format = "binary64";
  std::string algo = "all";
  std::string n_list = "0..29";
  std::string out = "results";
  unsigned shards = default_shards();
  int reps = 5;
  std::optional<int> gap;
  std::string a, b;
};

std::vector<AlgorithmId> parse_algorithms(const std::string& text, Precision p) {
  if (text == "all") return algorithms_for(p);
  std::vector<AlgorithmId> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const AlgorithmId id = parse_algorithm(item);
    if (!supports(id, p)) {
      throw config_error(item + " is not available for " + std::string(to_string(p)));
    }
    out.push_back(id);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw config_error("not an integer: " + std::string(s));
  }
  return v;
}

// "0,5,27" or "0..29" or a mix such as "0..3,27,28".
std::vector<int> parse_gaps(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const int lo = parse_int(std::string_view(item).substr(0, dots));
      const int hi = parse_int(std::string_view(item).substr(dots + 2));
      if (hi < lo) throw config_error("empty gap range: " + item);
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      out.push_back(parse_int(item));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (int n : out) {
    if (n < 0) throw config_error("exponent gaps must be nonnegative");
  }
  return out;
}

template <SupportedFloat T>
T parse_literal(const std::string& text) {
  char* end = nullptr;
  errno = 0;
  T v;
  if constexpr (std::same_as<T, float>) {
    v = std::strtof(text.c_str(), &end);
  } else {
    v = std::strtod(text.c_str(), &end);
  }
  if (text.empty() || end != text.c_str() + text.size()) {
    throw config_error("cannot parse floating-point literal: " + text);
  }
  return v;
}

template <SupportedFloat T>
int run_single(const Options& o, Precision p) {
  const T a = parse_literal<T>(o.a);
  const T b = parse_literal<T>(o.b);
  const auto algos = parse_algorithms(o.algo, p);
  const bool finite = std::isfinite(a) && std::isfinite(b);
  const std::optional<T> reference = finite ? std::optional<T>(oracle_hypot(a, b)) : std::nullopt;
  for (AlgorithmId id : algos) {
    const T r = dispatch(id, a, b);
    std::string oracle_text = "n/a";
    std::string ulp_text = "n/a";
    if (reference) {
      oracle_text = decimal(*reference) + " (" + hex(*reference) + ")";
      if (std::isfinite(r) && std::isfinite(*reference)) {
        ulp_text = std::to_string(ulp_distance(r, *reference));
      }
    }
    std::printf("%-18s result %s (%s)  oracle %s  ulp %s\n", std::string(name(id)).c_str(),
                decimal(r).c_str(), hex(r).c_str(), oracle_text.c_str(), ulp_text.c_str());
  }
  return 0;
}

int run_tables(const Options& o, bool table1, Precision p) {
  const std::vector<int> gaps = table1 ? std::vector<int>{} : parse_gaps(o.n_list);
  if (o.shards == 0) throw config_error("--shards must be at least 1");
  if (table1 && o.samples < 10'000) throw config_error("table1 needs --samples >= 10000");
  if (!table1 && o.samples == 0) throw config_error("--samples must be positive");

  std::vector<ResultTable> tables;
  if (table1) {
    tables.push_back(run_table1(o.seed, o.samples, o.shards, p));
  } else {
    tables = run_table2(o.seed, o.samples, gaps, o.shards, p);
  }
  emit_report(tables, o.out, table1 ? "table1" : "table2");
  std::cout << summary_text(tables);
  return 0;
}

int run_verify(const Options& o) {
  const auto report = verify(VerifyConfig{o.samples, o.seed});
  for (const auto& prop : report.properties) {
    if (prop.passed()) {
      std::printf("PASS %-34s checked %llu\n", prop.name.c_str(),
                  static_cast<unsigned long long>(prop.checked));
    } else {
      std::printf("FAIL %-34s %llu of %llu violated; first: %s\n", prop.name.c_str(),
                  static_cast<unsigned long long>(prop.violations),
                  static_cast<unsigned long long>(prop.checked), prop.reproducer.c_str());
    }
  }
  return report.passed() ? 0 : kExitFailure;
}

int run_bench(const Options& o, Precision p) {
  ExperimentSpec spec;
  spec.sampler = o.gap ? SamplerSpec{SamplerKind::exponent_gap, *o.gap, o.seed, o.samples, 0}
                       : SamplerSpec{SamplerKind::normal_pair, 0, o.seed, o.samples, 0};
  spec.algorithms = parse_algorithms(o.algo, p);
  spec.format = p;
  validate(spec);
  if (o.reps < 3) throw config_error("--reps must be at least 3");

  const auto rows = bench(spec, o.reps);
  std::filesystem::create_directories(o.out);
  const auto path = std::filesystem::path(o.out) / "bench.csv";
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot write " + path.string());
  csv << "algorithm,median_ns,min_ns,max_ns,mad_ns,repetitions\n";
  std::printf("%-18s %10s %10s %10s %10s\n", "algorithm", "median ns", "min ns", "max ns", "mad ns");
  for (const auto& r : rows) {
    std::printf("%-18s %10.3f %10.3f %10.3f %10.3f\n", std::string(name(r.algorithm)).c_str(),
                r.median_ns, r.min_ns, r.max_ns, r.mad_ns);
    csv << name(r.algorithm) << ',' << r.median_ns << ',' << r.min_ns << ',' << r.max_ns << ','
        << r.mad_ns << ',' << r.repetitions << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accuracy experiments for sqrt(a^2 + b^2) kernels"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_algo) {
    sub->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    sub->add_option("--format", o.format, "binary64 or binary32")->capture_default_str();
    if (with_algo) sub->add_option("--algo", o.algo, "algorithm name, comma list, or all")->capture_default_str();
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--samples", o.samples, "pairs per cell")->capture_default_str();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--shards", o.shards, "worker threads")
        ->envname("HYPOTLAB_SHARDS")
        ->capture_default_str();
  };

  auto* single = app.add_subcommand("single", "Evaluate kernels on one pair against the oracle");
  single->add_option("a", o.a, "first operand (decimal or hex float)")->required();
  single->add_option("b", o.b, "second operand (decimal or hex float)")->required();
  add_common(single, true);

  auto* table1 = app.add_subcommand("table1", "Standard-normal pairs");
  add_common(table1, false);
  add_run(table1);

  auto* table2 = app.add_subcommand("table2", "Exponent-gap sweep");
  add_common(table2, false);
  add_run(table2);
  table2->add_option("--n-list", o.n_list, "gaps, e.g. 0,5,27 or 0..29")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Run the property suite");
  verify_cmd->add_option("--samples", o.samples, "samples per property")->default_val(100000);
  verify_cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Per-call latency of each kernel");
  add_common(bench_cmd, true);
  add_run(bench_cmd);
  bench_cmd->get_option("--samples")->default_val(100000);
  bench_cmd->add_option("--reps", o.reps, "timed repetitions")->capture_default_str();
  bench_cmd->add_option("--gap", o.gap, "use exponent-gap pairs with this N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const Precision p = parse_precision(o.format);
    if (single->parsed()) {
      return p == Precision::binary64 ? run_single<double>(o, p) : run_single<float>(o, p);
    }
    if (table1->parsed()) return run_tables(o, true, p);
    if (table2->parsed()) return run_tables(o, false, p);
    if (verify_cmd->parsed()) return run_verify(o);
    if (bench_cmd->parsed()) return run_bench(o, p);
  } catch (const config_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
