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

// CSV and text output for experiment results.
//
// <stem>.csv          n_gap,algorithm,samples,ulp0,ulp1,ulp2,ulp3plus,pct_incorrect
// <stem>_summary.txt  human-readable tables
// <stem>_plot.csv     n_gap,algorithm,pct_incorrect (long format, one series
//                     per algorithm)
//
// Normal-pair rows carry the literal "normal" in the n_gap column.
// Percentages are printed with 7 decimals. Output depends only on the
// tables, so identical runs give identical bytes.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypotlab/experiments.hpp"

namespace hypotlab {

inline constexpr const char* kCsvHeader =
    "n_gap,algorithm,samples,ulp0,ulp1,ulp2,ulp3plus,pct_incorrect";

namespace detail {

inline std::string gap_label(const SamplerSpec& s) {
  return s.kind == SamplerKind::normal_pair ? "normal" : std::to_string(s.gap_n);
}

inline std::string pct7(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7f", v);
  return buf;
}

inline std::string hex_seed(std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace detail

inline std::string results_csv(const std::vector<ResultTable>& tables) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      out << detail::gap_label(t.sampler) << ',' << name(r.algorithm) << ',' << r.total();
      for (auto c : r.buckets) out << ',' << c;
      out << ',' << detail::pct7(r.pct_incorrect()) << '\n';
    }
  }
  return out.str();
}

inline std::string plot_csv(const std::vector<ResultTable>& tables) {
  std::ostringstream out;
  out << "n_gap,algorithm,pct_incorrect\n";
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      out << detail::gap_label(t.sampler) << ',' << name(r.algorithm) << ','
          << detail::pct7(r.pct_incorrect()) << '\n';
    }
  }
  return out.str();
}

inline std::string summary_text(const std::vector<ResultTable>& tables) {
  std::ostringstream out;
  if (tables.empty()) return {};
  const auto& first = tables.front();
  out << "format " << to_string(first.format) << ", seed " << detail::hex_seed(first.sampler.seed)
      << ", " << first.sampler.count << " samples per cell\n\n";

  char line[160];
  std::snprintf(line, sizeof line, "%-7s %-18s %12s %12s %12s %12s\n", "n_gap", "algorithm",
                "1 ulp %", "2 ulp %", "3+ ulp %", "incorrect %");
  out << line;
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      std::snprintf(line, sizeof line, "%-7s %-18s %12.7f %12.7f %12.7f %12.7f\n",
                    detail::gap_label(t.sampler).c_str(), std::string(name(r.algorithm)).c_str(),
                    r.percent(1), r.percent(2), r.percent(3), r.pct_incorrect());
      out << line;
    }
  }

  // Matrix view: one line per gap, one column per algorithm.
  if (tables.size() > 1) {
    out << "\npercent incorrectly rounded\n";
    std::snprintf(line, sizeof line, "%-7s", "n_gap");
    out << line;
    for (const auto& r : first.rows) {
      std::snprintf(line, sizeof line, " %18s", std::string(name(r.algorithm)).c_str());
      out << line;
    }
    out << '\n';
    for (const auto& t : tables) {
      std::snprintf(line, sizeof line, "%-7s", detail::gap_label(t.sampler).c_str());
      out << line;
      for (const auto& r : t.rows) {
        std::snprintf(line, sizeof line, " %18.7f", r.pct_incorrect());
        out << line;
      }
      out << '\n';
    }
  }
  return out.str();
}

/// Writes <stem>.csv, <stem>_summary.txt and <stem>_plot.csv under `dir`
/// and returns their paths. Nothing is written if validation fails.
inline std::vector<std::filesystem::path> emit_report(const std::vector<ResultTable>& tables,
                                                      const std::filesystem::path& dir,
                                                      const std::string& stem) {
  if (tables.empty()) throw config_error("no result tables to report");
  for (const auto& t : tables) {
    if (t.rows.empty()) throw config_error("result table has no algorithms");
  }

  const std::vector<std::pair<std::filesystem::path, std::string>> files = {
      {dir / (stem + ".csv"), results_csv(tables)},
      {dir / (stem + "_summary.txt"), summary_text(tables)},
      {dir / (stem + "_plot.csv"), plot_csv(tables)},
  };

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [path, body] : files) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << body) || !f.flush()) {
      for (const auto& p : written) std::filesystem::remove(p, ec);
      throw std::runtime_error("cannot write " + path.string());
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace hypotlab
