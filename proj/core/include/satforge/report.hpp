// Copyright 2026 The satforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Tables and plots derived from campaign and bench logs.

#ifndef SATFORGE_REPORT_HPP_
#define SATFORGE_REPORT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "satforge/heuristics.hpp"
#include "satforge/search.hpp"

namespace satforge {

// 1 - (curr - min) / (2 (max - min)), or 1 when max == min.
double normalized_score(double curr, double min, double max);

struct ReportRow {
  std::string dataset;
  std::string solver;
  double par2 = 0.0;
  int solved = 0;
  std::optional<double> normalized;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

// Fills `normalized` per dataset when more than one solver is present in the
// input; leaves it empty otherwise.
void normalize_rows(std::vector<ReportRow>& rows);

struct ConvergencePoint {
  int iteration = 0;
  std::optional<double> candidate_par2;  // absent for malformed or uncompiled candidates
  double best_par2 = 0.0;
  bool accepted = false;
  std::vector<Slot> slots;

  friend bool operator==(const ConvergencePoint&, const ConvergencePoint&) = default;
};

std::vector<ConvergencePoint> convergence(const std::vector<IterationRecord>& history);

// Header: iteration,candidate_par2,best_par2,accepted,slots. Slots are
// separated by ';'. Numbers are printed with round-trip precision.
std::string convergence_csv(const std::vector<ConvergencePoint>& points);
std::vector<ConvergencePoint> parse_convergence_csv(const std::string& text);

// Header: dataset,solver,par2,solved[,normalized]; the last column only when
// some row has a normalized score.
std::string comparison_csv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> parse_comparison_csv(const std::string& text);

std::string convergence_svg(const std::vector<ConvergencePoint>& points, const std::string& title);
std::string comparison_svg(const std::vector<ReportRow>& rows);

// Final line of a bench log: {"summary": {...}}.
struct BenchSummary {
  std::string solver;
  std::string dataset;
  double par2 = 0.0;
  int solved = 0;
  int instances = 0;
  bool valid = true;
  double timeout = 0.0;
};
nlohmann::json to_json(const BenchSummary& s);
BenchSummary bench_summary_from_json(const nlohmann::json& j);

}  // namespace satforge

#endif  // SATFORGE_REPORT_HPP_
