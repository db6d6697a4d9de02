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


#include "satforge/report.hpp"

#include <gtest/gtest.h>

#include "satforge/random.hpp"

namespace satforge {
namespace {

TEST(NormalizedScoreTest, Endpoints) {
  EXPECT_DOUBLE_EQ(normalized_score(10, 10, 30), 1.0);
  EXPECT_DOUBLE_EQ(normalized_score(30, 10, 30), 0.5);
  EXPECT_DOUBLE_EQ(normalized_score(20, 10, 30), 0.75);
  EXPECT_DOUBLE_EQ(normalized_score(7, 7, 7), 1.0);
}

TEST(NormalizeRowsTest, PerDatasetRanges) {
  std::vector<ReportRow> rows = {{"a", "x", 10, 5, {}}, {"a", "y", 20, 4, {}}, {"b", "x", 3, 1, {}},
                                 {"b", "y", 3, 1, {}}};
  normalize_rows(rows);
  EXPECT_DOUBLE_EQ(*rows[0].normalized, 1.0);
  EXPECT_DOUBLE_EQ(*rows[1].normalized, 0.5);
  EXPECT_DOUBLE_EQ(*rows[2].normalized, 1.0);
  EXPECT_DOUBLE_EQ(*rows[3].normalized, 1.0);
}

TEST(NormalizeRowsTest, SingleSolverHasNoScore) {
  std::vector<ReportRow> rows = {{"a", "x", 10, 5, 0.7}, {"b", "x", 20, 4, {}}};
  normalize_rows(rows);
  EXPECT_FALSE(rows[0].normalized.has_value());
  EXPECT_FALSE(rows[1].normalized.has_value());
  EXPECT_EQ(comparison_csv(rows).rfind("dataset,solver,par2,solved\n", 0), 0u);
}

TEST(NormalizeRowsTest, RandomTablesStayInRange) {
  Rng rng(5);
  for (int trial = 0; trial < 200; trial++) {
    std::vector<ReportRow> rows;
    int n = 2 + static_cast<int>(rng.uniform_below(6));
    for (int i = 0; i < n; i++) rows.push_back({"d", "s" + std::to_string(i), rng.uniform_unit() * 100, 0, {}});
    normalize_rows(rows);
    double lo = 1e9, hi = -1;
    for (const auto& r : rows) {
      lo = std::min(lo, r.par2);
      hi = std::max(hi, r.par2);
    }
    for (const auto& r : rows) {
      ASSERT_TRUE(r.normalized);
      EXPECT_GE(*r.normalized, 0.5);
      EXPECT_LE(*r.normalized, 1.0);
      if (r.par2 == lo) EXPECT_DOUBLE_EQ(*r.normalized, 1.0);
      if (r.par2 == hi) EXPECT_DOUBLE_EQ(*r.normalized, 0.5);
    }
  }
}

TEST(ConvergenceTest, FromHistory) {
  std::vector<IterationRecord> h(2);
  h[0].iteration = 0;
  h[0].plan = {Slot::kReduce, Slot::kRephase};
  h[0].evaluation = EvaluationResult{{}, 4.5, 1, true, 10};
  h[0].accepted = true;
  h[0].best_fitness = 4.5;
  h[1].iteration = 1;
  h[1].plan = {Slot::kRestart};
  h[1].best_fitness = 4.5;
  auto points = convergence(h);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].candidate_par2, 4.5);
  EXPECT_FALSE(points[1].candidate_par2.has_value());
  EXPECT_EQ(points[0].slots, h[0].plan);
}

TEST(ConvergenceCsvTest, RoundTrip) {
  Rng rng(8);
  std::vector<ConvergencePoint> points;
  for (int i = 0; i < 50; i++) {
    ConvergencePoint p;
    p.iteration = i;
    if (i % 3) p.candidate_par2 = rng.uniform_unit() * 1000;
    p.best_par2 = rng.uniform_unit() * 1000;
    p.accepted = i % 2 == 0;
    for (Slot s : kAllSlots) {
      if (rng.bernoulli(0.2)) p.slots.push_back(s);
    }
    points.push_back(p);
  }
  std::string csv = convergence_csv(points);
  EXPECT_EQ(csv.rfind("iteration,candidate_par2,best_par2,accepted,slots\n", 0), 0u);
  EXPECT_EQ(parse_convergence_csv(csv), points);
  EXPECT_THROW(parse_convergence_csv("bad\n"), std::invalid_argument);
  EXPECT_THROW(parse_convergence_csv("iteration,candidate_par2,best_par2,accepted,slots\n1,,x,0,\n"),
               std::invalid_argument);
}

TEST(ComparisonCsvTest, RoundTripWithQuoting) {
  std::vector<ReportRow> rows = {{"set, one", "base\"line", 12.25, 3, {}}, {"set, one", "evolved", 0.1, 4, {}}};
  normalize_rows(rows);
  std::string csv = comparison_csv(rows);
  EXPECT_EQ(csv.rfind("dataset,solver,par2,solved,normalized\n", 0), 0u);
  EXPECT_EQ(parse_comparison_csv(csv), rows);
}

TEST(SvgTest, WellFormedEnough) {
  std::vector<ConvergencePoint> points = {{0, 3.0, 3.0, true, {Slot::kReduce}}, {1, std::nullopt, 3.0, false, {}}};
  std::string svg = convergence_svg(points, "a <b>");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("a &lt;b&gt;"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  std::string bars = comparison_svg({{"d", "s", 1.0, 1, 1.0}});
  EXPECT_NE(bars.find("</svg>"), std::string::npos);
  EXPECT_NE(convergence_svg({}, "empty").find("</svg>"), std::string::npos);
}

TEST(BenchSummaryTest, JsonRoundTrip) {
  BenchSummary s{"baseline", "php", 2.5, 3, 4, true, 10};
  BenchSummary back = bench_summary_from_json(to_json(s));
  EXPECT_EQ(back.solver, "baseline");
  EXPECT_EQ(back.dataset, "php");
  EXPECT_DOUBLE_EQ(back.par2, 2.5);
  EXPECT_EQ(back.solved, 3);
  EXPECT_EQ(back.instances, 4);
  EXPECT_TRUE(back.valid);
  EXPECT_DOUBLE_EQ(back.timeout, 10);
}

}  // namespace
}  // namespace satforge
