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


#include "satforge/solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>

#include "oracles.hpp"
#include "satforge/generators.hpp"

namespace satforge {
namespace {

// Values of a clause's literals under the solver's current assignment.
struct ClauseScan {
  int falsified = 0;
  int unassigned = 0;
  bool satisfied = false;
};

ClauseScan scan(const Solver& s, const Clause& c) {
  ClauseScan r;
  for (Literal l : c.literals()) {
    int v = s.lit_value(l.value());
    if (v == 1) r.satisfied = true;
    if (v == -1) r.falsified++;
    if (v == 0) r.unassigned++;
  }
  return r;
}

HeuristicHooks dynamic_hooks() {
  HeuristicHooks h = baseline_hooks();
  h.reduce_condition = dynamic_threshold_reduce_condition();
  return h;
}

TEST(SolverTest, AgreesWithDpllOnRandomFormulas) {
  int sat = 0;
  for (std::uint64_t seed = 0; seed < 150; seed++) {
    int n = 10 + static_cast<int>(seed % 25);
    CnfFormula f = gen_random_ksat(n, static_cast<int>(n * 4.26), 3, seed);
    SolveResult r = solve(f, baseline_hooks(), SolveLimits{});
    auto expected = oracle::dpll(f);
    ASSERT_NE(r.outcome, Outcome::kUnknown);
    ASSERT_EQ(r.outcome == Outcome::kSat, expected.has_value()) << "seed " << seed;
    if (r.outcome == Outcome::kSat) {
      sat++;
      std::vector<bool> model(static_cast<std::size_t>(n) + 1);
      for (int v = 1; v <= n; v++) model[v] = r.model[v] == Value::kTrue;
      EXPECT_TRUE(oracle::check_model(f, model));
    }
  }
  // Near the threshold both answers must show up.
  EXPECT_GT(sat, 10);
  EXPECT_LT(sat, 140);
}

TEST(SolverTest, VariantsAgreeWithDpll) {
  HeuristicHooks guard = baseline_hooks();
  guard.bump_var = overflow_guard_bump_var();
  for (std::uint64_t seed = 200; seed < 260; seed++) {
    CnfFormula f = gen_random_ksat(40, 170, 3, seed);
    bool expected = oracle::dpll(f).has_value();
    EXPECT_EQ(solve(f, dynamic_hooks(), SolveLimits{}).outcome == Outcome::kSat, expected);
    EXPECT_EQ(solve(f, guard, SolveLimits{}).outcome == Outcome::kSat, expected);
  }
}

TEST(SolverTest, TrivialFormulas) {
  EXPECT_EQ(solve(CnfFormula{0, {}}, baseline_hooks(), SolveLimits{}).outcome, Outcome::kSat);
  EXPECT_EQ(solve(parse_dimacs("p cnf 2 0\n"), baseline_hooks(), SolveLimits{}).outcome, Outcome::kSat);
  EXPECT_EQ(solve(parse_dimacs("p cnf 1 1\n0\n"), baseline_hooks(), SolveLimits{}).outcome, Outcome::kUnsat);
  EXPECT_EQ(solve(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"), baseline_hooks(), SolveLimits{}).outcome,
            Outcome::kUnsat);
}

TEST(SolverTest, PigeonholeIsUnsat) {
  for (int holes = 1; holes <= 5; holes++) {
    EXPECT_EQ(solve(gen_pigeonhole(holes), baseline_hooks(), SolveLimits{}).outcome, Outcome::kUnsat);
  }
}

TEST(SolverTest, SameSeedSameRun) {
  CnfFormula f = gen_random_ksat(80, 340, 3, 7);
  SolveResult a = solve(f, baseline_hooks(), SolveLimits{}, 3);
  SolveResult b = solve(f, baseline_hooks(), SolveLimits{}, 3);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.stats, b.stats);
  EXPECT_EQ(a.model, b.model);
}

TEST(SolverTest, ConflictBudgetGivesUnknown) {
  SolveLimits limits;
  limits.conflict_budget = 10;
  SolveResult r = solve(gen_pigeonhole(7), baseline_hooks(), limits);
  EXPECT_EQ(r.outcome, Outcome::kUnknown);
  EXPECT_EQ(r.stats.conflicts, 10);
}

TEST(SolverTest, WallTimeoutGivesUnknown) {
  SolveLimits limits;
  limits.wall_timeout = 0.2;
  SolveResult r = solve(gen_pigeonhole(10), baseline_hooks(), limits);
  EXPECT_EQ(r.outcome, Outcome::kUnknown);
  EXPECT_LT(r.elapsed, 2.0);
}

TEST(SolverTest, RejectsBadArguments) {
  CnfFormula f = gen_pigeonhole(2);
  HeuristicHooks partial = baseline_hooks();
  partial.rephase = nullptr;
  EXPECT_THROW(Solver(f, partial), std::invalid_argument);
  SolveLimits limits;
  limits.wall_timeout = 0;
  EXPECT_THROW(solve(f, baseline_hooks(), limits), std::invalid_argument);
}

TEST(UnitPropagateTest, ContradictoryUnitsYieldFalsifiedInputClause) {
  CnfFormula f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
  Solver s(f, baseline_hooks());
  auto conflict = s.unit_propagate();
  ASSERT_TRUE(conflict.has_value());
  EXPECT_EQ(conflict->cref, -1);
  EXPECT_EQ(conflict->clause, (Clause{-1}));
  EXPECT_THROW(s.analyze_conflict(*conflict), std::logic_error);
}

TEST(UnitPropagateTest, ChainOfImplications) {
  CnfFormula f = parse_dimacs("p cnf 4 4\n1 0\n-1 2 0\n-2 3 0\n-3 -4 0\n");
  Solver s(f, baseline_hooks());
  EXPECT_FALSE(s.unit_propagate().has_value());
  EXPECT_EQ(s.value[1], 1);
  EXPECT_EQ(s.value[2], 1);
  EXPECT_EQ(s.value[3], 1);
  EXPECT_EQ(s.value[4], -1);
}

TEST(UnitPropagateTest, ReachesFixpointOrReportsFalsifiedClause) {
  for (std::uint64_t seed = 0; seed < 60; seed++) {
    CnfFormula f = gen_random_ksat(25, 100, 3, seed);
    Solver s(f, baseline_hooks(), seed);
    for (int step = 0; step < 30; step++) {
      auto conflict = s.unit_propagate();
      if (conflict) {
        EXPECT_TRUE(scan(s, conflict->clause).falsified == static_cast<int>(conflict->clause.size()));
        break;
      }
      for (const Clause& c : f.clauses) {
        ClauseScan cs = scan(s, c);
        if (cs.satisfied) continue;
        ASSERT_GE(cs.unassigned, 2) << "clause left unit or false at fixpoint, seed " << seed;
      }
      bool all_set = true;
      for (int v = 1; v <= f.num_vars; v++) all_set = all_set && s.value[v] != 0;
      if (all_set) break;
      s.make_decision();
    }
  }
}

// Drives the solver step by step and checks every learned clause.
TEST(AnalyzeConflictTest, FirstUipClausesAreImpliedAndAsserting) {
  int analysed = 0;
  for (std::uint64_t seed = 0; seed < 40; seed++) {
    CnfFormula f = gen_random_ksat(20, 90, 3, seed);
    Solver s(f, baseline_hooks(), seed);
    if (!s.consistent_on_load()) continue;
    for (int step = 0; step < 200; step++) {
      auto conflict = s.unit_propagate();
      if (!conflict) {
        bool all_set = true;
        for (int v = 1; v <= f.num_vars; v++) all_set = all_set && s.value[v] != 0;
        if (all_set) break;
        s.make_decision();
        continue;
      }
      if (s.decision_level() == 0) {
        EXPECT_THROW(s.analyze_conflict(*conflict), std::logic_error);
        EXPECT_FALSE(oracle::dpll(f).has_value());
        break;
      }
      int current = s.decision_level();
      ConflictAnalysis a = s.analyze_conflict(*conflict);
      const auto& lits = a.learned.literals();
      ASSERT_FALSE(lits.empty());
      std::vector<int> clause;
      int at_current = 0;
      int max_other = 0;
      for (std::size_t i = 0; i < lits.size(); i++) {
        int v = lits[i].var();
        clause.push_back(lits[i].value());
        EXPECT_EQ(s.lit_value(lits[i].value()), -1);
        if (s.level[v] == current) {
          at_current++;
          EXPECT_EQ(i, 0u) << "asserting literal must come first";
        } else {
          max_other = std::max(max_other, s.level[v]);
        }
      }
      EXPECT_EQ(at_current, 1) << "first UIP has exactly one literal at the conflict level";
      EXPECT_EQ(a.backtrack_level, max_other);
      EXPECT_TRUE(oracle::implies(f, clause)) << "seed " << seed;
      analysed++;
      std::vector<int> raw(clause.begin(), clause.end());
      // Keep lits[1] at the backtrack level as the engine expects.
      s.learn(raw, a.backtrack_level);
    }
  }
  EXPECT_GT(analysed, 50);
}

TEST(BacktrackTest, UnassignsLevelsAboveTarget) {
  CnfFormula f = gen_random_ksat(30, 60, 3, 1);
  Solver s(f, baseline_hooks());
  ASSERT_FALSE(s.unit_propagate().has_value());
  std::vector<std::size_t> trail_at_level;
  for (int i = 0; i < 4; i++) {
    trail_at_level.push_back(s.trail.size());
    s.make_decision();
    if (s.unit_propagate()) break;
  }
  int top = s.decision_level();
  ASSERT_GE(top, 2);
  EXPECT_THROW(s.backtrack_to(top), std::invalid_argument);
  EXPECT_THROW(s.backtrack_to(-1), std::invalid_argument);
  s.backtrack_to(1);
  EXPECT_EQ(s.decision_level(), 1);
  for (int v = 1; v <= f.num_vars; v++) {
    if (s.value[v] != 0) EXPECT_LE(s.level[v], 1);
  }
  EXPECT_EQ(s.trail.size(), trail_at_level[1]);
  EXPECT_EQ(s.propagated, static_cast<int>(s.trail.size()));
}

TEST(MakeDecisionTest, HighestActivityThenLowestIndex) {
  CnfFormula f = parse_dimacs("p cnf 4 1\n1 2 3 4 0\n");
  Solver s(f, baseline_hooks());
  // All activities equal: lowest index, saved phase negative.
  EXPECT_EQ(s.make_decision().value(), -1);
  s.backtrack_to(0);
  s.activity[3] = 5.0;
  s.vsids.update(3);
  s.saved[3] = 1;
  EXPECT_EQ(s.make_decision().value(), 3);
  EXPECT_EQ(s.make_decision().value(), -1);
  EXPECT_EQ(s.make_decision().value(), -2);
  EXPECT_EQ(s.make_decision().value(), -4);
  EXPECT_THROW(s.make_decision(), std::logic_error);
}

TEST(LubyTest, Sequence) {
  const int expected[] = {1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8};
  for (int i = 0; i < 15; i++) EXPECT_EQ(SolverState::luby(2, i), expected[i]) << i;
}

}  // namespace
}  // namespace satforge
