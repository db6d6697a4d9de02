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

#ifndef SATFORGE_SOLVER_HPP_
#define SATFORGE_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "satforge/cdcl_engine.hpp"
#include "satforge/cnf.hpp"
#include "satforge/heuristics.hpp"

namespace satforge {

struct SolverStats {
  std::int64_t conflicts = 0;
  std::int64_t reduces = 0;  // conflicts since the last reduce round
  std::int64_t decisions = 0;
  std::int64_t restarts = 0;
  std::int64_t rephases = 0;
  std::int64_t reduce_rounds = 0;
  std::int64_t propagations = 0;
  double var_inc = 0.0;
  std::int64_t reduce_limit = 0;
  std::vector<double> activity;  // index 1..num_vars

  friend bool operator==(const SolverStats&, const SolverStats&) = default;
};

enum class Outcome { kSat, kUnsat, kUnknown };
std::string_view outcome_name(Outcome o);

struct SolveResult {
  Outcome outcome = Outcome::kUnknown;
  Assignment model;  // complete when outcome == kSat
  SolverStats stats;
  double elapsed = 0.0;  // wall-clock seconds
};

struct SolveLimits {
  double wall_timeout = 5000.0;  // seconds, must be > 0
  std::optional<std::int64_t> conflict_budget;
};

struct Conflict {
  int cref;  // -1 for an input clause refuted while loading
  Clause clause;
};

struct ConflictAnalysis {
  Clause learned;  // learned.literals()[0] is the asserting literal
  int backtrack_level;
};

// The CDCL engine bound to a HeuristicHooks set. Besides the full solve(),
// the individual steps of the search loop are exposed for inspection.
class Solver final : public cdcl::Engine<Solver> {
 public:
  Solver(const CnfFormula& formula, HeuristicHooks hooks, std::uint64_t seed = 0);

  SolveResult solve(const SolveLimits& limits);

  // Propagates to a fixpoint; returns the conflicting clause if any.
  std::optional<Conflict> unit_propagate();
  // First-UIP analysis of a conflict at decision level > 0. Throws
  // std::logic_error at level 0.
  ConflictAnalysis analyze_conflict(const Conflict& conflict);
  // Throws std::invalid_argument unless 0 <= level < decision_level().
  void backtrack_to(int level);
  // Throws std::logic_error when every variable is assigned.
  Literal make_decision();

  SolverStats stats() const;
  bool consistent_on_load() const { return consistent_; }
  const CnfFormula& formula() const { return formula_; }

  // Slot dispatch used by the engine.
  void restart() { hooks_.restart(*this); }
  bool restart_condition() { return hooks_.restart_condition(*this); }
  void restart_condition_update() { hooks_.restart_condition_update(*this); }
  void reduce() { hooks_.reduce(*this); }
  bool reduce_condition() { return hooks_.reduce_condition(*this); }
  void rephase() { hooks_.rephase(*this); }
  bool rephase_condition() { return hooks_.rephase_condition(*this); }
  void bump_var(int var, double coeff) { hooks_.bump_var(*this, var, coeff); }
  double bump_var_heuristic(int var) { return hooks_.bump_var_heuristic(*this, var); }

 private:
  const CnfFormula& formula_;
  HeuristicHooks hooks_;
  bool consistent_ = true;
};

// Solves `formula` with the given heuristics. Sat results carry a model that
// satisfies the formula; Unknown means a limit was exhausted.
SolveResult solve(const CnfFormula& formula, const HeuristicHooks& hooks, const SolveLimits& limits,
                  std::uint64_t seed = 0);

}  // namespace satforge

#endif  // SATFORGE_SOLVER_HPP_
