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

#include <memory>
#include <stdexcept>

namespace satforge {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kSat:
      return "sat";
    case Outcome::kUnsat:
      return "unsat";
    case Outcome::kUnknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

std::vector<std::vector<int>> to_dimacs(const CnfFormula& formula) {
  std::vector<std::vector<int>> out;
  out.reserve(formula.clauses.size());
  for (const Clause& c : formula.clauses) {
    std::vector<int> lits;
    lits.reserve(c.size());
    for (Literal l : c.literals()) lits.push_back(l.value());
    out.push_back(std::move(lits));
  }
  return out;
}

Clause to_clause(const std::vector<int>& lits) {
  std::vector<Literal> out;
  out.reserve(lits.size());
  for (int l : lits) out.emplace_back(l);
  return Clause(std::move(out));
}

}  // namespace

Solver::Solver(const CnfFormula& formula, HeuristicHooks hooks, std::uint64_t seed)
    : formula_(formula), hooks_(std::move(hooks)) {
  if (!hooks_.complete()) throw std::invalid_argument("heuristic hooks must bind all nine slots");
  rng_state ^= seed;
  consistent_ = load(formula.num_vars, to_dimacs(formula));
}

SolveResult Solver::solve(const SolveLimits& limits) {
  if (!(limits.wall_timeout > 0)) throw std::invalid_argument("wall_timeout must be positive");
  cdcl::Limits engine_limits;
  engine_limits.wall_timeout = limits.wall_timeout;
  engine_limits.conflict_budget = limits.conflict_budget.value_or(-1);

  cdcl::Status status = Engine::solve(engine_limits);

  SolveResult result;
  result.elapsed = elapsed_seconds();
  result.stats = stats();
  switch (status) {
    case cdcl::Status::kSat: {
      result.outcome = Outcome::kSat;
      result.model = Assignment(vars);
      for (int v = 1; v <= vars; v++) result.model.set(v, value[v] == 1 ? Value::kTrue : Value::kFalse);
      if (!satisfies(formula_, result.model)) {
        throw std::logic_error("internal error: solver produced a non-satisfying model");
      }
      break;
    }
    case cdcl::Status::kUnsat:
      result.outcome = Outcome::kUnsat;
      break;
    case cdcl::Status::kUnknown:
      result.outcome = Outcome::kUnknown;
      break;
  }
  return result;
}

std::optional<Conflict> Solver::unit_propagate() {
  if (!consistent_) {
    // Refuted while loading units: report the input clause that is false.
    for (const Clause& c : formula_.clauses) {
      bool falsified = true;
      for (Literal l : c.literals()) falsified = falsified && lit_value(l.value()) == -1;
      if (falsified) return Conflict{-1, c};
    }
  }
  int cref = propagate();
  if (cref < 0) return std::nullopt;
  return Conflict{cref, to_clause(clause_DB[cref].lits)};
}

ConflictAnalysis Solver::analyze_conflict(const Conflict& conflict) {
  if (decision_level() == 0 || conflict.cref < 0) {
    throw std::logic_error("conflict at decision level 0: the formula is unsatisfiable");
  }
  std::vector<int> learnt;
  int backtrack_level = 0;
  analyze(conflict.cref, learnt, backtrack_level);
  return ConflictAnalysis{to_clause(learnt), backtrack_level};
}

void Solver::backtrack_to(int target) {
  if (target < 0 || target >= decision_level()) {
    throw std::invalid_argument("backtrack level " + std::to_string(target) +
                                " not below current level " + std::to_string(decision_level()));
  }
  backtrack(target);
}

Literal Solver::make_decision() {
  int lit = decide();
  if (lit == 0) throw std::logic_error("all variables are assigned");
  return Literal(lit);
}

SolverStats Solver::stats() const {
  SolverStats s;
  s.conflicts = conflicts;
  s.reduces = reduces;
  s.decisions = decisions;
  s.restarts = restarts;
  s.rephases = rephases;
  s.reduce_rounds = reduce_rounds;
  s.propagations = propagations;
  s.var_inc = var_inc;
  s.reduce_limit = reduce_limit;
  s.activity = activity;
  return s;
}

SolveResult solve(const CnfFormula& formula, const HeuristicHooks& hooks, const SolveLimits& limits,
                  std::uint64_t seed) {
  // The engine keeps sizable per-instance state; keep it off the stack.
  auto solver = std::make_unique<Solver>(formula, hooks, seed);
  return solver->solve(limits);
}

}  // namespace satforge
