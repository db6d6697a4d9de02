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

// Modular CDCL solver. The nine heuristic functions of class Solver are each
// enclosed in a "// start <name>" / "// end <name>" region and can be
// replaced independently. Everything else is fixed.
//
// Fields available to the heuristic functions (see Engine above):
//   vars, clause_DB, learnts, origin_clauses, value, level, reason, trail,
//   pos_in_trail, saved, best_phase, best_trail_size, activity, var_inc,
//   var_decay, clause_inc, vsids (inHeap/update/insert/rebuild), conflicts,
//   decisions, propagations, restarts, rephases, reduce_rounds, reduces,
//   restart_conflicts, restart_limit, luby_index, reduce_limit, rephase_limit
// Helpers: lit_value(lit), decision_level(), backtrack(level), locked(cref),
//   remove_clause(cref), luby(y, i), next_random(), random_unit().

#include "satforge/cdcl_engine.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

class Solver : public satforge::cdcl::Engine<Solver> {
 public:
  void restart();
  bool restart_condition();
  void restart_condition_update();
  void reduce();
  bool reduce_condition();
  void rephase();
  bool rephase_condition();
  void bump_var(int var, double coeff);
  double bump_var_heuristic(int var);
};

// start restart
void Solver::restart() {
    backtrack(0);
}
// end restart

// start restart_condition
bool Solver::restart_condition() {
    return restart_conflicts >= restart_limit;
}
// end restart_condition

// start restart_condition_update
void Solver::restart_condition_update() {
    luby_index++;
    restart_limit = static_cast<std::int64_t>(64 * luby(2, luby_index));
}
// end restart_condition_update

// start reduce
void Solver::reduce() {
    std::vector<int> candidates;
    for (int cref : learnts)
        if (!locked(cref)) candidates.push_back(cref);
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        return clause_DB[a].activity < clause_DB[b].activity;
    });
    for (std::size_t i = 0; i < candidates.size() / 2; i++) remove_clause(candidates[i]);
    reduce_limit += 512;
}
// end reduce

// start reduce_condition
bool Solver::reduce_condition() {
    if (reduces >= reduce_limit && conflicts % 100 == 0) return true;
    else return false;
}
// end reduce_condition

// start rephase
void Solver::rephase() {
    for (int v = 1; v <= vars; v++)
        if (best_phase[v] != 0) saved[v] = best_phase[v];
    rephase_limit = conflicts + 4096;
}
// end rephase

// start rephase_condition
bool Solver::rephase_condition() {
    return conflicts >= rephase_limit;
}
// end rephase_condition

// start bump_var
void Solver::bump_var(int var, double coeff) {
    activity[var] += var_inc * coeff;
    if (activity[var] > 1e100) {
        for (int i = 1; i <= vars; i++) activity[i] *= 1e-100;
        var_inc *= 1e-100;
    }
    if (vsids.inHeap(var)) vsids.update(var);
}
// end bump_var

// start bump_var_heuristic
double Solver::bump_var_heuristic(int var) {
    (void)var;
    return 1.0;
}
// end bump_var_heuristic

// ---------------------------------------------------------------------------
// Driver: solver <file.cnf> [--timeout S] [--seed N] [--conflict-budget N]
// Prints "s SATISFIABLE" + "v ... 0", "s UNSATISFIABLE" or "s UNKNOWN" and
// exits with 10, 20 or 0.
// ---------------------------------------------------------------------------

namespace {

bool read_dimacs(const char* path, int& vars, std::vector<std::vector<int>>& clauses) {
  std::FILE* f = std::fopen(path, "rb");
  if (!f) return false;
  std::string data;
  char buf[1 << 16];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) data.append(buf, n);
  std::fclose(f);
  const char* p = data.c_str();
  const char* end = p + data.size();
  bool header = false;
  std::vector<int> clause;
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\n' || *p == '\r')) p++;
    if (p >= end) break;
    if (*p == 'c' || *p == '%') {
      while (p < end && *p != '\n') p++;
      continue;
    }
    if (*p == 'p') {
      int declared = 0;
      if (std::sscanf(p, "p cnf %d %d", &vars, &declared) != 2) return false;
      header = true;
      while (p < end && *p != '\n') p++;
      continue;
    }
    char* next = nullptr;
    long lit = std::strtol(p, &next, 10);
    if (next == p) return false;
    p = next;
    if (lit == 0) {
      clauses.push_back(clause);
      clause.clear();
    } else {
      clause.push_back(static_cast<int>(lit));
    }
  }
  if (!clause.empty()) clauses.push_back(clause);
  return header;
}

}  // namespace

int main(int argc, char** argv) {
  const char* path = nullptr;
  satforge::cdcl::Limits limits;
  unsigned long long seed = 0;
  for (int i = 1; i < argc; i++) {
    if (!std::strcmp(argv[i], "--timeout") && i + 1 < argc) {
      limits.wall_timeout = std::atof(argv[++i]);
    } else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
      seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (!std::strcmp(argv[i], "--conflict-budget") && i + 1 < argc) {
      limits.conflict_budget = std::atoll(argv[++i]);
    } else {
      path = argv[i];
    }
  }
  if (!path) {
    std::fprintf(stderr, "usage: %s <file.cnf> [--timeout S] [--seed N]\n", argv[0]);
    return 1;
  }
  int vars = 0;
  std::vector<std::vector<int>> clauses;
  if (!read_dimacs(path, vars, clauses)) {
    std::fprintf(stderr, "c cannot read %s\n", path);
    return 1;
  }

  static Solver solver;
  solver.rng_state ^= seed;
  solver.load(vars, clauses);
  clauses.clear();
  clauses.shrink_to_fit();
  satforge::cdcl::Status status = solver.solve(limits);

  std::printf("c conflicts %lld\n", static_cast<long long>(solver.conflicts));
  std::printf("c decisions %lld\n", static_cast<long long>(solver.decisions));
  std::printf("c propagations %lld\n", static_cast<long long>(solver.propagations));
  std::printf("c restarts %lld\n", static_cast<long long>(solver.restarts));
  std::printf("c reduce_rounds %lld\n", static_cast<long long>(solver.reduce_rounds));
  std::printf("c rephases %lld\n", static_cast<long long>(solver.rephases));
  if (status == satforge::cdcl::Status::kSat) {
    std::printf("s SATISFIABLE\n");
    std::string line = "v";
    for (int v = 1; v <= solver.vars; v++) {
      line += ' ';
      line += std::to_string(solver.value[v] == 1 ? v : -v);
      if (line.size() > 72) {
        std::printf("%s\n", line.c_str());
        line = "v";
      }
    }
    std::printf("%s 0\n", line.c_str());
    std::fflush(stdout);
    return 10;
  }
  if (status == satforge::cdcl::Status::kUnsat) {
    std::printf("s UNSATISFIABLE\n");
    std::fflush(stdout);
    return 20;
  }
  std::printf("s UNKNOWN\n");
  std::fflush(stdout);
  return 0;
}
