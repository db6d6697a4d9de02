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

// CDCL search engine with nine heuristic hook points.
//
// The engine is a CRTP base: the derived class supplies
//
//   void   restart();                    bool restart_condition();
//   void   restart_condition_update();   void reduce();
//   bool   reduce_condition();           void rephase();
//   bool   rephase_condition();          void bump_var(int var, double coeff);
//   double bump_var_heuristic(int var);
//
// and everything else (propagation, first-UIP learning, backtracking, VSIDS
// decisions) lives here. This header only depends on the standard library:
// it is inlined verbatim into the generated solver template.

#ifndef SATFORGE_CDCL_ENGINE_HPP_
#define SATFORGE_CDCL_ENGINE_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace satforge::cdcl {

enum class Status { kSat, kUnsat, kUnknown };

struct Limits {
  double wall_timeout = 0.0;          // seconds, <= 0 disables
  std::int64_t conflict_budget = -1;  // < 0 disables
};

struct Clause {
  std::vector<int> lits;  // lits[0], lits[1] are watched; lits[0] is implied
  double activity = 0.0;
  int lbd = 0;
  bool learnt = false;
  bool deleted = false;
};

struct Watch {
  int cref;
  int blocker;
};

// Indexed binary max-heap over variables 1..n keyed by activity. Ties are
// broken towards the lower variable index.
class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>* activity) : activity_(activity) {}

  void grow(int vars) {
    index_.assign(static_cast<std::size_t>(vars) + 1, -1);
    heap_.clear();
  }
  bool empty() const { return heap_.empty(); }
  int size() const { return static_cast<int>(heap_.size()); }
  bool inHeap(int v) const { return index_[v] >= 0; }
  int top() const { return heap_.front(); }

  void insert(int v) {
    if (inHeap(v)) return;
    index_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(index_[v]);
  }

  // Restores the heap property after activity[v] changed in either direction.
  void update(int v) {
    if (!inHeap(v)) return;
    up(index_[v]);
    down(index_[v]);
  }

  int pop() {
    int v = heap_.front();
    heap_.front() = heap_.back();
    index_[heap_.front()] = 0;
    index_[v] = -1;
    heap_.pop_back();
    if (heap_.size() > 1) down(0);
    return v;
  }

  // Rebuilds the heap from scratch, e.g. after bulk activity edits.
  void rebuild() {
    std::vector<int> vs = heap_;
    for (int v : heap_) index_[v] = -1;
    heap_.clear();
    for (int v : vs) insert(v);
  }

 private:
  bool before(int a, int b) const {
    double x = (*activity_)[a], y = (*activity_)[b];
    return x > y || (x == y && a < b);
  }
  void up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) >> 1;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      index_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    index_[v] = i;
  }
  void down(int i) {
    int v = heap_[i];
    int n = static_cast<int>(heap_.size());
    while (2 * i + 1 < n) {
      int child = 2 * i + 1;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      index_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    index_[v] = i;
  }

  const std::vector<double>* activity_;
  std::vector<int> heap_;
  std::vector<int> index_;
};

template <typename Derived>
class Engine {
 public:
  Engine() : vsids(&activity) {}
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // ---------------------------------------------------------------------
  // State visible to heuristic slots. Variables are 1-based, literals are
  // signed DIMACS integers.
  // ---------------------------------------------------------------------

  int vars = 0;
  int origin_clauses = 0;
  std::vector<Clause> clause_DB;
  std::vector<int> learnts;  // live learned clause references

  std::vector<int> value;   // per variable: 1 true, -1 false, 0 unassigned
  std::vector<int> level;   // per variable decision level
  std::vector<int> reason;  // per variable reason clause, -1 for decisions
  std::vector<int> trail;
  std::vector<int> pos_in_trail;  // trail index where each level starts
  int propagated = 0;

  std::vector<int> saved;       // saved phase per variable (1 / -1)
  std::vector<int> best_phase;  // phases of the longest trail seen at a conflict
  int best_trail_size = 0;

  std::vector<double> activity;
  double var_inc = 1.0;
  double var_decay = 0.95;
  double clause_inc = 1.0;
  double clause_decay = 0.999;
  VarHeap vsids;

  // Counters. `reduces` counts conflicts since the last reduce round and
  // `restart_conflicts` conflicts since the last restart; both are reset by
  // the engine after the corresponding slot ran.
  std::int64_t conflicts = 0;
  std::int64_t decisions = 0;
  std::int64_t propagations = 0;
  std::int64_t restarts = 0;
  std::int64_t rephases = 0;
  std::int64_t reduce_rounds = 0;
  std::int64_t reduces = 0;
  std::int64_t restart_conflicts = 0;

  // Thresholds owned by the heuristic slots.
  std::int64_t restart_limit = 64;
  std::int64_t luby_index = 0;
  std::int64_t reduce_limit = 8192;
  std::int64_t rephase_limit = 4096;

  std::uint64_t rng_state = 0x9e3779b97f4a7c15ULL;

  // ---------------------------------------------------------------------
  // Helpers available to heuristic slots.
  // ---------------------------------------------------------------------

  int lit_value(int lit) const { return lit > 0 ? value[lit] : -value[-lit]; }
  int decision_level() const { return static_cast<int>(pos_in_trail.size()); }

  // Finite Luby sequence scaled by y: luby(2, i) = 1 1 2 1 1 2 4 1 1 2 ...
  static double luby(double y, std::int64_t x) {
    std::int64_t size = 1;
    int seq = 0;
    while (size < x + 1) {
      seq++;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      seq--;
      x = x % size;
    }
    double result = 1.0;
    for (int i = 0; i < seq; i++) result *= y;
    return result;
  }

  // splitmix64; deterministic given rng_state.
  std::uint64_t next_random() {
    std::uint64_t z = (rng_state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double random_unit() { return (next_random() >> 11) * 0x1.0p-53; }

  // A clause is locked while it is the reason of an assigned literal.
  bool locked(int cref) const {
    const Clause& c = clause_DB[cref];
    if (c.deleted || c.lits.empty()) return false;
    int implied = c.lits[0];
    return lit_value(implied) == 1 && reason[std::abs(implied)] == cref;
  }

  // Marks a learned clause deleted. Original and locked clauses are kept.
  bool remove_clause(int cref) {
    Clause& c = clause_DB[cref];
    if (!c.learnt || c.deleted || locked(cref)) return false;
    c.deleted = true;
    return true;
  }

  // Unassigns everything above `target`. No-op unless target < level.
  void backtrack(int target) {
    if (target < 0 || decision_level() <= target) return;
    int stop = pos_in_trail[target];
    for (int i = static_cast<int>(trail.size()) - 1; i >= stop; i--) {
      int v = std::abs(trail[i]);
      saved[v] = value[v];
      value[v] = 0;
      reason[v] = -1;
      if (!vsids.inHeap(v)) vsids.insert(v);
    }
    trail.resize(stop);
    pos_in_trail.resize(target);
    propagated = static_cast<int>(trail.size());
  }

  // ---------------------------------------------------------------------
  // Problem setup and the CDCL steps.
  // ---------------------------------------------------------------------

  // Returns false when the formula is refuted during loading (empty clause or
  // contradictory units).
  bool load(int num_vars, const std::vector<std::vector<int>>& clauses) {
    vars = num_vars;
    std::size_t n = static_cast<std::size_t>(vars) + 1;
    value.assign(n, 0);
    level.assign(n, 0);
    reason.assign(n, -1);
    saved.assign(n, -1);
    best_phase.assign(n, 0);
    activity.assign(n, 0.0);
    seen_.assign(n, 0);
    level_mark_.assign(n, 0);
    watches_.assign(2 * n, {});
    vsids.grow(vars);
    for (int v = 1; v <= vars; v++) vsids.insert(v);
    trail.reserve(n);
    inconsistent_ = false;
    for (const auto& lits : clauses) {
      if (lits.empty()) {
        inconsistent_ = true;
        continue;
      }
      if (lits.size() == 1) {
        int l = lits[0];
        if (lit_value(l) == -1) inconsistent_ = true;
        if (lit_value(l) == 0) assign(l, -1);
        continue;
      }
      add_clause(lits, false);
    }
    origin_clauses = static_cast<int>(clause_DB.size());
    return !inconsistent_;
  }

  // Runs unit propagation to a fixpoint. Returns the conflicting clause
  // reference or -1.
  int propagate() {
    while (propagated < static_cast<int>(trail.size())) {
      int p = trail[propagated++];
      int false_lit = -p;
      std::vector<Watch>& ws = watches_[windex(false_lit)];
      std::size_t i = 0, j = 0, end = ws.size();
      int conflict = -1;
      while (i < end) {
        Watch w = ws[i++];
        if (lit_value(w.blocker) == 1) {
          ws[j++] = w;
          continue;
        }
        Clause& c = clause_DB[w.cref];
        if (c.deleted) {
          ws[j++] = w;
          continue;
        }
        std::vector<int>& lits = c.lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        int first = lits[0];
        if (first != w.blocker && lit_value(first) == 1) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); k++) {
          if (lit_value(lits[k]) != -1) {
            lits[1] = lits[k];
            lits[k] = false_lit;
            watches_[windex(lits[1])].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (lit_value(first) == -1) {
          conflict = w.cref;
          while (i < end) ws[j++] = ws[i++];
          break;
        }
        assign(first, w.cref);
        propagations++;
      }
      ws.resize(j);
      if (conflict != -1) return conflict;
    }
    return -1;
  }

  // First-UIP analysis. `learnt[0]` is the asserting literal and, for
  // clauses of size > 1, `learnt[1]` sits at the backtrack level.
  void analyze(int conflict, std::vector<int>& learnt, int& backtrack_level) {
    learnt.clear();
    learnt.push_back(0);
    int current = decision_level();
    int path = 0;
    int p = 0;
    int index = static_cast<int>(trail.size()) - 1;
    int cref = conflict;
    do {
      Clause& c = clause_DB[cref];
      if (c.learnt) bump_clause(cref);
      for (std::size_t k = (p == 0 ? 0 : 1); k < c.lits.size(); k++) {
        int q = c.lits[k];
        int v = std::abs(q);
        if (seen_[v] || level[v] == 0) continue;
        seen_[v] = 1;
        double coeff = derived().bump_var_heuristic(v);
        derived().bump_var(v, coeff);
        if (level[v] >= current) {
          path++;
        } else {
          learnt.push_back(q);
        }
      }
      while (!seen_[std::abs(trail[index])]) index--;
      p = trail[index--];
      cref = reason[std::abs(p)];
      seen_[std::abs(p)] = 0;
      path--;
    } while (path > 0);
    learnt[0] = -p;

    backtrack_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); k++) {
        if (level[std::abs(learnt[k])] > level[std::abs(learnt[max_i])]) max_i = k;
      }
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level[std::abs(learnt[1])];
    }
    for (std::size_t k = 1; k < learnt.size(); k++) seen_[std::abs(learnt[k])] = 0;
  }

  // Backjumps and asserts a learned clause produced by analyze().
  void learn(const std::vector<int>& learnt, int backtrack_level) {
    backtrack(backtrack_level);
    if (learnt.size() == 1) {
      assign(learnt[0], -1);
      return;
    }
    int cref = add_clause(learnt, true);
    Clause& c = clause_DB[cref];
    c.activity = clause_inc;
    c.lbd = compute_lbd(learnt);
    assign(learnt[0], cref);
  }

  // Picks the unassigned variable of highest activity with its saved phase
  // and opens a new decision level. Returns 0 when every variable is set.
  int decide() {
    int next = 0;
    while (!vsids.empty()) {
      int v = vsids.pop();
      if (value[v] == 0) {
        next = v;
        break;
      }
    }
    if (next == 0) return 0;
    int lit = saved[next] == 1 ? next : -next;
    pos_in_trail.push_back(static_cast<int>(trail.size()));
    decisions++;
    assign(lit, -1);
    return lit;
  }

  void decay_activities() {
    var_inc *= 1.0 / var_decay;
    clause_inc *= 1.0 / clause_decay;
  }

  Status solve(const Limits& limits) {
    start_ = std::chrono::steady_clock::now();
    limits_ = limits;
    if (inconsistent_) return Status::kUnsat;
    std::vector<int> learnt;
    while (true) {
      int conflict = propagate();
      if (conflict != -1) {
        conflicts++;
        reduces++;
        restart_conflicts++;
        if (decision_level() == 0) return Status::kUnsat;
        record_best_phase();
        int backtrack_level = 0;
        analyze(conflict, learnt, backtrack_level);
        learn(learnt, backtrack_level);
        decay_activities();
        if (limits_.conflict_budget >= 0 && conflicts >= limits_.conflict_budget) {
          return Status::kUnknown;
        }
        if ((conflicts & 1023) == 0 && timed_out()) return Status::kUnknown;
        continue;
      }
      if (restart_conflicts > 0 && derived().restart_condition()) {
        derived().restart();
        derived().restart_condition_update();
        restarts++;
        restart_conflicts = 0;
        if (timed_out()) return Status::kUnknown;
        continue;
      }
      if (reduces > 0 && derived().reduce_condition()) {
        derived().reduce();
        reduce_rounds++;
        reduces = 0;
        collect_garbage();
      }
      if (derived().rephase_condition()) {
        derived().rephase();
        rephases++;
      }
      if (decide() == 0) return Status::kSat;
    }
  }

  // Complete model after kSat: model[v] is 1 or -1 for v in 1..vars.
  std::vector<int> model() const { return value; }

  double elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 protected:
  Derived& derived() { return static_cast<Derived&>(*this); }

 private:
  std::size_t windex(int lit) const {
    return static_cast<std::size_t>(lit > 0 ? 2 * lit : -2 * lit + 1);
  }

  void assign(int lit, int cref) {
    int v = std::abs(lit);
    value[v] = lit > 0 ? 1 : -1;
    level[v] = decision_level();
    reason[v] = cref;
    trail.push_back(lit);
  }

  int add_clause(const std::vector<int>& lits, bool is_learnt) {
    int cref;
    if (is_learnt && !free_.empty()) {
      cref = free_.back();
      free_.pop_back();
      clause_DB[cref] = Clause{};
    } else {
      cref = static_cast<int>(clause_DB.size());
      clause_DB.emplace_back();
    }
    Clause& c = clause_DB[cref];
    c.lits = lits;
    c.learnt = is_learnt;
    if (is_learnt) learnts.push_back(cref);
    watches_[windex(c.lits[0])].push_back({cref, c.lits[1]});
    watches_[windex(c.lits[1])].push_back({cref, c.lits[0]});
    return cref;
  }

  void bump_clause(int cref) {
    Clause& c = clause_DB[cref];
    c.activity += clause_inc;
    if (c.activity > 1e20) {
      for (int r : learnts) clause_DB[r].activity *= 1e-20;
      clause_inc *= 1e-20;
    }
  }

  int compute_lbd(const std::vector<int>& lits) {
    lbd_stamp_++;
    int count = 0;
    for (int l : lits) {
      int lv = level[std::abs(l)];
      if (lv >= static_cast<int>(level_mark_.size())) level_mark_.resize(lv + 1, 0);
      if (level_mark_[lv] != lbd_stamp_) {
        level_mark_[lv] = lbd_stamp_;
        count++;
      }
    }
    return count;
  }

  void record_best_phase() {
    if (static_cast<int>(trail.size()) <= best_trail_size) return;
    best_trail_size = static_cast<int>(trail.size());
    for (int l : trail) best_phase[std::abs(l)] = l > 0 ? 1 : -1;
  }

  // Drops deleted clauses from the learnt list and from every watch list,
  // recycling their references.
  void collect_garbage() {
    std::size_t j = 0;
    bool any = false;
    for (int cref : learnts) {
      Clause& c = clause_DB[cref];
      if (c.deleted) {
        // A slot may have flagged a locked clause directly; keep those.
        if (locked(cref)) {
          c.deleted = false;
          learnts[j++] = cref;
          continue;
        }
        any = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
        free_.push_back(cref);
      } else {
        learnts[j++] = cref;
      }
    }
    learnts.resize(j);
    if (!any) return;
    for (auto& ws : watches_) {
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [this](const Watch& w) { return clause_DB[w.cref].deleted; }),
               ws.end());
    }
  }

  bool timed_out() const {
    return limits_.wall_timeout > 0 && elapsed_seconds() >= limits_.wall_timeout;
  }

  std::vector<std::vector<Watch>> watches_;
  std::vector<char> seen_;
  std::vector<int> level_mark_;
  std::vector<int> free_;
  int lbd_stamp_ = 0;
  bool inconsistent_ = false;
  Limits limits_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace satforge::cdcl

#endif  // SATFORGE_CDCL_ENGINE_HPP_
