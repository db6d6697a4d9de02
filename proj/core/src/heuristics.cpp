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

#include "satforge/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "resources.hpp"
#include "satforge/solver.hpp"
#include "satforge/solver_template.hpp"

namespace satforge {

namespace {

constexpr std::array<std::string_view, kNumSlots> kSlotNames = {
    "restart", "restart_condition", "restart_condition_update",
    "reduce",  "reduce_condition",  "rephase",
    "rephase_condition", "bump_var", "bump_var_heuristic",
};

}  // namespace

std::string_view slot_name(Slot s) { return kSlotNames[slot_index(s)]; }

std::optional<Slot> parse_slot(std::string_view name) {
  for (Slot s : kAllSlots) {
    if (kSlotNames[slot_index(s)] == name) return s;
  }
  return std::nullopt;
}

Slot slot_from_name(std::string_view name) {
  if (auto s = parse_slot(name)) return *s;
  throw std::invalid_argument("unknown heuristic slot '" + std::string(name) + "'");
}

bool HeuristicHooks::complete() const {
  return restart && restart_condition && restart_condition_update && reduce && reduce_condition &&
         rephase && rephase_condition && bump_var && bump_var_heuristic;
}

// These mirror the bodies in resources/solver_template.cpp line for line; the
// template-equivalence test compares solver statistics of both.
HeuristicHooks baseline_hooks() {
  HeuristicHooks h;
  h.restart = [](SolverState& s) { s.backtrack(0); };
  h.restart_condition = [](SolverState& s) { return s.restart_conflicts >= s.restart_limit; };
  h.restart_condition_update = [](SolverState& s) {
    s.luby_index++;
    s.restart_limit = static_cast<std::int64_t>(BaselineParams::kLubyUnit * s.luby(2, s.luby_index));
  };
  h.reduce = [](SolverState& s) {
    std::vector<int> candidates;
    for (int cref : s.learnts) {
      if (!s.locked(cref)) candidates.push_back(cref);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return s.clause_DB[a].activity < s.clause_DB[b].activity;
    });
    for (std::size_t i = 0; i < candidates.size() / 2; i++) s.remove_clause(candidates[i]);
    s.reduce_limit += BaselineParams::kReduceLimitStep;
  };
  h.reduce_condition = [](SolverState& s) {
    return s.reduces >= s.reduce_limit && s.conflicts % 100 == 0;
  };
  h.rephase = [](SolverState& s) {
    for (int v = 1; v <= s.vars; v++) {
      if (s.best_phase[v] != 0) s.saved[v] = s.best_phase[v];
    }
    s.rephase_limit = s.conflicts + BaselineParams::kRephasePeriod;
  };
  h.rephase_condition = [](SolverState& s) { return s.conflicts >= s.rephase_limit; };
  h.bump_var = [](SolverState& s, int var, double coeff) {
    s.activity[var] += s.var_inc * coeff;
    if (s.activity[var] > BaselineParams::kActivityCeiling) {
      for (int i = 1; i <= s.vars; i++) s.activity[i] *= 1e-100;
      s.var_inc *= 1e-100;
    }
    if (s.vsids.inHeap(var)) s.vsids.update(var);
  };
  h.bump_var_heuristic = [](SolverState&, int) { return 1.0; };
  return h;
}

double dynamic_reduce_threshold(std::int64_t conflicts, std::int64_t reduces) {
  return 0.5 + 0.5 * (static_cast<double>(conflicts) / (static_cast<double>(reduces) + 1.0));
}

std::function<bool(SolverState&)> dynamic_threshold_reduce_condition() {
  return [](SolverState& s) {
    double threshold = dynamic_reduce_threshold(s.conflicts, s.reduces);
    return (s.reduces >= s.reduce_limit && s.conflicts % 100 == 0) ||
           static_cast<double>(s.reduces) * threshold >= static_cast<double>(s.reduce_limit);
  };
}

std::function<void(SolverState&, int, double)> overflow_guard_bump_var() {
  return [](SolverState& s, int var, double coeff) {
    s.activity[var] += s.var_inc * coeff;
    const double large_threshold = 1e100;
    bool normalize = false;
    for (int i = 1; i <= s.vars; i++) {
      if (s.activity[i] > large_threshold) {
        normalize = true;
        break;
      }
    }
    if (normalize) {
      double max_activity = 0;
      for (int i = 1; i <= s.vars; i++) max_activity = std::max(max_activity, s.activity[i]);
      for (int i = 1; i <= s.vars; i++) s.activity[i] /= max_activity;
      s.var_inc /= max_activity;
    }
    if (s.vsids.inHeap(var)) s.vsids.update(var);
  };
}

std::string Provenance::describe() const {
  switch (kind) {
    case Kind::kBaseline:
      return "baseline";
    case Kind::kCatalog:
      return "catalog(" + variant + ")";
    case Kind::kProposed:
      return "proposed(" + std::to_string(iteration) + ")";
  }
  return "baseline";
}

HeuristicConfiguration::HeuristicConfiguration(std::array<std::string, kNumSlots> bodies,
                                               std::array<Provenance, kNumSlots> provenance)
    : bodies_(std::move(bodies)), provenance_(std::move(provenance)) {
  for (Slot s : kAllSlots) {
    const std::string& b = bodies_[slot_index(s)];
    if (b.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw std::invalid_argument("empty body for slot " + std::string(slot_name(s)));
    }
  }
}

HeuristicConfiguration HeuristicConfiguration::with(Slot s, std::string body, Provenance origin) const {
  HeuristicConfiguration copy = *this;
  copy.bodies_[slot_index(s)] = canonical_body(body);
  copy.provenance_[slot_index(s)] = std::move(origin);
  return copy;
}

HeuristicConfiguration baseline_configuration() {
  const SolverTemplate& tmpl = SolverTemplate::builtin();
  std::array<std::string, kNumSlots> bodies;
  for (Slot s : kAllSlots) bodies[slot_index(s)] = extract_region(tmpl, s);
  return HeuristicConfiguration(std::move(bodies));
}

void Catalog::add(Slot s, CatalogVariant variant) {
  auto& list = variants_[slot_index(s)];
  variant.body = canonical_body(variant.body);
  auto pos = std::lower_bound(list.begin(), list.end(), variant.name,
                              [](const CatalogVariant& v, const std::string& n) { return v.name < n; });
  if (pos != list.end() && pos->name == variant.name) {
    throw std::invalid_argument("duplicate catalog variant " + variant.name + " for slot " +
                                std::string(slot_name(s)));
  }
  list.insert(pos, std::move(variant));
}

const CatalogVariant* Catalog::find(Slot s, std::string_view name) const {
  for (const CatalogVariant& v : variants(s)) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

std::size_t Catalog::total() const {
  std::size_t n = 0;
  for (const auto& list : variants_) n += list.size();
  return n;
}

const Catalog& Catalog::builtin() {
  static const Catalog catalog = [] {
    Catalog c;
    const resources::CatalogFile* files = resources::catalog_files();
    for (std::size_t i = 0; i < resources::catalog_file_count(); i++) {
      c.add(slot_from_name(files[i].slot),
            CatalogVariant{std::string(files[i].variant), std::string(files[i].body)});
    }
    return c;
  }();
  return catalog;
}

Catalog Catalog::load_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("catalog directory not found: " + dir.string());
  Catalog c;
  for (const auto& slot_dir : fs::directory_iterator(dir)) {
    if (!slot_dir.is_directory()) continue;
    Slot s = slot_from_name(slot_dir.path().filename().string());
    for (const auto& file : fs::directory_iterator(slot_dir.path())) {
      if (file.path().extension() != ".txt") continue;
      std::ifstream in(file.path(), std::ios::binary);
      std::ostringstream body;
      body << in.rdbuf();
      c.add(s, CatalogVariant{file.path().stem().string(), body.str()});
    }
  }
  return c;
}

void Catalog::write_directory(const std::filesystem::path& dir) const {
  namespace fs = std::filesystem;
  for (Slot s : kAllSlots) {
    fs::path slot_dir = dir / std::string(slot_name(s));
    fs::create_directories(slot_dir);
    for (const CatalogVariant& v : variants(s)) {
      std::ofstream out(slot_dir / (v.name + ".txt"), std::ios::binary | std::ios::trunc);
      out << v.body;
    }
  }
}

const std::vector<CatalogVariant>& catalog_variants(std::string_view slot) {
  return Catalog::builtin().variants(slot_from_name(slot));
}

}  // namespace satforge
