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

// The nine replaceable heuristic functions of the CDCL engine: their names,
// in-process bindings, source-level configurations and the variant catalog.

#ifndef SATFORGE_HEURISTICS_HPP_
#define SATFORGE_HEURISTICS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satforge/cdcl_engine.hpp"

namespace satforge {

enum class Slot : std::uint8_t {
  kRestart = 0,
  kRestartCondition,
  kRestartConditionUpdate,
  kReduce,
  kReduceCondition,
  kRephase,
  kRephaseCondition,
  kBumpVar,
  kBumpVarHeuristic,
};

inline constexpr int kNumSlots = 9;

// Slots in their canonical order; index i is the slot the hill climber edits
// at every iteration congruent to i mod 9.
inline constexpr std::array<Slot, kNumSlots> kAllSlots = {
    Slot::kRestart,         Slot::kRestartCondition, Slot::kRestartConditionUpdate,
    Slot::kReduce,          Slot::kReduceCondition,  Slot::kRephase,
    Slot::kRephaseCondition, Slot::kBumpVar,         Slot::kBumpVarHeuristic,
};

inline constexpr int slot_index(Slot s) { return static_cast<int>(s); }
std::string_view slot_name(Slot s);
std::optional<Slot> parse_slot(std::string_view name);
// Like parse_slot but throws std::invalid_argument on unknown names.
Slot slot_from_name(std::string_view name);

class Solver;
// The view a heuristic binding gets of the running solver: counters,
// thresholds, activities, phases, the clause database and the engine helpers.
using SolverState = cdcl::Engine<Solver>;

struct HeuristicHooks {
  std::function<void(SolverState&)> restart;
  std::function<bool(SolverState&)> restart_condition;
  std::function<void(SolverState&)> restart_condition_update;
  std::function<void(SolverState&)> reduce;
  std::function<bool(SolverState&)> reduce_condition;
  std::function<void(SolverState&)> rephase;
  std::function<bool(SolverState&)> rephase_condition;
  std::function<void(SolverState&, int var, double coeff)> bump_var;
  std::function<double(SolverState&, int var)> bump_var_heuristic;

  bool complete() const;
};

// Declared defaults of the baseline heuristics.
struct BaselineParams {
  static constexpr double kLubyUnit = 64;
  static constexpr double kVarDecay = 0.95;
  static constexpr std::int64_t kReduceLimitInit = 8192;
  static constexpr std::int64_t kReduceLimitStep = 512;
  static constexpr std::int64_t kRephasePeriod = 4096;
  static constexpr double kActivityCeiling = 1e100;
};

// In-process equivalent of the template's baseline bodies.
HeuristicHooks baseline_hooks();

// In-process equivalents of two catalog variants, used to cross-check the
// compiled catalog bodies.
double dynamic_reduce_threshold(std::int64_t conflicts, std::int64_t reduces);
std::function<bool(SolverState&)> dynamic_threshold_reduce_condition();
std::function<void(SolverState&, int, double)> overflow_guard_bump_var();

struct Provenance {
  enum class Kind { kBaseline, kCatalog, kProposed };
  Kind kind = Kind::kBaseline;
  std::string variant;  // catalog variant name
  int iteration = -1;   // proposing iteration

  static Provenance baseline() { return {}; }
  static Provenance catalog(std::string name) { return {Kind::kCatalog, std::move(name), -1}; }
  static Provenance proposed(int iteration) { return {Kind::kProposed, {}, iteration}; }
  std::string describe() const;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Source text of all nine slot bodies: a point of the search space.
class HeuristicConfiguration {
 public:
  HeuristicConfiguration(std::array<std::string, kNumSlots> bodies,
                         std::array<Provenance, kNumSlots> provenance = {});

  const std::string& body(Slot s) const { return bodies_[slot_index(s)]; }
  const Provenance& provenance(Slot s) const { return provenance_[slot_index(s)]; }
  const std::array<std::string, kNumSlots>& bodies() const { return bodies_; }

  // Copy with one slot replaced.
  HeuristicConfiguration with(Slot s, std::string body, Provenance origin) const;

  friend bool operator==(const HeuristicConfiguration&, const HeuristicConfiguration&) = default;

 private:
  std::array<std::string, kNumSlots> bodies_;
  std::array<Provenance, kNumSlots> provenance_;
};

// The bodies found in the built-in solver template.
HeuristicConfiguration baseline_configuration();

struct CatalogVariant {
  std::string name;
  std::string body;
};

// Named replacement bodies per slot, in deterministic (name) order.
class Catalog {
 public:
  Catalog() = default;

  // Built-in catalog compiled into the library.
  static const Catalog& builtin();
  // Loads `<dir>/<slot>/<variant>.txt` files.
  static Catalog load_directory(const std::filesystem::path& dir);

  void add(Slot s, CatalogVariant variant);
  const std::vector<CatalogVariant>& variants(Slot s) const { return variants_[slot_index(s)]; }
  const CatalogVariant* find(Slot s, std::string_view name) const;
  std::size_t total() const;
  void write_directory(const std::filesystem::path& dir) const;

 private:
  std::array<std::vector<CatalogVariant>, kNumSlots> variants_;
};

// Variants of the built-in catalog for a slot given by name. Throws
// std::invalid_argument for unknown slot names.
const std::vector<CatalogVariant>& catalog_variants(std::string_view slot);

}  // namespace satforge

#endif  // SATFORGE_HEURISTICS_HPP_
