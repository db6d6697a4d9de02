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

// Campaign loop over the heuristic search space: greedy hill climbing over
// the slots in turn, or a (1+1) evolutionary algorithm mutating a binomial
// number of slots. Both accept a candidate whose PAR-2 is no worse.

#ifndef SATFORGE_SEARCH_HPP_
#define SATFORGE_SEARCH_HPP_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "satforge/evaluator.hpp"
#include "satforge/heuristics.hpp"
#include "satforge/materializer.hpp"
#include "satforge/proposer.hpp"
#include "satforge/random.hpp"

namespace satforge {

class CampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy { kGhc, kEa };
std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

struct ProposerSettings {
  enum class Kind { kMock, kLlm };
  Kind kind = Kind::kMock;
  std::optional<std::filesystem::path> catalog_dir;  // mock; built-in catalog when absent
  LlmSettings llm;
};

struct CampaignConfig {
  Strategy strategy = Strategy::kEa;
  int budget = 60;
  double timeout = 10.0;  // seconds per instance
  std::vector<std::filesystem::path> instance_set;
  std::uint64_t seed = 0;
  int parallelism = 1;
  bool clamp_parallelism = true;
  ProposerSettings proposer;
  Toolchain toolchain;
  std::filesystem::path workspace = "workspace";
  std::filesystem::path output_dir = "campaign";

  // Throws CampaignError describing the first invalid field.
  void validate() const;
};

struct MutationPlan {
  std::vector<Slot> slots;  // distinct, ascending slot index

  friend bool operator==(const MutationPlan&, const MutationPlan&) = default;
};

// Draws l ~ Bin(9, 1/9), redrawing while l == 0, then l distinct slots
// uniformly at random.
MutationPlan sample_mutation_plan(Rng& rng);

// Slot edited by the hill climber at iteration i.
Slot ghc_slot(int iteration);

struct IterationRecord {
  int iteration = 0;
  std::vector<Slot> plan;
  std::string proposer_status;  // "ok" or "malformed"
  std::string proposer_detail;
  int proposer_attempts = 0;
  std::map<Slot, std::string> bodies;      // proposed bodies
  std::map<Slot, std::string> provenance;  // Provenance::describe per body
  std::string compile_status;              // compiled, compile_failed, skipped
  std::string fingerprint;
  std::optional<EvaluationResult> evaluation;
  bool evaluation_reused = false;  // fingerprint evaluated earlier in the campaign
  bool accepted = false;
  double best_fitness = 0.0;  // f* after this iteration

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

nlohmann::json to_json(const IterationRecord& r);
IterationRecord record_from_json(const nlohmann::json& j);

struct CampaignState {
  int iteration = 0;  // next iteration to run
  int budget = 0;
  HeuristicConfiguration best_config = baseline_configuration();
  std::string best_fingerprint;
  double best_fitness = 0.0;
  EvaluationResult baseline;
  std::vector<IterationRecord> history;
};

// Accepted-update count per slot.
std::map<Slot, int> slot_update_tally(const std::vector<IterationRecord>& history);

struct CampaignHooks {
  // Called after each iteration record has been written.
  std::function<void(const IterationRecord&)> on_iteration;
  // Stop (as if killed) once this many records exist in the log.
  std::optional<int> stop_after;
};

// Runs or resumes a campaign. Output files in config.output_dir:
//   campaign.jsonl   one IterationRecord per line, flushed per iteration
//   baseline.json    the baseline evaluation
//   best_solver.cpp  the spliced source of the final incumbent
//   summary.json     best trace and per-slot accepted updates
// An existing campaign.jsonl is resumed from its last complete line. When
// `proposer` is null it is built from config.proposer.
CampaignState run_campaign(const CampaignConfig& config, std::unique_ptr<Proposer> proposer = nullptr,
                           const CampaignHooks& hooks = {});
CampaignState run_ghc(CampaignConfig config, std::unique_ptr<Proposer> proposer = nullptr);
CampaignState run_ea(CampaignConfig config, std::unique_ptr<Proposer> proposer = nullptr);

// Builds the proposer described by the settings; the mock is seeded with
// `seed`.
std::unique_ptr<Proposer> make_proposer(const ProposerSettings& settings, std::uint64_t seed,
                                        const std::filesystem::path& output_dir);

// Reads a campaign log, skipping lines that do not parse. `skipped` receives
// their count.
std::vector<IterationRecord> read_campaign_log(const std::filesystem::path& path, int* skipped = nullptr);

}  // namespace satforge

#endif  // SATFORGE_SEARCH_HPP_
