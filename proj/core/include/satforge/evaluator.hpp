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

// Runs solver binaries over instance sets and scores them by PAR-2.

#ifndef SATFORGE_EVALUATOR_HPP_
#define SATFORGE_EVALUATOR_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "satforge/cnf.hpp"
#include "satforge/materializer.hpp"

namespace satforge {

enum class Answer { kSat, kUnsat, kUnknown };
enum class Verification { kModelOk, kModelBad, kUnchecked, kCrossCheckMismatch };

std::string_view answer_name(Answer a);
std::string_view verification_name(Verification v);
Answer parse_answer(std::string_view name);
Verification parse_verification(std::string_view name);

struct InstanceOutcome {
  std::string instance;
  Answer answer = Answer::kUnknown;
  double wall_time = 0.0;       // t_i, seconds
  double penalized_time = 0.0;  // tau_i, seconds
  Verification verified = Verification::kUnchecked;
  bool crashed = false;  // abnormal exit or output outside the protocol

  friend bool operator==(const InstanceOutcome&, const InstanceOutcome&) = default;
};

// tau = t when the instance was answered within the timeout, 2 * timeout
// otherwise.
double penalized_time(Answer answer, double wall_time, double timeout);

// Outcome from a known answer and time, e.g. for external or scripted runs.
InstanceOutcome scripted_outcome(std::string instance, Answer answer, double wall_time, double timeout);

// Mean of tau over `outcomes`. Throws std::invalid_argument when empty.
double par2(const std::vector<InstanceOutcome>& outcomes);

// Parsed solver output.
struct SolverOutput {
  std::optional<Answer> answer;  // from the "s" line
  std::vector<int> model;        // "v" literals without the terminating 0
  bool model_terminated = false;
  bool malformed = false;  // several "s" lines, bad tokens
};
SolverOutput parse_solver_output(std::string_view text);

// Caches parsed instances for model verification.
class FormulaCache {
 public:
  // Throws DimacsError or std::runtime_error for unreadable instances.
  std::shared_ptr<const CnfFormula> get(const std::filesystem::path& instance);

 private:
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const CnfFormula>> formulas_;
};

// Runs `command instance --timeout T` and kills it at T + 1 s. Sat answers are
// checked against the instance. Throws if the instance is unreadable.
InstanceOutcome run_instance(const std::vector<std::string>& command, const std::filesystem::path& instance,
                             double timeout, FormulaCache* cache = nullptr);
InstanceOutcome run_instance(const CandidateSolver& candidate, const std::filesystem::path& instance,
                             double timeout, FormulaCache* cache = nullptr);

struct EvaluationResult {
  std::vector<InstanceOutcome> outcomes;  // in instance order
  double par2 = 0.0;
  int solved = 0;
  bool valid = true;
  double timeout = 0.0;

  friend bool operator==(const EvaluationResult&, const EvaluationResult&) = default;
};

// Instance name -> answer proven by a trusted solver.
using ReferenceMap = std::map<std::string, Answer>;
ReferenceMap reference_from(const EvaluationResult& result);

struct EvaluationOptions {
  double timeout = 10.0;
  int parallelism = 1;
  // Caps parallelism at the number of hardware threads.
  bool clamp_to_hardware = true;
  const ReferenceMap* reference = nullptr;
  FormulaCache* cache = nullptr;
};

EvaluationResult evaluate_command(const std::vector<std::string>& command,
                                  const std::vector<std::filesystem::path>& instances,
                                  const EvaluationOptions& options);
// Throws std::invalid_argument unless the candidate is compiled.
EvaluationResult evaluate_candidate(const CandidateSolver& candidate,
                                    const std::vector<std::filesystem::path>& instances,
                                    const EvaluationOptions& options);
EvaluationResult evaluate_candidate(const CandidateSolver& candidate,
                                    const std::vector<std::filesystem::path>& instances, double timeout,
                                    int parallelism, const ReferenceMap* reference = nullptr);

// Recomputes par2, solved and valid from the outcomes (applying `reference`).
void aggregate(EvaluationResult& result, const ReferenceMap* reference);

nlohmann::json to_json(const InstanceOutcome& o);
InstanceOutcome outcome_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvaluationResult& r);
EvaluationResult evaluation_from_json(const nlohmann::json& j);

// One JSON object per line.
void write_outcomes_jsonl(std::ostream& out, const EvaluationResult& result);

// `.cnf` files of a directory, sorted by name.
std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir);

}  // namespace satforge

#endif  // SATFORGE_EVALUATOR_HPP_
