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

#include "satforge/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <stdexcept>
#include <thread>

#include "satforge/subprocess.hpp"

namespace satforge {

namespace fs = std::filesystem;

// Solvers get this long past the timeout to stop on their own before being
// killed.
constexpr double kKillGrace = 1.0;

std::string_view answer_name(Answer a) {
  switch (a) {
    case Answer::kSat:
      return "sat";
    case Answer::kUnsat:
      return "unsat";
    case Answer::kUnknown:
      return "unknown";
  }
  return "unknown";
}

std::string_view verification_name(Verification v) {
  switch (v) {
    case Verification::kModelOk:
      return "model_ok";
    case Verification::kModelBad:
      return "model_bad";
    case Verification::kUnchecked:
      return "unchecked";
    case Verification::kCrossCheckMismatch:
      return "cross_check_mismatch";
  }
  return "unchecked";
}

Answer parse_answer(std::string_view name) {
  for (Answer a : {Answer::kSat, Answer::kUnsat, Answer::kUnknown}) {
    if (answer_name(a) == name) return a;
  }
  throw std::invalid_argument("unknown answer '" + std::string(name) + "'");
}

Verification parse_verification(std::string_view name) {
  for (Verification v : {Verification::kModelOk, Verification::kModelBad, Verification::kUnchecked,
                         Verification::kCrossCheckMismatch}) {
    if (verification_name(v) == name) return v;
  }
  throw std::invalid_argument("unknown verification '" + std::string(name) + "'");
}

double penalized_time(Answer answer, double wall_time, double timeout) {
  if (answer != Answer::kUnknown && wall_time <= timeout) return wall_time;
  return 2.0 * timeout;
}

InstanceOutcome scripted_outcome(std::string instance, Answer answer, double wall_time, double timeout) {
  InstanceOutcome o;
  o.instance = std::move(instance);
  o.answer = answer;
  o.wall_time = wall_time;
  o.penalized_time = penalized_time(answer, wall_time, timeout);
  return o;
}

double par2(const std::vector<InstanceOutcome>& outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("PAR-2 of an empty outcome list");
  double sum = 0.0;
  for (const InstanceOutcome& o : outcomes) sum += o.penalized_time;
  return sum / static_cast<double>(outcomes.size());
}

SolverOutput parse_solver_output(std::string_view text) {
  SolverOutput out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.size() >= 2 && line[0] == 's' && line[1] == ' ') {
      std::string_view status = line.substr(2);
      std::optional<Answer> a;
      if (status == "SATISFIABLE") a = Answer::kSat;
      else if (status == "UNSATISFIABLE") a = Answer::kUnsat;
      else if (status == "UNKNOWN") a = Answer::kUnknown;
      if (!a || out.answer) out.malformed = true;
      if (a && !out.answer) out.answer = a;
    } else if (!line.empty() && line[0] == 'v' && (line.size() == 1 || line[1] == ' ')) {
      std::size_t i = 1;
      while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) i++;
        if (i >= line.size()) break;
        int lit = 0;
        auto [end, ec] = std::from_chars(line.data() + i, line.data() + line.size(), lit);
        if (ec != std::errc() || (end != line.data() + line.size() && *end != ' ' && *end != '\t')) {
          out.malformed = true;
          break;
        }
        i = static_cast<std::size_t>(end - line.data());
        if (out.model_terminated) {
          out.malformed = true;
        } else if (lit == 0) {
          out.model_terminated = true;
        } else {
          out.model.push_back(lit);
        }
      }
    }
  }
  return out;
}

std::shared_ptr<const CnfFormula> FormulaCache::get(const fs::path& instance) {
  std::string key = instance.string();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = formulas_.find(key);
    if (it != formulas_.end()) return it->second;
  }
  auto formula = std::make_shared<const CnfFormula>(read_dimacs_file(instance));
  std::lock_guard<std::mutex> lock(mu_);
  return formulas_.emplace(key, std::move(formula)).first->second;
}

namespace {

Verification verify_model(const CnfFormula& formula, const SolverOutput& output) {
  if (!output.model_terminated || output.malformed) return Verification::kModelBad;
  Assignment assignment(formula.num_vars);
  for (int lit : output.model) {
    int var = std::abs(lit);
    if (var > formula.num_vars) return Verification::kModelBad;
    Value v = lit > 0 ? Value::kTrue : Value::kFalse;
    if (assignment[var] != Value::kUnassigned && assignment[var] != v) return Verification::kModelBad;
    assignment.set(var, v);
  }
  if (!assignment.complete()) return Verification::kModelBad;
  return satisfies(formula, assignment) ? Verification::kModelOk : Verification::kModelBad;
}

}  // namespace

InstanceOutcome run_instance(const std::vector<std::string>& command, const fs::path& instance, double timeout,
                             FormulaCache* cache) {
  if (!(timeout > 0)) throw std::invalid_argument("timeout must be positive");
  FormulaCache local;
  std::shared_ptr<const CnfFormula> formula = (cache ? cache : &local)->get(instance);

  std::vector<std::string> argv = command;
  argv.push_back(instance.string());
  argv.push_back("--timeout");
  argv.push_back(std::to_string(timeout));

  InstanceOutcome o;
  o.instance = instance.string();
  ProcessResult r;
  try {
    r = run_process(argv, timeout + kKillGrace);
  } catch (const SubprocessError&) {
    o.crashed = true;
    o.penalized_time = 2.0 * timeout;
    return o;
  }
  o.wall_time = r.wall_seconds;
  SolverOutput out = parse_solver_output(r.out);

  if (r.timed_out) {
    o.answer = Answer::kUnknown;
  } else if (!r.exited() || !out.answer || out.malformed) {
    o.answer = Answer::kUnknown;
    o.crashed = true;
  } else {
    int expected = *out.answer == Answer::kSat ? 10 : *out.answer == Answer::kUnsat ? 20 : 0;
    if (r.exit_code != expected) {
      o.answer = Answer::kUnknown;
      o.crashed = true;
    } else {
      o.answer = *out.answer;
    }
  }
  if (o.answer == Answer::kSat) o.verified = verify_model(*formula, out);
  o.penalized_time = penalized_time(o.answer, o.wall_time, timeout);
  return o;
}

InstanceOutcome run_instance(const CandidateSolver& candidate, const fs::path& instance, double timeout,
                             FormulaCache* cache) {
  if (!candidate.compiled()) throw std::invalid_argument("candidate is not compiled");
  return run_instance({candidate.binary.string()}, instance, timeout, cache);
}

void aggregate(EvaluationResult& result, const ReferenceMap* reference) {
  result.solved = 0;
  result.valid = true;
  for (InstanceOutcome& o : result.outcomes) {
    if (reference && o.answer == Answer::kUnsat) {
      auto it = reference->find(o.instance);
      if (it != reference->end() && it->second == Answer::kSat) o.verified = Verification::kCrossCheckMismatch;
    }
    if (o.verified == Verification::kModelBad || o.verified == Verification::kCrossCheckMismatch || o.crashed) {
      result.valid = false;
    }
    bool answered = (o.answer == Answer::kSat && o.verified == Verification::kModelOk) ||
                    (o.answer == Answer::kUnsat && o.verified != Verification::kCrossCheckMismatch);
    if (answered && o.wall_time <= result.timeout) result.solved++;
  }
  result.par2 = result.outcomes.empty() ? 0.0 : par2(result.outcomes);
}

ReferenceMap reference_from(const EvaluationResult& result) {
  ReferenceMap ref;
  for (const InstanceOutcome& o : result.outcomes) {
    if (o.answer == Answer::kSat && o.verified == Verification::kModelOk) ref[o.instance] = Answer::kSat;
    if (o.answer == Answer::kUnsat && o.verified != Verification::kCrossCheckMismatch) {
      ref[o.instance] = Answer::kUnsat;
    }
  }
  return ref;
}

EvaluationResult evaluate_command(const std::vector<std::string>& command, const std::vector<fs::path>& instances,
                                  const EvaluationOptions& options) {
  if (options.parallelism < 1) throw std::invalid_argument("parallelism must be positive");
  int workers = options.parallelism;
  if (options.clamp_to_hardware) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw > 0) workers = std::min(workers, hw);
  }
  workers = std::max(1, std::min<int>(workers, static_cast<int>(instances.size())));

  FormulaCache local;
  FormulaCache* cache = options.cache ? options.cache : &local;
  EvaluationResult result;
  result.timeout = options.timeout;
  result.outcomes.resize(instances.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (std::size_t i; (i = next++) < instances.size();) {
      try {
        result.outcomes[i] = run_instance(command, instances[i], options.timeout, cache);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; w++) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  aggregate(result, options.reference);
  return result;
}

EvaluationResult evaluate_candidate(const CandidateSolver& candidate, const std::vector<fs::path>& instances,
                                    const EvaluationOptions& options) {
  if (!candidate.compiled()) throw std::invalid_argument("candidate is not compiled");
  return evaluate_command({candidate.binary.string()}, instances, options);
}

EvaluationResult evaluate_candidate(const CandidateSolver& candidate, const std::vector<fs::path>& instances,
                                    double timeout, int parallelism, const ReferenceMap* reference) {
  EvaluationOptions options;
  options.timeout = timeout;
  options.parallelism = parallelism;
  options.reference = reference;
  return evaluate_candidate(candidate, instances, options);
}

nlohmann::json to_json(const InstanceOutcome& o) {
  return {{"instance", o.instance},
          {"answer", answer_name(o.answer)},
          {"t", o.wall_time},
          {"tau", o.penalized_time},
          {"verified", verification_name(o.verified)},
          {"crashed", o.crashed}};
}

InstanceOutcome outcome_from_json(const nlohmann::json& j) {
  InstanceOutcome o;
  o.instance = j.at("instance").get<std::string>();
  o.answer = parse_answer(j.at("answer").get<std::string>());
  o.wall_time = j.at("t").get<double>();
  o.penalized_time = j.at("tau").get<double>();
  o.verified = parse_verification(j.at("verified").get<std::string>());
  o.crashed = j.value("crashed", false);
  return o;
}

nlohmann::json to_json(const EvaluationResult& r) {
  nlohmann::json outcomes = nlohmann::json::array();
  for (const InstanceOutcome& o : r.outcomes) outcomes.push_back(to_json(o));
  return {{"par2", r.par2}, {"solved", r.solved}, {"valid", r.valid}, {"timeout", r.timeout},
          {"outcomes", outcomes}};
}

EvaluationResult evaluation_from_json(const nlohmann::json& j) {
  EvaluationResult r;
  r.par2 = j.at("par2").get<double>();
  r.solved = j.at("solved").get<int>();
  r.valid = j.at("valid").get<bool>();
  r.timeout = j.value("timeout", 0.0);
  for (const auto& o : j.at("outcomes")) r.outcomes.push_back(outcome_from_json(o));
  return r;
}

void write_outcomes_jsonl(std::ostream& out, const EvaluationResult& result) {
  for (const InstanceOutcome& o : result.outcomes) out << to_json(o).dump() << '\n';
}

std::vector<fs::path> list_instances(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".cnf") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace satforge
