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

#include "satforge/search.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "satforge/solver_template.hpp"

namespace satforge {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view strategy_name(Strategy s) { return s == Strategy::kGhc ? "ghc" : "ea"; }

Strategy parse_strategy(std::string_view name) {
  if (name == "ghc") return Strategy::kGhc;
  if (name == "ea") return Strategy::kEa;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "' (expected ghc or ea)");
}

void CampaignConfig::validate() const {
  if (budget < 1) throw CampaignError("budget must be at least 1");
  if (!(timeout > 0)) throw CampaignError("timeout must be positive");
  if (parallelism < 1) throw CampaignError("parallelism must be at least 1");
  if (instance_set.empty()) throw CampaignError("instance set is empty");
  if (toolchain.command.empty()) throw CampaignError("toolchain command is empty");
  if (!(toolchain.timeout > 0)) throw CampaignError("toolchain timeout must be positive");
  if (proposer.llm.max_retries < 0) throw CampaignError("max_retries must be >= 0");
  if (proposer.llm.temperature < 0) throw CampaignError("temperature must be >= 0");
}

MutationPlan sample_mutation_plan(Rng& rng) {
  int l;
  do {
    l = rng.binomial(kNumSlots, 1.0 / kNumSlots);
  } while (l == 0);
  std::array<int, kNumSlots> idx;
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < l; i++) {
    auto j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(kNumSlots - i)));
    std::swap(idx[i], idx[j]);
  }
  std::sort(idx.begin(), idx.begin() + l);
  MutationPlan plan;
  for (int i = 0; i < l; i++) plan.slots.push_back(kAllSlots[idx[i]]);
  return plan;
}

Slot ghc_slot(int iteration) { return kAllSlots[iteration % kNumSlots]; }

namespace {

json slot_names(const std::vector<Slot>& slots) {
  json a = json::array();
  for (Slot s : slots) a.push_back(slot_name(s));
  return a;
}

json slot_map(const std::map<Slot, std::string>& m) {
  json o = json::object();
  for (const auto& [s, text] : m) o[std::string(slot_name(s))] = text;
  return o;
}

std::map<Slot, std::string> slot_map_from(const json& j) {
  std::map<Slot, std::string> m;
  for (const auto& [k, v] : j.items()) m[slot_from_name(k)] = v.get<std::string>();
  return m;
}

}  // namespace

json to_json(const IterationRecord& r) {
  return {{"iteration", r.iteration},
          {"plan", slot_names(r.plan)},
          {"proposer", {{"status", r.proposer_status}, {"detail", r.proposer_detail}, {"attempts", r.proposer_attempts}}},
          {"bodies", slot_map(r.bodies)},
          {"provenance", slot_map(r.provenance)},
          {"compile", {{"status", r.compile_status}, {"fingerprint", r.fingerprint}}},
          {"evaluation", r.evaluation ? to_json(*r.evaluation) : json(nullptr)},
          {"evaluation_reused", r.evaluation_reused},
          {"accepted", r.accepted},
          {"best_fitness", r.best_fitness}};
}

IterationRecord record_from_json(const json& j) {
  IterationRecord r;
  r.iteration = j.at("iteration").get<int>();
  for (const auto& s : j.at("plan")) r.plan.push_back(slot_from_name(s.get<std::string>()));
  const json& p = j.at("proposer");
  r.proposer_status = p.at("status").get<std::string>();
  r.proposer_detail = p.value("detail", "");
  r.proposer_attempts = p.value("attempts", 0);
  r.bodies = slot_map_from(j.at("bodies"));
  r.provenance = slot_map_from(j.value("provenance", json::object()));
  r.compile_status = j.at("compile").at("status").get<std::string>();
  r.fingerprint = j.at("compile").value("fingerprint", "");
  if (!j.at("evaluation").is_null()) r.evaluation = evaluation_from_json(j.at("evaluation"));
  r.evaluation_reused = j.value("evaluation_reused", false);
  r.accepted = j.at("accepted").get<bool>();
  r.best_fitness = j.at("best_fitness").get<double>();
  return r;
}

std::map<Slot, int> slot_update_tally(const std::vector<IterationRecord>& history) {
  std::map<Slot, int> tally;
  for (Slot s : kAllSlots) tally[s] = 0;
  for (const IterationRecord& r : history) {
    if (!r.accepted) continue;
    for (Slot s : r.plan) tally[s]++;
  }
  return tally;
}

std::unique_ptr<Proposer> make_proposer(const ProposerSettings& settings, std::uint64_t seed,
                                        const fs::path& output_dir) {
  if (settings.kind == ProposerSettings::Kind::kMock) {
    Catalog catalog = settings.catalog_dir ? Catalog::load_directory(*settings.catalog_dir) : Catalog::builtin();
    return std::make_unique<MockProposer>(std::move(catalog), seed);
  }
  LlmSettings llm = settings.llm;
  if (llm.audit_log.empty()) llm.audit_log = output_dir / "prompts.jsonl";
  auto transport = std::make_unique<HttpChatTransport>(llm.endpoint, llm.request_timeout);
  return std::make_unique<LlmProposer>(std::move(llm), std::move(transport));
}

std::vector<IterationRecord> read_campaign_log(const fs::path& path, int* skipped) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<IterationRecord> records;
  int bad = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(record_from_json(json::parse(line)));
    } catch (const std::exception&) {
      bad++;
    }
  }
  if (skipped) *skipped = bad;
  return records;
}

namespace {

constexpr const char* kLogName = "campaign.jsonl";

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw CampaignError("cannot write " + p.string());
}

json instance_list(const CampaignConfig& config) {
  json a = json::array();
  for (const fs::path& p : config.instance_set) a.push_back(p.string());
  return a;
}

// Loads the records of an interrupted run. A trailing line without newline
// was cut off mid-write and is dropped from the file.
std::vector<IterationRecord> load_for_resume(const fs::path& log_path) {
  std::vector<IterationRecord> records;
  if (!fs::exists(log_path)) return records;
  std::string text = read_text(log_path);
  std::size_t complete = text.rfind('\n');
  complete = complete == std::string::npos ? 0 : complete + 1;
  if (complete < text.size()) {
    fs::resize_file(log_path, complete);
    text.resize(complete);
  }
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(record_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw CampaignError(log_path.string() + ":" + std::to_string(lineno) + ": corrupt record: " + e.what());
    }
  }
  return records;
}

HeuristicConfiguration apply(const HeuristicConfiguration& base, const IterationRecord& r) {
  HeuristicConfiguration c = base;
  for (const auto& [slot, body] : r.bodies) {
    Provenance origin = Provenance::proposed(r.iteration);
    auto it = r.provenance.find(slot);
    if (it != r.provenance.end() && it->second.rfind("catalog(", 0) == 0 && it->second.back() == ')') {
      origin = Provenance::catalog(it->second.substr(8, it->second.size() - 9));
    }
    c = c.with(slot, body, origin);
  }
  return c;
}

json summary_json(const CampaignConfig& config, const CampaignState& state) {
  json trace = json::array();
  for (const IterationRecord& r : state.history) {
    trace.push_back({{"iteration", r.iteration},
                     {"candidate_par2", r.evaluation ? json(r.evaluation->par2) : json(nullptr)},
                     {"best_par2", r.best_fitness},
                     {"accepted", r.accepted},
                     {"slots", slot_names(r.plan)}});
  }
  json tally = json::object();
  for (const auto& [s, n] : slot_update_tally(state.history)) tally[std::string(slot_name(s))] = n;
  return {{"strategy", strategy_name(config.strategy)},
          {"budget", config.budget},
          {"iterations", state.history.size()},
          {"baseline_par2", state.baseline.par2},
          {"best_par2", state.best_fitness},
          {"best_fingerprint", state.best_fingerprint},
          {"slot_updates", tally},
          {"trace", trace}};
}

}  // namespace

CampaignState run_campaign(const CampaignConfig& config, std::unique_ptr<Proposer> proposer,
                           const CampaignHooks& hooks) {
  config.validate();
  fs::create_directories(config.output_dir);
  if (!proposer) proposer = make_proposer(config.proposer, config.seed, config.output_dir);
  Materializer materializer(config.workspace, config.toolchain);

  EvaluationOptions eval_options;
  eval_options.timeout = config.timeout;
  eval_options.parallelism = config.parallelism;
  eval_options.clamp_to_hardware = config.clamp_parallelism;
  FormulaCache formulas;
  eval_options.cache = &formulas;

  CampaignState state;
  state.budget = config.budget;
  CandidateSolver baseline = materializer.materialize(state.best_config);
  if (!baseline.compiled()) throw CampaignError("baseline solver does not compile:\n" + baseline.compile_log);

  const fs::path log_path = config.output_dir / kLogName;
  const fs::path baseline_path = config.output_dir / "baseline.json";
  std::vector<IterationRecord> logged = load_for_resume(log_path);

  // The baseline is evaluated once per campaign; a resumed run reuses it so
  // that f* stays identical.
  json baseline_key = {{"fingerprint", baseline.fingerprint}, {"timeout", config.timeout},
                       {"instances", instance_list(config)}};
  bool have_baseline = false;
  if (fs::exists(baseline_path)) {
    try {
      json stored = json::parse(read_text(baseline_path));
      if (stored.at("key") == baseline_key) {
        state.baseline = evaluation_from_json(stored.at("evaluation"));
        have_baseline = true;
      }
    } catch (const std::exception&) {
    }
  }
  if (!have_baseline && !logged.empty()) {
    throw CampaignError("campaign log exists but baseline.json is missing or belongs to another configuration");
  }
  if (!have_baseline) {
    state.baseline = evaluate_candidate(baseline, config.instance_set, eval_options);
    write_text(baseline_path, json{{"key", baseline_key}, {"evaluation", to_json(state.baseline)}}.dump(2) + "\n");
  }
  if (!state.baseline.valid) throw CampaignError("baseline evaluation is invalid; no starting fitness");
  ReferenceMap reference = reference_from(state.baseline);
  eval_options.reference = &reference;

  state.best_fingerprint = baseline.fingerprint;
  state.best_fitness = state.baseline.par2;
  std::map<std::string, EvaluationResult> evaluations = {{baseline.fingerprint, state.baseline}};
  Rng rng(config.seed);

  auto plan_for = [&](int i) {
    return config.strategy == Strategy::kGhc ? MutationPlan{{ghc_slot(i)}} : sample_mutation_plan(rng);
  };
  auto request_for = [&](const MutationPlan& plan) {
    return PromptRequest{plan.slots, splice_configuration(materializer.solver_template(), state.best_config).source(),
                         {}};
  };

  // Replay the log: the plan sequence and the proposer state must line up
  // with what a fresh run would have produced.
  if (static_cast<int>(logged.size()) > config.budget) {
    throw CampaignError("campaign log holds more records than the budget");
  }
  for (const IterationRecord& r : logged) {
    int i = static_cast<int>(state.history.size());
    if (r.iteration != i) throw CampaignError("campaign log is out of sequence at record " + std::to_string(i));
    MutationPlan plan = plan_for(i);
    if (plan.slots != r.plan) throw CampaignError("campaign log does not match the configured strategy and seed");
    proposer->skip(request_for(plan));
    if (r.evaluation && !r.fingerprint.empty()) evaluations.emplace(r.fingerprint, *r.evaluation);
    if (r.accepted) {
      state.best_config = apply(state.best_config, r);
      state.best_fingerprint = r.fingerprint;
      state.best_fitness = r.evaluation->par2;
    }
    state.history.push_back(r);
  }

  std::ofstream log(log_path, std::ios::app | std::ios::binary);
  if (!log) throw CampaignError("cannot open " + log_path.string());

  for (int i = static_cast<int>(state.history.size()); i < config.budget; i++) {
    if (hooks.stop_after && static_cast<int>(state.history.size()) >= *hooks.stop_after) break;
    MutationPlan plan = plan_for(i);
    IterationRecord rec;
    rec.iteration = i;
    rec.plan = plan.slots;
    Proposal proposal = proposer->propose(request_for(plan), state.best_config);

    if (auto* bad = std::get_if<MalformedResponse>(&proposal)) {
      rec.proposer_status = "malformed";
      rec.proposer_detail = bad->reason;
      rec.proposer_attempts = bad->attempts;
      rec.compile_status = "skipped";
    } else {
      auto& ok = std::get<ProposerResponse>(proposal);
      rec.proposer_status = "ok";
      rec.proposer_attempts = ok.attempts;
      HeuristicConfiguration candidate_config = state.best_config;
      for (Slot s : plan.slots) {
        auto it = ok.bodies.find(s);
        if (it == ok.bodies.end()) throw CampaignError("proposer omitted slot " + std::string(slot_name(s)));
        auto v = ok.variants.find(s);
        Provenance origin = v != ok.variants.end() ? Provenance::catalog(v->second) : Provenance::proposed(i);
        candidate_config = candidate_config.with(s, it->second, origin);
        rec.bodies[s] = candidate_config.body(s);
        rec.provenance[s] = origin.describe();
      }
      CandidateSolver candidate = materializer.materialize(candidate_config);
      rec.compile_status = std::string(compile_status_name(candidate.status));
      rec.fingerprint = candidate.fingerprint;
      if (candidate.compiled()) {
        auto cached = evaluations.find(candidate.fingerprint);
        if (cached != evaluations.end()) {
          rec.evaluation = cached->second;
          rec.evaluation_reused = true;
        } else {
          rec.evaluation = evaluate_candidate(candidate, config.instance_set, eval_options);
          evaluations.emplace(candidate.fingerprint, *rec.evaluation);
        }
        rec.accepted = rec.evaluation->valid && rec.evaluation->par2 <= state.best_fitness;
        if (rec.accepted) {
          state.best_config = candidate_config;
          state.best_fingerprint = candidate.fingerprint;
          state.best_fitness = rec.evaluation->par2;
        }
      }
    }
    rec.best_fitness = state.best_fitness;
    log << to_json(rec).dump() << '\n';
    log.flush();
    if (!log) throw CampaignError("cannot append to " + log_path.string());
    state.history.push_back(rec);
    if (hooks.on_iteration) hooks.on_iteration(rec);
  }
  state.iteration = static_cast<int>(state.history.size());

  if (state.iteration == config.budget) {
    write_text(config.output_dir / "best_solver.cpp",
               splice_configuration(materializer.solver_template(), state.best_config).source());
    write_text(config.output_dir / "summary.json", summary_json(config, state).dump(2) + "\n");
  }
  return state;
}

CampaignState run_ghc(CampaignConfig config, std::unique_ptr<Proposer> proposer) {
  config.strategy = Strategy::kGhc;
  return run_campaign(config, std::move(proposer));
}

CampaignState run_ea(CampaignConfig config, std::unique_ptr<Proposer> proposer) {
  config.strategy = Strategy::kEa;
  return run_campaign(config, std::move(proposer));
}

}  // namespace satforge
