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

// satforge command-line tool.
//
//   satforge solve <file.cnf> [--timeout S]
//   satforge bench <dir> [--timeout S] [--parallelism N] [-o out.jsonl]
//   satforge campaign <config.json>
//   satforge gen <family> [params] [--seed S] -o <dir>
//   satforge report <logs...> -o <dir>
//   satforge gc-workspace <workspace> [--keep <campaign dir>...]
//
// Exit status: 10 SAT, 20 UNSAT, 0 unknown or success, 1 usage or error.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "satforge/cnf.hpp"
#include "satforge/config.hpp"
#include "satforge/evaluator.hpp"
#include "satforge/generators.hpp"
#include "satforge/heuristics.hpp"
#include "satforge/materializer.hpp"
#include "satforge/report.hpp"
#include "satforge/search.hpp"
#include "satforge/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnknown = 0;
constexpr int kExitError = 1;
constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;

fs::path self_executable(const char* argv0) {
  std::error_code ec;
  fs::path p = fs::read_symlink("/proc/self/exe", ec);
  return ec ? fs::absolute(argv0) : p;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string instance;
  double timeout = 5000.0;
  std::uint64_t seed = 0;
  std::int64_t conflict_budget = -1;
  std::vector<std::string> variants;  // slot=name
  bool quiet_stats = false;
};

int cmd_solve(const SolveArgs& args) {
  satforge::CnfFormula formula;
  try {
    formula = satforge::read_dimacs_file(args.instance);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "satforge solve: %s\n", e.what());
    return kExitError;
  }
  satforge::HeuristicHooks hooks = satforge::baseline_hooks();
  for (const std::string& v : args.variants) {
    if (v == "reduce_condition=dynamic_threshold") {
      hooks.reduce_condition = satforge::dynamic_threshold_reduce_condition();
    } else if (v == "bump_var=overflow_guard_1e100") {
      hooks.bump_var = satforge::overflow_guard_bump_var();
    } else {
      std::fprintf(stderr,
                   "satforge solve: no in-process binding for '%s' (available: "
                   "reduce_condition=dynamic_threshold, bump_var=overflow_guard_1e100)\n",
                   v.c_str());
      return kExitError;
    }
  }
  satforge::SolveLimits limits;
  limits.wall_timeout = args.timeout;
  if (args.conflict_budget >= 0) limits.conflict_budget = args.conflict_budget;
  satforge::SolveResult r = satforge::solve(formula, hooks, limits, args.seed);

  if (!args.quiet_stats) {
    std::printf("c conflicts %lld\n", static_cast<long long>(r.stats.conflicts));
    std::printf("c decisions %lld\n", static_cast<long long>(r.stats.decisions));
    std::printf("c propagations %lld\n", static_cast<long long>(r.stats.propagations));
    std::printf("c restarts %lld\n", static_cast<long long>(r.stats.restarts));
    std::printf("c reduce_rounds %lld\n", static_cast<long long>(r.stats.reduce_rounds));
    std::printf("c rephases %lld\n", static_cast<long long>(r.stats.rephases));
  }
  switch (r.outcome) {
    case satforge::Outcome::kSat: {
      std::printf("s SATISFIABLE\n");
      std::string line = "v";
      for (int v = 1; v <= formula.num_vars; v++) {
        line += ' ';
        line += std::to_string(r.model[v] == satforge::Value::kTrue ? v : -v);
        if (line.size() > 72) {
          std::printf("%s\n", line.c_str());
          line = "v";
        }
      }
      std::printf("%s 0\n", line.c_str());
      return kExitSat;
    }
    case satforge::Outcome::kUnsat:
      std::printf("s UNSATISFIABLE\n");
      return kExitUnsat;
    case satforge::Outcome::kUnknown:
      std::printf("s UNKNOWN\n");
      return kExitUnknown;
  }
  return kExitUnknown;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string dir;
  double timeout = 10.0;
  int parallelism = 1;
  std::string output;
  std::string solver;  // executable; default: this tool's solve command
  std::vector<std::string> solver_args;
  std::string name;
  std::string dataset;
  bool no_clamp = false;
};

int cmd_bench(const BenchArgs& args, const fs::path& self) {
  std::vector<fs::path> instances = satforge::list_instances(args.dir);
  if (instances.empty()) {
    std::fprintf(stderr, "satforge bench: no .cnf files in %s\n", args.dir.c_str());
    return kExitError;
  }
  std::vector<std::string> command;
  if (args.solver.empty()) {
    command = {self.string(), "solve", "--quiet-stats"};
  } else {
    command = {args.solver};
    command.insert(command.end(), args.solver_args.begin(), args.solver_args.end());
  }
  satforge::EvaluationOptions options;
  options.timeout = args.timeout;
  options.parallelism = args.parallelism;
  options.clamp_to_hardware = !args.no_clamp;
  satforge::EvaluationResult result = satforge::evaluate_command(command, instances, options);

  satforge::BenchSummary summary;
  summary.solver = !args.name.empty() ? args.name : args.solver.empty() ? "baseline" : fs::path(args.solver).filename().string();
  summary.dataset = !args.dataset.empty() ? args.dataset : fs::path(args.dir).lexically_normal().filename().string();
  if (summary.dataset.empty()) summary.dataset = fs::path(args.dir).lexically_normal().parent_path().filename().string();
  summary.par2 = result.par2;
  summary.solved = result.solved;
  summary.instances = static_cast<int>(result.outcomes.size());
  summary.valid = result.valid;
  summary.timeout = args.timeout;

  std::string out_path = args.output.empty() ? "bench.jsonl" : args.output;
  std::ofstream out(out_path, std::ios::trunc);
  satforge::write_outcomes_jsonl(out, result);
  out << json{{"summary", satforge::to_json(summary)}}.dump() << '\n';
  out.close();
  if (!out) {
    std::fprintf(stderr, "satforge bench: cannot write %s\n", out_path.c_str());
    return kExitError;
  }
  std::printf("%s\n", satforge::to_json(summary).dump().c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// campaign

int cmd_campaign(const std::string& config_path, bool quiet) {
  satforge::CampaignConfig config = satforge::load_campaign_config(config_path);
  satforge::CampaignHooks hooks;
  if (!quiet) {
    hooks.on_iteration = [&](const satforge::IterationRecord& r) {
      std::string slots;
      for (satforge::Slot s : r.plan) slots += (slots.empty() ? "" : ",") + std::string(satforge::slot_name(s));
      std::string par2 = r.evaluation ? std::to_string(r.evaluation->par2) : "-";
      std::fprintf(stderr, "[%d/%d] slots=%s proposer=%s compile=%s par2=%s accepted=%d best=%f\n", r.iteration + 1,
                   config.budget, slots.c_str(), r.proposer_status.c_str(), r.compile_status.c_str(), par2.c_str(),
                   r.accepted ? 1 : 0, r.best_fitness);
    };
  }
  satforge::CampaignState state = satforge::run_campaign(config, nullptr, hooks);
  std::printf("baseline par2 %.6f\nbest par2 %.6f\n", state.baseline.par2, state.best_fitness);
  for (const auto& [slot, n] : satforge::slot_update_tally(state.history)) {
    if (n > 0) std::printf("updated %s %d time(s)\n", std::string(satforge::slot_name(slot)).c_str(), n);
  }
  std::printf("best solver: %s\n", (config.output_dir / "best_solver.cpp").string().c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string family;
  int n = 0, m = 0, k = 0, holes = 0;
  int k_max = 0, holes_max = 0;
  int count = 1;
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_gen(const GenArgs& args) {
  satforge::Family family = satforge::parse_family(args.family);
  std::vector<satforge::GeneratorSpec> specs;
  switch (family) {
    case satforge::Family::kRandomKsat:
      for (int i = 0; i < args.count; i++) {
        specs.push_back({family, {{"n", args.n}, {"m", args.m}, {"k", args.k}}, args.seed + static_cast<std::uint64_t>(i)});
      }
      break;
    case satforge::Family::kPigeonhole:
      for (int h = args.holes; h <= std::max(args.holes, args.holes_max); h++) specs.push_back({family, {{"holes", h}}, {}});
      break;
    case satforge::Family::kLangford:
      for (int k = args.k; k <= std::max(args.k, args.k_max); k++) specs.push_back({family, {{"k", k}}, {}});
      break;
  }
  for (const auto& s : specs) s.validate();
  auto files = satforge::write_instances(specs, args.output);
  std::printf("wrote %zu instance(s) and manifest.json to %s\n", files.size(), args.output.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::vector<std::string> logs;
  std::string output = "report";
  std::string format = "all";
};

int cmd_report(const ReportArgs& args) {
  bool want_csv = args.format == "all" || args.format == "csv";
  bool want_svg = args.format == "all" || args.format == "svg";
  if (!want_csv && !want_svg) {
    std::fprintf(stderr, "satforge report: --format must be csv, svg or all\n");
    return kExitError;
  }
  fs::create_directories(args.output);
  std::vector<satforge::ReportRow> rows;
  int good = 0, bad = 0, campaign_index = 0;
  auto write = [&](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::trunc);
    out << text;
  };

  for (std::string path : args.logs) {
    fs::path p(path);
    if (fs::is_directory(p)) p /= "campaign.jsonl";
    std::ifstream in(p);
    if (!in) {
      std::fprintf(stderr, "satforge report: cannot read %s\n", p.string().c_str());
      bad++;
      continue;
    }
    std::vector<satforge::IterationRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      lineno++;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        json j = json::parse(line);
        if (j.contains("summary")) {
          satforge::BenchSummary s = satforge::bench_summary_from_json(j.at("summary"));
          rows.push_back({s.dataset, s.solver, s.par2, s.solved, std::nullopt});
        } else if (j.contains("iteration")) {
          records.push_back(satforge::record_from_json(j));
        } else if (j.contains("instance")) {
          satforge::outcome_from_json(j);
        } else {
          throw std::invalid_argument("unrecognized record");
        }
        good++;
      } catch (const std::exception& e) {
        std::fprintf(stderr, "warning: %s:%d: skipping corrupt line (%s)\n", p.string().c_str(), lineno, e.what());
        bad++;
      }
    }
    if (!records.empty()) {
      std::string stem = p.filename() == "campaign.jsonl" && !p.parent_path().filename().empty()
                             ? p.parent_path().filename().string()
                             : p.stem().string();
      stem = std::to_string(campaign_index++) + "_" + stem;
      auto points = satforge::convergence(records);
      if (want_csv) write(fs::path(args.output) / (stem + "_convergence.csv"), satforge::convergence_csv(points));
      if (want_svg) {
        write(fs::path(args.output) / (stem + "_convergence.svg"), satforge::convergence_svg(points, "PAR-2 during search: " + stem));
      }
    }
  }
  if (good == 0) {
    std::fprintf(stderr, "satforge report: no usable records\n");
    return kExitError;
  }
  if (!rows.empty()) {
    satforge::normalize_rows(rows);
    if (want_csv) write(fs::path(args.output) / "comparison.csv", satforge::comparison_csv(rows));
    if (want_svg) write(fs::path(args.output) / "comparison.svg", satforge::comparison_svg(rows));
  }
  std::printf("report written to %s (%d record(s), %d skipped)\n", args.output.c_str(), good, bad);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gc-workspace

int cmd_gc(const std::string& workspace, const std::vector<std::string>& keep_dirs) {
  std::set<std::string> keep;
  for (const std::string& d : keep_dirs) {
    fs::path dir(d);
    std::ifstream baseline(dir / "baseline.json");
    if (baseline) {
      json j = json::parse(baseline, nullptr, false);
      if (!j.is_discarded() && j.contains("key")) keep.insert(j["key"].value("fingerprint", ""));
    }
    if (fs::exists(dir / "campaign.jsonl")) {
      for (const auto& r : satforge::read_campaign_log(dir / "campaign.jsonl")) {
        if (r.accepted) keep.insert(r.fingerprint);
      }
    }
  }
  std::size_t removed = satforge::gc_workspace(workspace, keep);
  std::printf("removed %zu candidate director%s, kept %zu fingerprint(s)\n", removed, removed == 1 ? "y" : "ies",
              keep.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heuristic search over a modular CDCL SAT solver"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve a DIMACS file with the baseline heuristics");
  s->add_option("instance", solve.instance, "DIMACS CNF file")->required();
  s->add_option("--timeout", solve.timeout, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
  s->add_option("--seed", solve.seed, "Random seed");
  s->add_option("--conflict-budget", solve.conflict_budget, "Stop with UNKNOWN after this many conflicts");
  s->add_option("--variant", solve.variants, "Replace a slot by an in-process variant, as slot=name");
  s->add_flag("--quiet-stats", solve.quiet_stats, "Omit the 'c' statistics lines");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Evaluate a solver over a directory of instances");
  b->add_option("dir", bench.dir, "Directory of .cnf files")->required();
  b->add_option("--timeout", bench.timeout, "Per-instance timeout in seconds")->check(CLI::PositiveNumber);
  b->add_option("--parallelism", bench.parallelism, "Concurrent instances")->check(CLI::PositiveNumber);
  b->add_option("-o,--output", bench.output, "JSON-lines output (default bench.jsonl)");
  b->add_option("--solver", bench.solver, "Solver executable speaking the s/v protocol");
  b->add_option("--solver-arg", bench.solver_args, "Extra argument for --solver (repeatable)");
  b->add_option("--name", bench.name, "Solver name in the summary");
  b->add_option("--dataset", bench.dataset, "Dataset name in the summary");
  b->add_flag("--no-clamp", bench.no_clamp, "Allow more workers than hardware threads");

  std::string config_path;
  bool quiet = false;
  auto* c = app.add_subcommand("campaign", "Run or resume a heuristic search campaign");
  c->add_option("config", config_path, "Campaign config (JSON)")->required();
  c->add_flag("-q,--quiet", quiet, "No per-iteration progress");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate benchmark instances");
  g->add_option("family", gen.family, "random_ksat, pigeonhole or langford")->required();
  g->add_option("--n", gen.n, "Variables (random_ksat)");
  g->add_option("--m", gen.m, "Clauses (random_ksat)");
  g->add_option("--k", gen.k, "Clause width (random_ksat) or Langford order");
  g->add_option("--k-max", gen.k_max, "Generate Langford orders k..k-max");
  g->add_option("--holes", gen.holes, "Holes (pigeonhole)");
  g->add_option("--holes-max", gen.holes_max, "Generate holes..holes-max");
  g->add_option("--count", gen.count, "Number of random instances (seeds seed, seed+1, ...)")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Seed of the first random instance");
  g->add_option("-o,--output", gen.output, "Output directory")->required();

  ReportArgs report;
  auto* r = app.add_subcommand("report", "Convergence and comparison tables from logs");
  r->add_option("logs", report.logs, "Campaign logs or directories, bench logs")->required();
  r->add_option("-o,--output", report.output, "Output directory");
  r->add_option("--format", report.format, "csv, svg or all");

  std::string workspace;
  std::vector<std::string> keep;
  auto* w = app.add_subcommand("gc-workspace", "Delete compiled candidates no campaign refers to");
  w->add_option("workspace", workspace, "Workspace directory")->required();
  w->add_option("--keep", keep, "Campaign output directory whose baseline and accepted candidates stay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitError;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*b) return cmd_bench(bench, self_executable(argv[0]));
    if (*c) return cmd_campaign(config_path, quiet);
    if (*g) return cmd_gen(gen);
    if (*r) return cmd_report(report);
    if (*w) return cmd_gc(workspace, keep);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "satforge: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
