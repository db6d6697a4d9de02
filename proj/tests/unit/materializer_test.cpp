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


#include "satforge/materializer.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "satforge/evaluator.hpp"
#include "satforge/generators.hpp"
#include "satforge/solver.hpp"
#include "satforge/subprocess.hpp"
#include "test_util.hpp"

namespace satforge {
namespace {

namespace fs = std::filesystem;

// Writes an empty shell script as the "binary" after a short pause.
Toolchain fake_toolchain(double pause = 0.3) {
  Toolchain t;
  t.command = {"sh", "-c", "sleep " + std::to_string(pause) + " && printf '#!/bin/sh\\n' > \"$0\" && chmod +x \"$0\"",
               "{binary}"};
  t.timeout = 30;
  return t;
}

HeuristicConfiguration config_with(Slot s, const std::string& body) {
  return baseline_configuration().with(s, body, Provenance::proposed(0));
}

std::map<std::string, long long> parse_stats(const std::string& out) {
  std::map<std::string, long long> stats;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string c, key;
    long long value;
    if (words >> c >> key >> value && c == "c") stats[key] = value;
  }
  return stats;
}

TEST(FingerprintTest, Sha256Hex) {
  EXPECT_EQ(fingerprint(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(fingerprint("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(MaterializerTest, CompilesBaselineAndCaches) {
  Materializer m(testing::shared_workspace());
  CandidateSolver c = m.materialize(baseline_configuration());
  ASSERT_TRUE(c.compiled()) << c.compile_log;
  EXPECT_EQ(c.fingerprint, fingerprint(c.source));
  EXPECT_TRUE(fs::exists(m.workspace() / c.fingerprint / "source.cpp"));
  EXPECT_EQ(testing::read_text(m.workspace() / c.fingerprint / "source.cpp"), c.source);
  EXPECT_EQ(c.binary, m.workspace() / c.fingerprint / "binary");

  Materializer again(testing::shared_workspace());
  CandidateSolver d = again.materialize(baseline_configuration());
  EXPECT_TRUE(d.cache_hit);
  EXPECT_EQ(again.compiler_invocations(), 0);
  EXPECT_EQ(d.binary, c.binary);
}

TEST(MaterializerTest, SyntaxErrorIsACompileFailure) {
  testing::TempDir ws;
  Materializer m(ws.path());
  CandidateSolver c = m.materialize(config_with(Slot::kRephase, "void Solver::rephase() { this is not c++ }"));
  EXPECT_EQ(c.status, CompileStatus::kCompileFailed);
  EXPECT_EQ(compile_status_name(c.status), "compile_failed");
  EXPECT_FALSE(c.compile_log.empty());
  EXPECT_TRUE(c.binary.empty());
  EXPECT_TRUE(fs::exists(ws / c.fingerprint / "compile.log"));
  // A failed compile is not retried within the session.
  CandidateSolver again = m.materialize(c.config);
  EXPECT_EQ(again.status, CompileStatus::kCompileFailed);
  EXPECT_EQ(m.compiler_invocations(), 1);
}

TEST(MaterializerTest, ConcurrentRequestsShareOneCompile) {
  testing::TempDir ws;
  Materializer m(ws.path(), fake_toolchain(0.5));
  HeuristicConfiguration config = config_with(Slot::kRestart, "void Solver::restart() { backtrack(0); }");
  std::vector<CandidateSolver> results(6, CandidateSolver{config, {}, {}, {}, CompileStatus::kPending, {}, false});
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < results.size(); i++) {
    threads.emplace_back([&, i] { results[i] = m.materialize(config); });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(m.compiler_invocations(), 1);
  int hits = 0;
  for (const auto& r : results) {
    EXPECT_TRUE(r.compiled());
    EXPECT_EQ(r.fingerprint, results[0].fingerprint);
    hits += r.cache_hit ? 1 : 0;
  }
  EXPECT_EQ(hits, 5);
  // No partial binaries are left behind.
  for (const auto& e : fs::directory_iterator(ws / results[0].fingerprint)) {
    EXPECT_EQ(e.path().filename().string().find("partial"), std::string::npos);
  }
}

TEST(MaterializerTest, CompilerTimeoutFails) {
  testing::TempDir ws;
  Toolchain slow;
  slow.command = {"sleep", "10"};
  slow.timeout = 0.3;
  Materializer m(ws.path(), slow);
  CandidateSolver c = m.materialize(baseline_configuration());
  EXPECT_EQ(c.status, CompileStatus::kCompileFailed);
  EXPECT_NE(c.compile_log.find("killed"), std::string::npos);
}

TEST(MaterializerTest, MissingCompilerFails) {
  testing::TempDir ws;
  Toolchain none;
  none.command = {"satforge-no-such-compiler", "{source}"};
  Materializer m(ws.path(), none);
  EXPECT_EQ(m.materialize(baseline_configuration()).status, CompileStatus::kCompileFailed);
}

TEST(MaterializerTest, GcKeepsListedFingerprints) {
  testing::TempDir ws;
  Materializer m(ws.path(), fake_toolchain(0));
  CandidateSolver a = m.materialize(config_with(Slot::kRestart, "void Solver::restart() { backtrack(0); }"));
  CandidateSolver b = m.materialize(config_with(Slot::kRestart, "void Solver::restart() {}"));
  fs::create_directories(ws / "notes");
  EXPECT_EQ(gc_workspace(ws.path(), {a.fingerprint}), 1u);
  EXPECT_TRUE(fs::exists(ws / a.fingerprint));
  EXPECT_FALSE(fs::exists(ws / b.fingerprint));
  EXPECT_TRUE(fs::exists(ws / "notes"));
  EXPECT_THROW(gc_workspace(ws / "missing", {}), WorkspaceError);
}

// The compiled template and the in-process solver run the same search.
TEST(TemplateEquivalenceTest, CompiledStatsMatchInProcess) {
  testing::TempDir dir;
  Materializer m(testing::shared_workspace());
  struct Case {
    std::string name;
    HeuristicConfiguration config;
    HeuristicHooks hooks;
  };
  HeuristicHooks dynamic = baseline_hooks();
  dynamic.reduce_condition = dynamic_threshold_reduce_condition();
  HeuristicHooks guard = baseline_hooks();
  guard.bump_var = overflow_guard_bump_var();
  const Catalog& cat = Catalog::builtin();
  std::vector<Case> cases = {
      {"baseline", baseline_configuration(), baseline_hooks()},
      {"dynamic_threshold",
       baseline_configuration().with(Slot::kReduceCondition,
                                     cat.find(Slot::kReduceCondition, "dynamic_threshold")->body,
                                     Provenance::catalog("dynamic_threshold")),
       dynamic},
      {"overflow_guard",
       baseline_configuration().with(Slot::kBumpVar, cat.find(Slot::kBumpVar, "overflow_guard_1e100")->body,
                                     Provenance::catalog("overflow_guard_1e100")),
       guard},
  };
  std::vector<CnfFormula> formulas = {gen_random_ksat(150, 639, 3, 11), gen_random_ksat(150, 639, 3, 12),
                                      gen_pigeonhole(7)};
  for (std::size_t i = 0; i < formulas.size(); i++) {
    write_dimacs_file(dir / ("f" + std::to_string(i) + ".cnf"), formulas[i]);
  }
  for (const Case& c : cases) {
    CandidateSolver cand = m.materialize(c.config);
    ASSERT_TRUE(cand.compiled()) << cand.compile_log;
    for (std::size_t i = 0; i < formulas.size(); i++) {
      fs::path inst = dir / ("f" + std::to_string(i) + ".cnf");
      ProcessResult r = run_process({cand.binary.string(), inst.string(), "--seed", "5"}, 60);
      SolveResult in_process = solve(formulas[i], c.hooks, SolveLimits{}, 5);
      auto stats = parse_stats(r.out);
      EXPECT_EQ(stats["conflicts"], in_process.stats.conflicts) << c.name << " f" << i;
      EXPECT_EQ(stats["decisions"], in_process.stats.decisions) << c.name << " f" << i;
      EXPECT_EQ(stats["propagations"], in_process.stats.propagations) << c.name << " f" << i;
      EXPECT_EQ(stats["reduce_rounds"], in_process.stats.reduce_rounds) << c.name << " f" << i;
      EXPECT_EQ(r.exit_code, in_process.outcome == Outcome::kSat ? 10 : 20) << c.name << " f" << i;
    }
  }
}

}  // namespace
}  // namespace satforge
