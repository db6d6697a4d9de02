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

#include <gtest/gtest.h>

#include <fstream>

#include "satforge/generators.hpp"
#include "satforge/solver_template.hpp"
#include "test_util.hpp"

namespace satforge {
namespace {

namespace fs = std::filesystem;

// Returns the queued proposals in order, then repeats the last one.
class ScriptedProposer : public Proposer {
 public:
  explicit ScriptedProposer(std::vector<std::function<Proposal(const PromptRequest&)>> script)
      : script_(std::move(script)) {}
  Proposal propose(const PromptRequest& request, const HeuristicConfiguration&) override {
    std::size_t i = std::min(next_++, script_.size() - 1);
    return script_[i](request);
  }
  std::string name() const override { return "scripted"; }

 private:
  std::vector<std::function<Proposal(const PromptRequest&)>> script_;
  std::size_t next_ = 0;
};

Proposal malformed(const PromptRequest& r) { return MalformedResponse{"missing markers", r.slots, false, "??", 4}; }

class CampaignTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (std::uint64_t seed = 0; seed < 3; seed++) {
      fs::path p = dir_ / "instances" / ("r" + std::to_string(seed) + ".cnf");
      fs::create_directories(p.parent_path());
      write_dimacs_file(p, gen_random_ksat(40, 170, 3, seed));
      instances_.push_back(p);
    }
  }

  CampaignConfig config(Strategy strategy, int budget, const std::string& out = "out") {
    CampaignConfig c;
    c.strategy = strategy;
    c.budget = budget;
    c.timeout = 5;
    c.instance_set = instances_;
    c.seed = 3;
    c.workspace = testing::shared_workspace();
    c.output_dir = dir_ / out;
    return c;
  }

  // Baseline everywhere except two alternatives for restart_condition.
  Catalog small_catalog() {
    Catalog c = testing::catalog_with(
        Slot::kRestartCondition,
        {{"baseline", baseline_configuration().body(Slot::kRestartCondition)},
         *Catalog::builtin().find(Slot::kRestartCondition, "fixed_interval")});
    return c;
  }

  testing::TempDir dir_;
  std::vector<fs::path> instances_;
};

TEST(MutationPlanTest, DistinctSortedNonEmpty) {
  Rng rng(1);
  for (int i = 0; i < 2000; i++) {
    MutationPlan p = sample_mutation_plan(rng);
    ASSERT_FALSE(p.slots.empty());
    ASSERT_LE(p.slots.size(), 9u);
    for (std::size_t k = 1; k < p.slots.size(); k++) ASSERT_LT(slot_index(p.slots[k - 1]), slot_index(p.slots[k]));
  }
}

TEST(MutationPlanTest, Deterministic) {
  Rng a(77), b(77);
  for (int i = 0; i < 100; i++) EXPECT_EQ(sample_mutation_plan(a), sample_mutation_plan(b));
}

TEST(GhcScheduleTest, CyclesThroughSlots) {
  for (int i = 0; i < 27; i++) EXPECT_EQ(ghc_slot(i), kAllSlots[i % 9]);
  EXPECT_EQ(ghc_slot(9), Slot::kRestart);
}

TEST(StrategyTest, Names) {
  EXPECT_EQ(parse_strategy("ghc"), Strategy::kGhc);
  EXPECT_EQ(strategy_name(Strategy::kEa), "ea");
  EXPECT_THROW(parse_strategy("sa"), std::invalid_argument);
}

TEST(CampaignConfigTest, Validate) {
  CampaignConfig c;
  c.instance_set = {"a.cnf"};
  EXPECT_NO_THROW(c.validate());
  auto broken = [&](auto edit) {
    CampaignConfig d = c;
    edit(d);
    EXPECT_THROW(d.validate(), CampaignError);
  };
  broken([](CampaignConfig& d) { d.budget = 0; });
  broken([](CampaignConfig& d) { d.timeout = 0; });
  broken([](CampaignConfig& d) { d.parallelism = 0; });
  broken([](CampaignConfig& d) { d.instance_set.clear(); });
  broken([](CampaignConfig& d) { d.toolchain.command.clear(); });
  broken([](CampaignConfig& d) { d.proposer.llm.max_retries = -1; });
}

TEST(IterationRecordTest, JsonRoundTrip) {
  IterationRecord r;
  r.iteration = 4;
  r.plan = {Slot::kReduce, Slot::kBumpVar};
  r.proposer_status = "ok";
  r.proposer_attempts = 2;
  r.bodies = {{Slot::kReduce, "a\n"}, {Slot::kBumpVar, "b\n"}};
  r.provenance = {{Slot::kReduce, "catalog(x)"}, {Slot::kBumpVar, "proposed(4)"}};
  r.compile_status = "compiled";
  r.fingerprint = std::string(64, 'a');
  EvaluationResult e;
  e.timeout = 5;
  e.outcomes = {scripted_outcome("i.cnf", Answer::kSat, 0.5, 5)};
  aggregate(e, nullptr);
  r.evaluation = e;
  r.accepted = true;
  r.best_fitness = 0.5;
  EXPECT_EQ(record_from_json(nlohmann::json::parse(to_json(r).dump())), r);
}

TEST(SlotTallyTest, CountsAcceptedPlans) {
  std::vector<IterationRecord> h(3);
  h[0].plan = {Slot::kReduce};
  h[0].accepted = true;
  h[1].plan = {Slot::kReduce, Slot::kRestart};
  h[1].accepted = true;
  h[2].plan = {Slot::kRestart};
  auto t = slot_update_tally(h);
  EXPECT_EQ(t[Slot::kReduce], 2);
  EXPECT_EQ(t[Slot::kRestart], 1);
  EXPECT_EQ(t[Slot::kBumpVar], 0);
  EXPECT_EQ(t.size(), 9u);
}

TEST_F(CampaignTest, GhcRunsFullBudget) {
  CampaignConfig c = config(Strategy::kGhc, 9);
  CampaignState s = run_campaign(c, std::make_unique<MockProposer>(small_catalog(), 1));
  ASSERT_EQ(s.history.size(), 9u);
  double prev = s.baseline.par2;
  for (int i = 0; i < 9; i++) {
    const IterationRecord& r = s.history[i];
    EXPECT_EQ(r.iteration, i);
    EXPECT_EQ(r.plan, std::vector<Slot>{ghc_slot(i)});
    EXPECT_EQ(r.proposer_status, "ok");
    EXPECT_EQ(r.compile_status, "compiled");
    ASSERT_TRUE(r.evaluation.has_value());
    EXPECT_LE(r.best_fitness, prev);
    prev = r.best_fitness;
  }
  // Slots with only the baseline variant reproduce the incumbent.
  EXPECT_TRUE(s.history[0].evaluation_reused);
  EXPECT_TRUE(s.history[0].accepted);
  auto log = read_campaign_log(c.output_dir / "campaign.jsonl");
  EXPECT_EQ(log, s.history);
  EXPECT_TRUE(fs::exists(c.output_dir / "baseline.json"));
  EXPECT_TRUE(fs::exists(c.output_dir / "summary.json"));
  std::string best = testing::read_text(c.output_dir / "best_solver.cpp");
  EXPECT_EQ(best, splice_configuration(SolverTemplate::builtin(), s.best_config).source());
  auto summary = nlohmann::json::parse(testing::read_text(c.output_dir / "summary.json"));
  EXPECT_EQ(summary["iterations"], 9);
  EXPECT_EQ(summary["trace"].size(), 9u);
  EXPECT_DOUBLE_EQ(summary["best_par2"].get<double>(), s.best_fitness);
}

TEST_F(CampaignTest, ResumeAfterInterruption) {
  CampaignConfig c = config(Strategy::kEa, 8);
  CampaignHooks stop;
  stop.stop_after = 4;
  CampaignState first = run_campaign(c, std::make_unique<MockProposer>(small_catalog(), 5), stop);
  EXPECT_EQ(first.history.size(), 4u);
  EXPECT_FALSE(fs::exists(c.output_dir / "summary.json"));
  // Simulate a crash mid-write.
  {
    std::ofstream out(c.output_dir / "campaign.jsonl", std::ios::app);
    out << "{\"iteration\": 4, \"pla";
  }
  CampaignState resumed = run_campaign(c, std::make_unique<MockProposer>(small_catalog(), 5));
  ASSERT_EQ(resumed.history.size(), 8u);
  int skipped = 0;
  auto log = read_campaign_log(c.output_dir / "campaign.jsonl", &skipped);
  EXPECT_EQ(skipped, 0);
  EXPECT_EQ(log.size(), 8u);
  for (int i = 0; i < 4; i++) EXPECT_EQ(log[i], first.history[i]);

  // An uninterrupted run proposes the same plans and bodies.
  CampaignConfig fresh = config(Strategy::kEa, 8, "fresh");
  CampaignState whole = run_campaign(fresh, std::make_unique<MockProposer>(small_catalog(), 5));
  for (int i = 0; i < 8; i++) {
    EXPECT_EQ(whole.history[i].plan, log[i].plan) << i;
    EXPECT_EQ(whole.history[i].bodies, log[i].bodies) << i;
  }
  EXPECT_TRUE(fs::exists(c.output_dir / "summary.json"));

  // Running again with a complete log does nothing new.
  CampaignState again = run_campaign(c, std::make_unique<MockProposer>(small_catalog(), 5));
  EXPECT_EQ(again.history.size(), 8u);
  EXPECT_EQ(read_campaign_log(c.output_dir / "campaign.jsonl").size(), 8u);
}

TEST_F(CampaignTest, ResumeRejectsDifferentSeed) {
  CampaignConfig c = config(Strategy::kEa, 6);
  CampaignHooks stop;
  stop.stop_after = 3;
  run_campaign(c, std::make_unique<MockProposer>(small_catalog(), 5), stop);
  CampaignConfig other = c;
  other.seed = 4;
  EXPECT_THROW(run_campaign(other, std::make_unique<MockProposer>(small_catalog(), 5)), CampaignError);
  fs::remove(c.output_dir / "baseline.json");
  EXPECT_THROW(run_campaign(c, std::make_unique<MockProposer>(small_catalog(), 5)), CampaignError);
}

TEST_F(CampaignTest, MalformedAndUncompilableCandidatesUseBudget) {
  CampaignConfig c = config(Strategy::kEa, 4);
  auto broken = [](const PromptRequest& r) {
    ProposerResponse ok;
    for (Slot s : r.slots) ok.bodies[s] = "this does not compile;\n";
    return Proposal(ok);
  };
  CampaignState s = run_campaign(c, std::make_unique<ScriptedProposer>(
                                        std::vector<std::function<Proposal(const PromptRequest&)>>{
                                            malformed, broken, malformed, broken}));
  ASSERT_EQ(s.history.size(), 4u);
  EXPECT_EQ(s.history[0].proposer_status, "malformed");
  EXPECT_EQ(s.history[0].proposer_attempts, 4);
  EXPECT_EQ(s.history[0].compile_status, "skipped");
  EXPECT_EQ(s.history[1].compile_status, "compile_failed");
  EXPECT_EQ(s.history[1].provenance.begin()->second, "proposed(1)");
  for (const auto& r : s.history) {
    EXPECT_FALSE(r.accepted);
    EXPECT_FALSE(r.evaluation.has_value());
    EXPECT_DOUBLE_EQ(r.best_fitness, s.baseline.par2);
  }
  EXPECT_EQ(s.best_config, baseline_configuration());
}

TEST_F(CampaignTest, InvalidBaselineAborts) {
  CampaignConfig c = config(Strategy::kGhc, 2);
  testing::write_text(dir_ / "instances" / "bad.cnf", "p cnf 1 1\n");
  c.instance_set.push_back(dir_ / "instances" / "missing.cnf");
  EXPECT_ANY_THROW(run_campaign(c, std::make_unique<MockProposer>(small_catalog(), 1)));
}

TEST(CampaignLogTest, SkipsCorruptLines) {
  testing::TempDir dir;
  IterationRecord r;
  r.proposer_status = "malformed";
  r.compile_status = "skipped";
  testing::write_text(dir / "log.jsonl", to_json(r).dump() + "\nnot json\n\n" + to_json(r).dump() + "\n");
  int skipped = 0;
  EXPECT_EQ(read_campaign_log(dir / "log.jsonl", &skipped).size(), 2u);
  EXPECT_EQ(skipped, 1);
  EXPECT_THROW(read_campaign_log(dir / "none.jsonl"), std::runtime_error);
}

TEST(MakeProposerTest, MockAndMissingKey) {
  ::unsetenv("SATFORGE_MISSING_KEY");
  ProposerSettings mock;
  EXPECT_EQ(make_proposer(mock, 1, "out")->name(), "mock");
  ProposerSettings llm;
  llm.kind = ProposerSettings::Kind::kLlm;
  llm.llm.api_key_env = "SATFORGE_MISSING_KEY";
  EXPECT_THROW(make_proposer(llm, 1, "out"), MissingApiKey);
}

}  // namespace
}  // namespace satforge
