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


#include "satforge/solver_template.hpp"

#include <gtest/gtest.h>

#include "satforge/heuristics.hpp"

namespace satforge {
namespace {

std::string all_regions(const std::string& inner_for_reduce = "x\n") {
  std::string src = "header\n";
  for (Slot s : kAllSlots) {
    src += start_marker(s) + "\n";
    src += s == Slot::kReduce ? inner_for_reduce : std::string(slot_name(s)) + " body\n";
    src += end_marker(s) + "\n";
  }
  return src + "footer\n";
}

std::string expect_template_error(const std::string& source) {
  try {
    SolverTemplate t(source);
  } catch (const TemplateError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no TemplateError";
  return "";
}

TEST(SolverTemplateTest, BuiltinHasAllRegions) {
  const SolverTemplate& t = SolverTemplate::builtin();
  for (Slot s : kAllSlots) {
    std::string body = extract_region(t, s);
    EXPECT_NE(body.find("Solver::" + std::string(slot_name(s)) + "("), std::string::npos) << slot_name(s);
  }
  // The engine header is inlined.
  EXPECT_EQ(t.source().find("#include \"satforge/cdcl_engine.hpp\""), std::string::npos);
  EXPECT_NE(t.source().find("class Engine"), std::string::npos);
}

TEST(SolverTemplateTest, ExtractSpliceRoundTrip) {
  const SolverTemplate& t = SolverTemplate::builtin();
  for (Slot s : kAllSlots) {
    EXPECT_EQ(splice_region(t, s, extract_region(t, s)).source(), t.source());
  }
}

TEST(SolverTemplateTest, SpliceKeepsEveryOtherByte) {
  const SolverTemplate& t = SolverTemplate::builtin();
  for (Slot s : kAllSlots) {
    SolverTemplate out = splice_region(t, s, "NEW\nBODY");
    SolverTemplate::Region r = t.region(s);
    EXPECT_EQ(out.source().substr(0, r.begin), t.source().substr(0, r.begin));
    EXPECT_EQ(out.source().substr(r.begin, 9), "NEW\nBODY\n");
    EXPECT_EQ(out.source().substr(r.begin + 9), t.source().substr(r.end));
    EXPECT_EQ(extract_region(out, s), "NEW\nBODY\n");
    for (Slot o : kAllSlots) {
      if (o != s) EXPECT_EQ(extract_region(out, o), extract_region(t, o));
    }
  }
}

TEST(SolverTemplateTest, SpliceConfigurationMatchesSequentialSplices) {
  const SolverTemplate& t = SolverTemplate::builtin();
  HeuristicConfiguration config = baseline_configuration();
  for (Slot s : kAllSlots) {
    const auto& variants = Catalog::builtin().variants(s);
    config = config.with(s, variants.front().body, Provenance::catalog(variants.front().name));
  }
  SolverTemplate expected = t;
  for (Slot s : kAllSlots) expected = splice_region(expected, s, config.body(s));
  EXPECT_EQ(splice_configuration(t, config).source(), expected.source());
  EXPECT_EQ(splice_configuration(t, baseline_configuration()).source(), t.source());
}

TEST(SolverTemplateTest, RejectsBadBodies) {
  const SolverTemplate& t = SolverTemplate::builtin();
  EXPECT_THROW(splice_region(t, Slot::kReduce, "  \n"), TemplateError);
  EXPECT_THROW(splice_region(t, Slot::kReduce, "a\n  // end reduce  \nb"), TemplateError);
  EXPECT_THROW(splice_region(t, Slot::kReduce, "// start restart"), TemplateError);
}

TEST(SolverTemplateTest, MarkerErrorsNameTheSlot) {
  std::string ok = all_regions();
  EXPECT_NO_THROW(SolverTemplate{ok});

  std::string missing = ok;
  missing.erase(missing.find("// end rephase\n"), 15);
  EXPECT_NE(expect_template_error(missing).find("rephase"), std::string::npos);

  std::string duplicated = ok + "// start bump_var\n";
  EXPECT_NE(expect_template_error(duplicated).find("duplicated"), std::string::npos);

  std::string reversed = "// end restart\n// start restart\n" + ok.substr(ok.find("// start restart_condition\n"));
  EXPECT_NE(expect_template_error(reversed).find("restart"), std::string::npos);

  std::string nested = all_regions("// start restart_condition\n");
  std::string nested_err = expect_template_error(nested);
  EXPECT_FALSE(nested_err.empty());
}

TEST(SolverTemplateTest, OverlappingRegions) {
  std::string src;
  for (Slot s : kAllSlots) {
    if (s == Slot::kRestart || s == Slot::kRestartCondition) continue;
    src += start_marker(s) + "\nb\n" + end_marker(s) + "\n";
  }
  src += "// start restart\n// start restart_condition\n// end restart\n// end restart_condition\n";
  EXPECT_NE(expect_template_error(src).find("overlap"), std::string::npos);
}

TEST(SolverTemplateTest, CrlfMarkers) {
  std::string src;
  for (Slot s : kAllSlots) src += start_marker(s) + "\r\nbody\r\n" + end_marker(s) + "\r\n";
  SolverTemplate t(src);
  EXPECT_EQ(extract_region(t, Slot::kBumpVar), "body\r\n");
}

TEST(MarkerLineTest, IgnoresSurroundingWhitespace) {
  EXPECT_TRUE(is_marker_line("  // start reduce \t"));
  EXPECT_TRUE(is_marker_line("// end bump_var_heuristic"));
  EXPECT_FALSE(is_marker_line("// start reducer"));
  EXPECT_FALSE(is_marker_line("x // start reduce"));
}

TEST(CanonicalBodyTest, AddsTrailingNewline) {
  EXPECT_EQ(canonical_body("a"), "a\n");
  EXPECT_EQ(canonical_body("a\n"), "a\n");
}

}  // namespace
}  // namespace satforge
