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


#include <benchmark/benchmark.h>

#include "satforge/cnf.hpp"
#include "satforge/generators.hpp"
#include "satforge/heuristics.hpp"
#include "satforge/materializer.hpp"
#include "satforge/solver.hpp"
#include "satforge/solver_template.hpp"

namespace {

using namespace satforge;

// Random 3-SAT at the 4.26 ratio; range is the variable count.
void solve_random_3sat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CnfFormula f = gen_random_ksat(n, static_cast<int>(n * 4.26), 3, 7);
  HeuristicHooks hooks = baseline_hooks();
  std::int64_t conflicts = 0;
  for (auto _ : state) {
    SolveResult r = solve(f, hooks, SolveLimits{});
    conflicts += r.stats.conflicts;
    benchmark::DoNotOptimize(r.outcome);
  }
  state.counters["conflicts/s"] = benchmark::Counter(static_cast<double>(conflicts), benchmark::Counter::kIsRate);
}

void solve_pigeonhole(benchmark::State& state) {
  CnfFormula f = gen_pigeonhole(static_cast<int>(state.range(0)));
  HeuristicHooks hooks = baseline_hooks();
  for (auto _ : state) benchmark::DoNotOptimize(solve(f, hooks, SolveLimits{}).outcome);
}

void parse_dimacs_text(benchmark::State& state) {
  std::string text = serialize_dimacs(gen_random_ksat(static_cast<int>(state.range(0)),
                                                      static_cast<int>(state.range(0) * 4.26), 3, 1));
  for (auto _ : state) benchmark::DoNotOptimize(parse_dimacs(text).clauses.size());
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}

void splice_full_configuration(benchmark::State& state) {
  const SolverTemplate& tmpl = SolverTemplate::builtin();
  HeuristicConfiguration config = baseline_configuration();
  for (auto _ : state) benchmark::DoNotOptimize(splice_configuration(tmpl, config).source().size());
}

void fingerprint_source(benchmark::State& state) {
  const std::string& source = SolverTemplate::builtin().source();
  for (auto _ : state) benchmark::DoNotOptimize(fingerprint(source));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * source.size()));
}

}  // namespace

BENCHMARK(solve_random_3sat)->Arg(50)->Arg(100)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(solve_pigeonhole)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(parse_dimacs_text)->Arg(1000)->Arg(10000);
BENCHMARK(splice_full_configuration);
BENCHMARK(fingerprint_source);

BENCHMARK_MAIN();
