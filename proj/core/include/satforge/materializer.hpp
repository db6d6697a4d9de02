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

// Splices a heuristic configuration into the solver template, compiles it
// with the host toolchain and caches the result by source fingerprint.

#ifndef SATFORGE_MATERIALIZER_HPP_
#define SATFORGE_MATERIALIZER_HPP_

#include <atomic>
#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "satforge/heuristics.hpp"
#include "satforge/solver_template.hpp"

namespace satforge {

// Raised for workspace I/O problems. A failed compilation is not an error.
class WorkspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Toolchain {
  // argv with "{source}" and "{binary}" placeholders.
  std::vector<std::string> command = {"c++", "-std=c++17", "-O2", "-o", "{binary}", "{source}"};
  double timeout = 120.0;  // seconds
};

// Lowercase hex SHA-256 of `source`.
std::string fingerprint(std::string_view source);

enum class CompileStatus { kPending, kCompiled, kCompileFailed };
std::string_view compile_status_name(CompileStatus s);

struct CandidateSolver {
  HeuristicConfiguration config;
  std::string source;
  std::string fingerprint;
  std::filesystem::path binary;  // empty unless compiled
  CompileStatus status = CompileStatus::kPending;
  std::string compile_log;
  bool cache_hit = false;

  bool compiled() const { return status == CompileStatus::kCompiled; }
};

// Workspace layout: <workspace>/<fingerprint>/{source.cpp, binary, compile.log}.
class Materializer {
 public:
  explicit Materializer(std::filesystem::path workspace, Toolchain toolchain = {},
                        SolverTemplate tmpl = SolverTemplate::builtin());

  // Thread-safe. Concurrent calls for one fingerprint share a single compile.
  CandidateSolver materialize(const HeuristicConfiguration& config);

  const std::filesystem::path& workspace() const { return workspace_; }
  const SolverTemplate& solver_template() const { return template_; }
  int compiler_invocations() const { return compiler_invocations_.load(); }

 private:
  struct Built {
    CompileStatus status;
    std::string log;
    bool invoked_compiler;
  };
  Built build(const std::string& fp, const std::string& source);

  std::filesystem::path workspace_;
  Toolchain toolchain_;
  SolverTemplate template_;
  std::mutex mu_;
  std::map<std::string, std::shared_future<Built>> inflight_;
  std::atomic<int> compiler_invocations_{0};
};

// One-shot form using the default toolchain.
CandidateSolver compile_candidate(const HeuristicConfiguration& config, const SolverTemplate& tmpl,
                                  const std::filesystem::path& workspace);

// Removes candidate directories whose fingerprint is not in `keep`. Returns
// the number of directories removed.
std::size_t gc_workspace(const std::filesystem::path& workspace, const std::set<std::string>& keep);

}  // namespace satforge

#endif  // SATFORGE_MATERIALIZER_HPP_
