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

#include <openssl/evp.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <system_error>

#include "satforge/subprocess.hpp"

namespace satforge {

namespace fs = std::filesystem;

std::string fingerprint(std::string_view source) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(source.data(), source.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char byte[3];
  for (unsigned int i = 0; i < len; i++) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

std::string_view compile_status_name(CompileStatus s) {
  switch (s) {
    case CompileStatus::kPending:
      return "pending";
    case CompileStatus::kCompiled:
      return "compiled";
    case CompileStatus::kCompileFailed:
      return "compile_failed";
  }
  return "pending";
}

namespace {

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw WorkspaceError("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool is_executable(const fs::path& p) {
  std::error_code ec;
  auto st = fs::status(p, ec);
  return !ec && fs::is_regular_file(st) && (st.permissions() & fs::perms::owner_exec) != fs::perms::none;
}

}  // namespace

Materializer::Materializer(fs::path workspace, Toolchain toolchain, SolverTemplate tmpl)
    : workspace_(std::move(workspace)), toolchain_(std::move(toolchain)), template_(std::move(tmpl)) {
  std::error_code ec;
  fs::create_directories(workspace_, ec);
  if (ec || !fs::is_directory(workspace_)) {
    throw WorkspaceError("cannot create workspace " + workspace_.string() + ": " + ec.message());
  }
  if (toolchain_.command.empty()) throw std::invalid_argument("toolchain command is empty");
}

Materializer::Built Materializer::build(const std::string& fp, const std::string& source) {
  fs::path dir = workspace_ / fp;
  fs::path binary = dir / "binary";
  fs::path log_path = dir / "compile.log";
  if (is_executable(binary)) return {CompileStatus::kCompiled, read_file(log_path), false};

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw WorkspaceError("cannot create " + dir.string() + ": " + ec.message());
  fs::path source_path = dir / "source.cpp";
  write_file(source_path, source);

  // Compile to a temporary name so an interrupted build never looks cached.
  fs::path tmp_binary = dir / ("binary.partial." + std::to_string(::getpid()));
  std::vector<std::string> argv;
  for (std::string arg : toolchain_.command) {
    for (auto [key, value] : {std::pair<std::string, std::string>{"{source}", source_path.string()},
                              {"{binary}", tmp_binary.string()}}) {
      for (std::size_t pos; (pos = arg.find(key)) != std::string::npos;) arg.replace(pos, key.size(), value);
    }
    argv.push_back(std::move(arg));
  }
  compiler_invocations_++;
  std::string log;
  bool ok = false;
  try {
    ProcessResult r = run_process(argv, toolchain_.timeout);
    log = r.out + r.err;
    if (r.timed_out) {
      log += "\ncompilation exceeded " + std::to_string(toolchain_.timeout) + " s and was killed\n";
    } else if (!r.exited()) {
      log += "\ncompiler terminated by signal " + std::to_string(r.term_signal) + "\n";
    } else if (r.exit_code != 0) {
      log += "\ncompiler exited with status " + std::to_string(r.exit_code) + "\n";
    } else if (!is_executable(tmp_binary)) {
      log += "\ncompiler produced no executable\n";
    } else {
      ok = true;
    }
  } catch (const SubprocessError& e) {
    log = e.what();
  }
  write_file(log_path, log);
  if (!ok) {
    fs::remove(tmp_binary, ec);
    return {CompileStatus::kCompileFailed, log, true};
  }
  fs::rename(tmp_binary, binary, ec);
  if (ec) throw WorkspaceError("cannot move binary into place: " + ec.message());
  return {CompileStatus::kCompiled, log, true};
}

CandidateSolver Materializer::materialize(const HeuristicConfiguration& config) {
  CandidateSolver c{config, splice_configuration(template_, config).source(), {}, {}, CompileStatus::kPending, {}, false};
  c.fingerprint = fingerprint(c.source);

  std::shared_future<Built> future;
  bool owner = false;
  std::promise<Built> promise;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = inflight_.find(c.fingerprint);
    if (it != inflight_.end()) {
      future = it->second;
      c.cache_hit = true;
    } else {
      future = promise.get_future().share();
      inflight_.emplace(c.fingerprint, future);
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(build(c.fingerprint, c.source));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard<std::mutex> lock(mu_);
      inflight_.erase(c.fingerprint);
    }
  }
  Built built = future.get();
  // A binary found on disk is a cache hit too.
  if (owner) c.cache_hit = !built.invoked_compiler;
  c.status = built.status;
  c.compile_log = built.log;
  if (c.compiled()) c.binary = workspace_ / c.fingerprint / "binary";
  return c;
}

CandidateSolver compile_candidate(const HeuristicConfiguration& config, const SolverTemplate& tmpl,
                                  const fs::path& workspace) {
  Materializer m(workspace, Toolchain{}, tmpl);
  return m.materialize(config);
}

std::size_t gc_workspace(const fs::path& workspace, const std::set<std::string>& keep) {
  if (!fs::is_directory(workspace)) throw WorkspaceError("not a workspace directory: " + workspace.string());
  std::size_t removed = 0;
  for (const auto& entry : fs::directory_iterator(workspace)) {
    std::string name = entry.path().filename().string();
    bool candidate_dir = entry.is_directory() && name.size() == 64 &&
                         name.find_first_not_of("0123456789abcdef") == std::string::npos;
    if (!candidate_dir || keep.count(name)) continue;
    fs::remove_all(entry.path());
    removed++;
  }
  return removed;
}

}  // namespace satforge
