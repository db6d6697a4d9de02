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

#include "satforge/generators.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include "satforge/random.hpp"

namespace satforge {

CnfFormula gen_random_ksat(int n, int m, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("clause width k must be >= 1");
  if (k > n) throw std::invalid_argument("clause width k exceeds the variable count n");
  if (m < 1) throw std::invalid_argument("clause count m must be >= 1");
  Rng rng(seed);
  CnfFormula f;
  f.num_vars = n;
  f.clauses.reserve(static_cast<std::size_t>(m));
  std::vector<int> vars(static_cast<std::size_t>(n));
  for (int i = 0; i < n; i++) vars[static_cast<std::size_t>(i)] = i + 1;
  for (int c = 0; c < m; c++) {
    // Partial Fisher-Yates over a persistent permutation.
    std::vector<Literal> lits;
    for (int i = 0; i < k; i++) {
      auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
      std::swap(vars[static_cast<std::size_t>(i)], vars[j]);
      int v = vars[static_cast<std::size_t>(i)];
      lits.emplace_back(rng.uniform_below(2) ? v : -v);
    }
    f.clauses.emplace_back(std::move(lits));
  }
  return f;
}

CnfFormula gen_pigeonhole(int holes) {
  if (holes < 1) throw std::invalid_argument("holes must be >= 1");
  const int pigeons = holes + 1;
  auto x = [holes](int p, int h) { return (p - 1) * holes + h; };
  CnfFormula f;
  f.num_vars = pigeons * holes;
  for (int p = 1; p <= pigeons; p++) {
    std::vector<Literal> alo;
    for (int h = 1; h <= holes; h++) alo.emplace_back(x(p, h));
    f.clauses.emplace_back(std::move(alo));
  }
  for (int h = 1; h <= holes; h++) {
    for (int p = 1; p <= pigeons; p++) {
      for (int q = p + 1; q <= pigeons; q++) f.clauses.push_back(Clause{-x(p, h), -x(q, h)});
    }
  }
  return f;
}

namespace {

void at_most_one(CnfFormula& f, const std::vector<int>& vars) {
  for (std::size_t a = 0; a < vars.size(); a++) {
    for (std::size_t b = a + 1; b < vars.size(); b++) f.clauses.push_back(Clause{-vars[a], -vars[b]});
  }
}

}  // namespace

CnfFormula gen_langford(int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const int len = 2 * k;
  CnfFormula f;
  std::vector<std::vector<int>> placements(static_cast<std::size_t>(k) + 1);  // number -> vars
  std::vector<std::vector<int>> occupants(static_cast<std::size_t>(len) + 1);  // position -> vars
  for (int i = 1; i <= k; i++) {
    for (int s = 1; s + i + 1 <= len; s++) {
      int v = ++f.num_vars;
      placements[static_cast<std::size_t>(i)].push_back(v);
      occupants[static_cast<std::size_t>(s)].push_back(v);
      occupants[static_cast<std::size_t>(s + i + 1)].push_back(v);
    }
  }
  for (int i = 1; i <= k; i++) {
    const auto& p = placements[static_cast<std::size_t>(i)];
    std::vector<Literal> alo;
    for (int v : p) alo.emplace_back(v);
    f.clauses.emplace_back(std::move(alo));  // empty when i cannot be placed
    at_most_one(f, p);
  }
  for (int pos = 1; pos <= len; pos++) at_most_one(f, occupants[static_cast<std::size_t>(pos)]);
  return f;
}

bool langford_solvable(int k) { return k % 4 == 0 || k % 4 == 3; }

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kRandomKsat:
      return "random_ksat";
    case Family::kPigeonhole:
      return "pigeonhole";
    case Family::kLangford:
      return "langford";
  }
  return "random_ksat";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::kRandomKsat, Family::kPigeonhole, Family::kLangford}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

namespace {

int param(const GeneratorSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw std::invalid_argument(std::string(family_name(spec.family)) + " needs parameter " + key);
  }
  return it->second;
}

}  // namespace

void GeneratorSpec::validate() const {
  switch (family) {
    case Family::kRandomKsat: {
      int n = param(*this, "n"), m = param(*this, "m"), k = param(*this, "k");
      if (k < 1 || k > n || m < 1) throw std::invalid_argument("random_ksat needs n >= k >= 1 and m >= 1");
      if (!seed) throw std::invalid_argument("random_ksat needs a seed");
      break;
    }
    case Family::kPigeonhole:
      if (param(*this, "holes") < 1) throw std::invalid_argument("pigeonhole needs holes >= 1");
      if (seed) throw std::invalid_argument("pigeonhole takes no seed");
      break;
    case Family::kLangford:
      if (param(*this, "k") < 1) throw std::invalid_argument("langford needs k >= 1");
      if (seed) throw std::invalid_argument("langford takes no seed");
      break;
  }
}

CnfFormula GeneratorSpec::generate() const {
  validate();
  switch (family) {
    case Family::kRandomKsat:
      return gen_random_ksat(param(*this, "n"), param(*this, "m"), param(*this, "k"), *seed);
    case Family::kPigeonhole:
      return gen_pigeonhole(param(*this, "holes"));
    case Family::kLangford:
      return gen_langford(param(*this, "k"));
  }
  throw std::logic_error("unreachable");
}

std::string GeneratorSpec::expected_status() const {
  switch (family) {
    case Family::kRandomKsat:
      return "unknown";
    case Family::kPigeonhole:
      return "unsat";
    case Family::kLangford:
      return langford_solvable(param(*this, "k")) ? "sat" : "unsat";
  }
  return "unknown";
}

std::string GeneratorSpec::file_name() const {
  std::string name(family_name(family));
  for (const auto& [k, v] : params) name += "_" + k + std::to_string(v);
  if (seed) name += "_s" + std::to_string(*seed);
  return name + ".cnf";
}

nlohmann::json GeneratorSpec::to_json() const {
  nlohmann::json j = {{"family", family_name(family)}, {"params", params}, {"expected", expected_status()}};
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return j;
}

std::vector<std::filesystem::path> write_instances(const std::vector<GeneratorSpec>& specs,
                                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  // Entries from earlier runs into the same directory are kept, keyed by file.
  std::map<std::string, nlohmann::json> entries;
  std::filesystem::path manifest_path = dir / "manifest.json";
  if (std::ifstream in(manifest_path); in) {
    nlohmann::json previous = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (previous.is_array()) {
      for (const auto& e : previous) {
        if (e.is_object() && e.contains("file") && e["file"].is_string()) entries[e["file"].get<std::string>()] = e;
      }
    }
  }
  for (const GeneratorSpec& spec : specs) {
    std::filesystem::path file = dir / spec.file_name();
    write_dimacs_file(file, spec.generate());
    nlohmann::json entry = spec.to_json();
    entry["file"] = file.filename().string();
    entries[entry["file"].get<std::string>()] = entry;
    files.push_back(file);
  }
  nlohmann::json manifest = nlohmann::json::array();
  for (auto& [name, entry] : entries) manifest.push_back(std::move(entry));
  std::ofstream out(manifest_path, std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  return files;
}

}  // namespace satforge
