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

// Benchmark families with known or checkable status.

#ifndef SATFORGE_GENERATORS_HPP_
#define SATFORGE_GENERATORS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "satforge/cnf.hpp"

namespace satforge {

// m clauses of k distinct variables out of n with random polarities.
// Throws std::invalid_argument unless n >= k >= 1 and m >= 1.
CnfFormula gen_random_ksat(int n, int m, int k, std::uint64_t seed);

// holes + 1 pigeons into `holes` holes; variable (p, h) is (p - 1) * holes + h.
// Throws std::invalid_argument for holes < 1.
CnfFormula gen_pigeonhole(int holes);

// Langford pairing of 1..k on 2k positions. Variable x(i, s) says that the
// first copy of i sits at position s and the second at s + i + 1.
// Throws std::invalid_argument for k < 1.
CnfFormula gen_langford(int k);

// Pairings exist exactly for k = 0 or 3 (mod 4).
bool langford_solvable(int k);

enum class Family { kRandomKsat, kPigeonhole, kLangford };
std::string_view family_name(Family f);
Family parse_family(std::string_view name);

struct GeneratorSpec {
  Family family = Family::kRandomKsat;
  std::map<std::string, int> params;  // n, m, k | holes | k
  std::optional<std::uint64_t> seed;  // random_ksat only

  // Throws std::invalid_argument for missing or out-of-range parameters.
  void validate() const;
  CnfFormula generate() const;
  // "sat", "unsat" or "unknown".
  std::string expected_status() const;
  std::string file_name() const;
  nlohmann::json to_json() const;
};

// Writes each spec's formula under `dir` plus manifest.json listing family,
// parameters, seed and expected status. Entries already in an existing
// manifest are kept unless the same file is rewritten. Returns the written
// files.
std::vector<std::filesystem::path> write_instances(const std::vector<GeneratorSpec>& specs,
                                                   const std::filesystem::path& dir);

}  // namespace satforge

#endif  // SATFORGE_GENERATORS_HPP_
