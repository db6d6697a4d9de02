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

#ifndef SATFORGE_CNF_HPP_
#define SATFORGE_CNF_HPP_

#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace satforge {

// A nonzero signed DIMACS literal: |value| is the 1-based variable index and
// the sign is the polarity.
class Literal {
 public:
  explicit Literal(int value) : value_(value) {
    if (value == 0) throw std::invalid_argument("literal must be nonzero");
  }

  int value() const { return value_; }
  int var() const { return std::abs(value_); }
  bool positive() const { return value_ > 0; }
  Literal operator~() const { return Literal(-value_); }

  friend bool operator==(Literal a, Literal b) { return a.value_ == b.value_; }
  friend auto operator<=>(Literal a, Literal b) { return a.value_ <=> b.value_; }

 private:
  int value_;
};

// Disjunction of literals. Construction removes duplicate literals (keeping
// the first occurrence) and rejects tautologies. An empty clause is the
// conflict and is always false.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> literals);
  Clause(std::initializer_list<int> literals);

  const std::vector<Literal>& literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  bool empty() const { return literals_.empty(); }

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  std::vector<Literal> literals_;
};

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

enum class Value : signed char { kUnassigned = 0, kTrue = 1, kFalse = -1 };

// Per-variable truth values, index 1..num_vars.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_vars) : values_(static_cast<std::size_t>(num_vars) + 1, Value::kUnassigned) {}

  int num_vars() const { return values_.empty() ? 0 : static_cast<int>(values_.size()) - 1; }
  Value operator[](int var) const { return values_.at(static_cast<std::size_t>(var)); }
  void set(int var, Value v) { values_.at(static_cast<std::size_t>(var)) = v; }
  void set(Literal lit) { set(lit.var(), lit.positive() ? Value::kTrue : Value::kFalse); }
  Value value_of(Literal lit) const;
  bool complete() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Value> values_;
};

class DimacsError : public std::runtime_error {
 public:
  DimacsError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Parses DIMACS CNF text. Non-fatal issues (clause-count mismatch, missing
// final terminator) are appended to `warnings` when provided.
CnfFormula parse_dimacs(std::string_view text, std::vector<std::string>* warnings = nullptr);
CnfFormula read_dimacs_file(const std::filesystem::path& path,
                            std::vector<std::string>* warnings = nullptr);

std::string serialize_dimacs(const CnfFormula& formula);
void write_dimacs_file(const std::filesystem::path& path, const CnfFormula& formula);

// True iff every clause has a literal true under `assignment`. Throws
// std::invalid_argument if the assignment does not cover every variable.
bool satisfies(const CnfFormula& formula, const Assignment& assignment);

}  // namespace satforge

#endif  // SATFORGE_CNF_HPP_
