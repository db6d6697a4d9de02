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

#include "satforge/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace satforge {

Clause::Clause(std::vector<Literal> literals) {
  literals_.reserve(literals.size());
  std::unordered_set<int> present;
  for (Literal lit : literals) {
    if (present.count(-lit.value())) {
      throw std::invalid_argument("tautological clause on variable " + std::to_string(lit.var()));
    }
    if (present.insert(lit.value()).second) literals_.push_back(lit);
  }
}

Clause::Clause(std::initializer_list<int> literals) {
  std::vector<Literal> lits;
  lits.reserve(literals.size());
  for (int v : literals) lits.emplace_back(v);
  *this = Clause(std::move(lits));
}

Value Assignment::value_of(Literal lit) const {
  Value v = (*this)[lit.var()];
  if (v == Value::kUnassigned || lit.positive()) return v;
  return v == Value::kTrue ? Value::kFalse : Value::kTrue;
}

bool Assignment::complete() const {
  return std::none_of(values_.begin() + (values_.empty() ? 0 : 1), values_.end(),
                      [](Value v) { return v == Value::kUnassigned; });
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) i++;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) i++;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool parse_int(std::string_view token, long long& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') first++;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text, std::vector<std::string>* warnings) {
  CnfFormula formula;
  bool have_header = false;
  long long declared_clauses = 0;
  std::vector<Literal> pending;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  auto finish_clause = [&](std::size_t at_line) {
    try {
      formula.clauses.emplace_back(std::move(pending));
    } catch (const std::invalid_argument& e) {
      throw DimacsError(at_line, e.what());
    }
    pending.clear();
  };

  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    line_no++;

    std::vector<std::string_view> tokens = split_tokens(line);
    if (tokens.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (tokens[0][0] == 'c') continue;
    // SATLIB-style trailer ("%" then "0"): end of data.
    if (tokens[0] == "%") break;
    if (tokens[0] == "p") {
      if (have_header) throw DimacsError(line_no, "duplicate problem line");
      long long vars = 0;
      if (tokens.size() != 4 || tokens[1] != "cnf" || !parse_int(tokens[2], vars) ||
          !parse_int(tokens[3], declared_clauses) || vars < 0 || declared_clauses < 0 ||
          vars > 0x3fffffff) {
        throw DimacsError(line_no, "malformed problem line, expected 'p cnf <vars> <clauses>'");
      }
      formula.num_vars = static_cast<int>(vars);
      have_header = true;
      continue;
    }
    if (!have_header) throw DimacsError(line_no, "clause data before 'p cnf' header");
    for (std::string_view token : tokens) {
      long long lit = 0;
      if (!parse_int(token, lit)) {
        throw DimacsError(line_no, "non-integer token '" + std::string(token) + "'");
      }
      if (lit == 0) {
        finish_clause(line_no);
        continue;
      }
      if (std::llabs(lit) > formula.num_vars) {
        throw DimacsError(line_no, "literal " + std::to_string(lit) + " outside declared range 1.." +
                                       std::to_string(formula.num_vars));
      }
      pending.emplace_back(static_cast<int>(lit));
    }
    if (nl == text.size()) break;
  }

  if (!have_header) throw DimacsError(line_no, "missing 'p cnf' header");
  if (!pending.empty()) {
    if (warnings) warnings->push_back("last clause is not terminated by 0");
    finish_clause(line_no);
  }
  if (static_cast<long long>(formula.clauses.size()) != declared_clauses && warnings) {
    warnings->push_back("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                        std::to_string(formula.clauses.size()));
  }
  return formula;
}

CnfFormula read_dimacs_file(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dimacs(buffer.str(), warnings);
}

std::string serialize_dimacs(const CnfFormula& formula) {
  std::string out = "p cnf " + std::to_string(formula.num_vars) + " " +
                    std::to_string(formula.clauses.size()) + "\n";
  for (const Clause& clause : formula.clauses) {
    for (Literal lit : clause.literals()) {
      out += std::to_string(lit.value());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

void write_dimacs_file(const std::filesystem::path& path, const CnfFormula& formula) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_dimacs(formula);
}

bool satisfies(const CnfFormula& formula, const Assignment& assignment) {
  if (assignment.num_vars() < formula.num_vars) {
    throw std::invalid_argument("assignment covers fewer variables than the formula");
  }
  for (int v = 1; v <= formula.num_vars; v++) {
    if (assignment[v] == Value::kUnassigned) {
      throw std::invalid_argument("incomplete assignment: variable " + std::to_string(v) +
                                  " unassigned");
    }
  }
  for (const Clause& clause : formula.clauses) {
    bool sat = std::any_of(clause.literals().begin(), clause.literals().end(),
                           [&](Literal l) { return assignment.value_of(l) == Value::kTrue; });
    if (!sat) return false;
  }
  return true;
}

}  // namespace satforge
