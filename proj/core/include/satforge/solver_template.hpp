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

#ifndef SATFORGE_SOLVER_TEMPLATE_HPP_
#define SATFORGE_SOLVER_TEMPLATE_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "satforge/heuristics.hpp"

namespace satforge {

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string start_marker(Slot s);  // "// start <name>"
std::string end_marker(Slot s);    // "// end <name>"

// Solver source in which every slot body sits between the lines
// "// start <slot>" and "// end <slot>". Each pair occurs exactly once, start
// before end, and regions do not overlap.
class SolverTemplate {
 public:
  // Throws TemplateError naming the offending slot.
  explicit SolverTemplate(std::string source);

  // Built-in template: the engine plus the baseline slot bodies.
  static const SolverTemplate& builtin();

  const std::string& source() const { return source_; }

  // Byte range [begin, end) of the region interior: everything after the
  // start marker's newline up to the first byte of the end marker line.
  struct Region {
    std::size_t begin;
    std::size_t end;
  };
  Region region(Slot s) const { return regions_[slot_index(s)]; }

 private:
  std::string source_;
  std::array<Region, kNumSlots> regions_;
};

// Bodies are stored canonically with a trailing newline.
std::string canonical_body(std::string_view body);

std::string extract_region(const SolverTemplate& tmpl, Slot slot);

// Replaces one region interior; every other byte is kept. Throws
// TemplateError if the body is blank or contains marker lines.
SolverTemplate splice_region(const SolverTemplate& tmpl, Slot slot, std::string_view body);

// Splices all nine bodies of a configuration.
SolverTemplate splice_configuration(const SolverTemplate& tmpl, const HeuristicConfiguration& config);

// True when `line` (ignoring surrounding whitespace) is a start or end
// marker of any slot.
bool is_marker_line(std::string_view line);

}  // namespace satforge

#endif  // SATFORGE_SOLVER_TEMPLATE_HPP_
