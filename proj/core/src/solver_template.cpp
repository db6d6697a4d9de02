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

#include <algorithm>
#include <vector>

#include "resources.hpp"

namespace satforge {

std::string start_marker(Slot s) { return "// start " + std::string(slot_name(s)); }
std::string end_marker(Slot s) { return "// end " + std::string(slot_name(s)); }

namespace {

std::string_view trim(std::string_view s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

struct Line {
  std::size_t begin;  // first byte
  std::size_t next;   // first byte of the following line
  std::string_view text;
};

std::vector<Line> split_lines(const std::string& source) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < source.size()) {
    std::size_t nl = source.find('\n', pos);
    std::size_t stop = nl == std::string::npos ? source.size() : nl;
    std::size_t next = nl == std::string::npos ? source.size() : nl + 1;
    std::string_view text(source.data() + pos, stop - pos);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    lines.push_back({pos, next, text});
    pos = next;
  }
  return lines;
}

}  // namespace

bool is_marker_line(std::string_view line) {
  std::string_view t = trim(line);
  for (Slot s : kAllSlots) {
    if (t == start_marker(s) || t == end_marker(s)) return true;
  }
  return false;
}

SolverTemplate::SolverTemplate(std::string source) : source_(std::move(source)) {
  std::array<std::vector<std::size_t>, kNumSlots> starts, ends;  // line indices
  std::vector<Line> lines = split_lines(source_);
  for (std::size_t i = 0; i < lines.size(); i++) {
    for (Slot s : kAllSlots) {
      if (lines[i].text == start_marker(s)) starts[slot_index(s)].push_back(i);
      if (lines[i].text == end_marker(s)) ends[slot_index(s)].push_back(i);
    }
  }
  struct Span {
    std::size_t first, last;
    Slot slot;
  };
  std::vector<Span> spans;
  for (Slot s : kAllSlots) {
    const auto& st = starts[slot_index(s)];
    const auto& en = ends[slot_index(s)];
    std::string name(slot_name(s));
    if (st.empty()) throw TemplateError("missing marker '// start " + name + "' for slot " + name);
    if (en.empty()) throw TemplateError("missing marker '// end " + name + "' for slot " + name);
    if (st.size() > 1) throw TemplateError("duplicated marker '// start " + name + "' for slot " + name);
    if (en.size() > 1) throw TemplateError("duplicated marker '// end " + name + "' for slot " + name);
    if (en[0] <= st[0]) throw TemplateError("end marker precedes start marker for slot " + name);
    regions_[slot_index(s)] = {lines[st[0]].next, lines[en[0]].begin};
    spans.push_back({st[0], en[0], s});
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < spans.size(); i++) {
    if (spans[i].first < spans[i - 1].last) {
      throw TemplateError("regions of slots " + std::string(slot_name(spans[i - 1].slot)) + " and " +
                          std::string(slot_name(spans[i].slot)) + " overlap");
    }
  }
}

const SolverTemplate& SolverTemplate::builtin() {
  static const SolverTemplate tmpl{std::string(resources::solver_template())};
  return tmpl;
}

std::string canonical_body(std::string_view body) {
  std::string out(body);
  if (out.empty() || out.back() != '\n') out.push_back('\n');
  return out;
}

namespace {

std::string validated_body(Slot slot, std::string_view body) {
  std::string name(slot_name(slot));
  if (trim(body).empty()) throw TemplateError("empty body for slot " + name);
  std::string text = canonical_body(body);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (is_marker_line(std::string_view(text).substr(pos, nl - pos))) {
      throw TemplateError("body for slot " + name + " contains a marker line");
    }
    pos = nl + 1;
  }
  return text;
}

}  // namespace

std::string extract_region(const SolverTemplate& tmpl, Slot slot) {
  SolverTemplate::Region r = tmpl.region(slot);
  return tmpl.source().substr(r.begin, r.end - r.begin);
}

SolverTemplate splice_region(const SolverTemplate& tmpl, Slot slot, std::string_view body) {
  std::string text = validated_body(slot, body);
  SolverTemplate::Region r = tmpl.region(slot);
  std::string source = tmpl.source();
  source.replace(r.begin, r.end - r.begin, text);
  return SolverTemplate(std::move(source));
}

SolverTemplate splice_configuration(const SolverTemplate& tmpl, const HeuristicConfiguration& config) {
  // Splice from the last region backwards so earlier offsets stay valid,
  // then validate once.
  std::array<Slot, kNumSlots> order = kAllSlots;
  std::sort(order.begin(), order.end(),
            [&](Slot a, Slot b) { return tmpl.region(a).begin > tmpl.region(b).begin; });
  std::string source = tmpl.source();
  for (Slot s : order) {
    std::string text = validated_body(s, config.body(s));
    SolverTemplate::Region r = tmpl.region(s);
    source.replace(r.begin, r.end - r.begin, text);
  }
  return SolverTemplate(std::move(source));
}

}  // namespace satforge
