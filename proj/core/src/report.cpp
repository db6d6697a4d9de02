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

#include "satforge/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace satforge {

double normalized_score(double curr, double min, double max) {
  if (max == min) return 1.0;
  return 1.0 - (curr - min) / (2.0 * (max - min));
}

void normalize_rows(std::vector<ReportRow>& rows) {
  std::set<std::string> solvers;
  for (const ReportRow& r : rows) solvers.insert(r.solver);
  if (solvers.size() < 2) {
    for (ReportRow& r : rows) r.normalized.reset();
    return;
  }
  std::map<std::string, std::pair<double, double>> range;
  for (const ReportRow& r : rows) {
    auto [it, fresh] = range.try_emplace(r.dataset, r.par2, r.par2);
    if (!fresh) {
      it->second.first = std::min(it->second.first, r.par2);
      it->second.second = std::max(it->second.second, r.par2);
    }
  }
  for (ReportRow& r : rows) {
    auto [lo, hi] = range.at(r.dataset);
    r.normalized = normalized_score(r.par2, lo, hi);
  }
}

std::vector<ConvergencePoint> convergence(const std::vector<IterationRecord>& history) {
  std::vector<ConvergencePoint> points;
  for (const IterationRecord& r : history) {
    ConvergencePoint p;
    p.iteration = r.iteration;
    if (r.evaluation) p.candidate_par2 = r.evaluation->par2;
    p.best_par2 = r.best_fitness;
    p.accepted = r.accepted;
    p.slots = r.plan;
    points.push_back(p);
  }
  return points;
}

namespace {

std::string number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double to_double(const std::string& s) {
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  int v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Dataset and solver names are quoted when they contain separators.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); i++) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        i++;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> data_lines(const std::string& text, const std::string& expected_header_prefix) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind(expected_header_prefix, 0) != 0) {
    throw std::invalid_argument("unexpected CSV header");
  }
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string convergence_csv(const std::vector<ConvergencePoint>& points) {
  std::string out = "iteration,candidate_par2,best_par2,accepted,slots\n";
  for (const ConvergencePoint& p : points) {
    std::string slots;
    for (std::size_t i = 0; i < p.slots.size(); i++) slots += (i ? ";" : "") + std::string(slot_name(p.slots[i]));
    out += std::to_string(p.iteration) + "," + (p.candidate_par2 ? number(*p.candidate_par2) : "") + "," +
           number(p.best_par2) + "," + (p.accepted ? "1" : "0") + "," + slots + "\n";
  }
  return out;
}

std::vector<ConvergencePoint> parse_convergence_csv(const std::string& text) {
  std::vector<ConvergencePoint> points;
  for (const std::string& line : data_lines(text, "iteration,candidate_par2,best_par2,accepted,slots")) {
    auto f = split(line, ',');
    if (f.size() != 5) throw std::invalid_argument("convergence row needs 5 fields: " + line);
    ConvergencePoint p;
    p.iteration = to_int(f[0]);
    if (!f[1].empty()) p.candidate_par2 = to_double(f[1]);
    p.best_par2 = to_double(f[2]);
    if (f[3] != "0" && f[3] != "1") throw std::invalid_argument("accepted must be 0 or 1: " + line);
    p.accepted = f[3] == "1";
    if (!f[4].empty()) {
      for (const std::string& s : split(f[4], ';')) p.slots.push_back(slot_from_name(s));
    }
    points.push_back(p);
  }
  return points;
}

std::string comparison_csv(const std::vector<ReportRow>& rows) {
  bool with_norm = std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.normalized.has_value(); });
  std::string out = with_norm ? "dataset,solver,par2,solved,normalized\n" : "dataset,solver,par2,solved\n";
  for (const ReportRow& r : rows) {
    out += csv_field(r.dataset) + "," + csv_field(r.solver) + "," + number(r.par2) + "," + std::to_string(r.solved);
    if (with_norm) out += "," + (r.normalized ? number(*r.normalized) : "");
    out += "\n";
  }
  return out;
}

std::vector<ReportRow> parse_comparison_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  bool with_norm = header == "dataset,solver,par2,solved,normalized";
  if (!with_norm && header != "dataset,solver,par2,solved") throw std::invalid_argument("unexpected CSV header");
  std::vector<ReportRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto f = parse_csv_line(line);
    if (f.size() != (with_norm ? 5u : 4u)) throw std::invalid_argument("bad comparison row: " + line);
    ReportRow r{f[0], f[1], to_double(f[2]), to_int(f[3]), std::nullopt};
    if (with_norm && !f[4].empty()) r.normalized = to_double(f[4]);
    rows.push_back(r);
  }
  return rows;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string convergence_svg(const std::vector<ConvergencePoint>& points, const std::string& title) {
  const double w = 640, h = 400, left = 60, right = 20, top = 40, bottom = 50;
  double ymax = 0;
  for (const auto& p : points) {
    ymax = std::max(ymax, p.best_par2);
    if (p.candidate_par2) ymax = std::max(ymax, *p.candidate_par2);
  }
  if (ymax <= 0) ymax = 1;
  int n = std::max<int>(1, static_cast<int>(points.size()) - 1);
  auto x = [&](int i) { return left + (w - left - right) * i / n; };
  auto y = [&](double v) { return h - bottom - (h - top - bottom) * v / ymax; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << xml_escape(title) << "</text>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"12\">iteration</text>\n";
  s << "<text x=\"14\" y=\"" << h / 2 << "\" transform=\"rotate(-90 14 " << h / 2
    << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">PAR-2 (s)</text>\n";
  for (int t = 0; t <= 4; t++) {
    double v = ymax * t / 4;
    s << "<text x=\"" << left - 6 << "\" y=\"" << y(v) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
      << "font-size=\"10\">" << fmt(v) << "</text>\n";
  }
  if (!points.empty()) {
    s << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < points.size(); i++) s << x(static_cast<int>(i)) << "," << y(points[i].best_par2) << " ";
    s << "\"/>\n";
  }
  for (std::size_t i = 0; i < points.size(); i++) {
    if (!points[i].candidate_par2) continue;
    s << "<circle cx=\"" << x(static_cast<int>(i)) << "\" cy=\"" << y(*points[i].candidate_par2)
      << "\" r=\"3\" fill=\"" << (points[i].accepted ? "#2ca02c" : "#d62728") << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string comparison_svg(const std::vector<ReportRow>& rows) {
  const double bar = 22, gap = 6, left = 220, width = 360, top = 20;
  double h = top * 2 + rows.size() * (bar + gap);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + width + 80 << "\" height=\"" << h << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  double ymax = 0;
  for (const ReportRow& r : rows) ymax = std::max(ymax, r.normalized.value_or(r.par2));
  if (ymax <= 0) ymax = 1;
  for (std::size_t i = 0; i < rows.size(); i++) {
    double v = rows[i].normalized.value_or(rows[i].par2);
    double yy = top + i * (bar + gap);
    s << "<text x=\"" << left - 8 << "\" y=\"" << yy + bar * 0.7 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << xml_escape(rows[i].dataset + " / " + rows[i].solver) << "</text>\n";
    s << "<rect x=\"" << left << "\" y=\"" << yy << "\" width=\"" << width * v / ymax << "\" height=\"" << bar
      << "\" fill=\"#1f77b4\"/>\n";
    s << "<text x=\"" << left + width * v / ymax + 4 << "\" y=\"" << yy + bar * 0.7
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << (rows[i].normalized ? number(v) : fmt(v)) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

nlohmann::json to_json(const BenchSummary& s) {
  return {{"solver", s.solver}, {"dataset", s.dataset}, {"par2", s.par2},   {"solved", s.solved},
          {"instances", s.instances}, {"valid", s.valid}, {"timeout", s.timeout}};
}

BenchSummary bench_summary_from_json(const nlohmann::json& j) {
  BenchSummary s;
  s.solver = j.at("solver").get<std::string>();
  s.dataset = j.at("dataset").get<std::string>();
  s.par2 = j.at("par2").get<double>();
  s.solved = j.at("solved").get<int>();
  s.instances = j.value("instances", 0);
  s.valid = j.value("valid", true);
  s.timeout = j.value("timeout", 0.0);
  return s;
}

}  // namespace satforge
