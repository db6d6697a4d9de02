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

#include "satforge/proposer.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <thread>

#include "satforge/solver_template.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace satforge {

namespace {

std::string slot_list(const std::vector<Slot>& slots) {
  std::string out;
  for (std::size_t i = 0; i < slots.size(); i++) {
    if (i > 0) out += i + 1 == slots.size() ? " and " : ", ";
    out += slot_name(slots[i]);
  }
  return out;
}

void check_slots(const std::vector<Slot>& slots) {
  if (slots.empty()) throw std::invalid_argument("prompt request names no slot");
  std::set<Slot> seen(slots.begin(), slots.end());
  if (seen.size() != slots.size()) throw std::invalid_argument("prompt request repeats a slot");
}

std::string_view trim(std::string_view s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

// A marker line may be wrapped in quotes or backticks.
std::string_view unquote(std::string_view line) {
  line = trim(line);
  auto quote = [](char c) { return c == '\'' || c == '"' || c == '`'; };
  while (!line.empty() && quote(line.front())) line.remove_prefix(1);
  while (!line.empty() && quote(line.back())) line.remove_suffix(1);
  return trim(line);
}

bool is_fence(std::string_view line) {
  line = trim(line);
  return line.rfind("```", 0) == 0 || line.rfind("'''", 0) == 0;
}

// Whitespace-insensitive form used to detect resubmitted bodies.
std::string squeeze(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      space = !out.empty();
    } else {
      if (space) out += ' ';
      space = false;
      out += c;
    }
  }
  return out;
}

struct RawLine {
  std::size_t begin, next;
  std::string_view text;
};

std::vector<RawLine> lines_of(std::string_view raw) {
  std::vector<RawLine> lines;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::size_t nl = raw.find('\n', pos);
    std::size_t stop = nl == std::string_view::npos ? raw.size() : nl;
    std::size_t next = nl == std::string_view::npos ? raw.size() : nl + 1;
    lines.push_back({pos, next, raw.substr(pos, stop - pos)});
    pos = next;
  }
  return lines;
}

}  // namespace

std::string build_prompt(const PromptRequest& request) {
  check_slots(request.slots);
  const std::string names = slot_list(request.slots);
  std::string p;
  p += "You are a SAT solver researcher trying to rewrite the " + names + " function(s) of the CDCL solver below.\n\n";
  p += "Goal: make the solver faster on our benchmark instances by rewriting the " + names +
       " function(s). Study the <key code> before answering.\n\n";
  p += "Tips:\n";
  p += "1) Each rewritten function must start with '''// start {function name}''' and end with "
       "'''// end {function name}''', for example '''// start " +
       std::string(slot_name(request.slots.front())) + "''' ... '''// end " +
       std::string(slot_name(request.slots.front())) + "'''.\n";
  p += "2) The new code must behave differently from the original; renaming or reformatting the original "
       "is rejected.\n";
  p += "3) Do not add helper functions or new global variables. Use only the members and helpers that "
       "the solver already has.\n";
  p += "4) The code must compile as C++17 and keep the solver correct.\n";
  int n = 5;
  for (const std::string& tip : request.extra_tips) p += std::to_string(n++) + ") " + tip + "\n";
  p += "\n<key code>\n";
  p += request.solver_source;
  if (p.empty() || p.back() != '\n') p += '\n';
  return p;
}

Proposal parse_response(std::string_view raw, const std::vector<Slot>& slots, const HeuristicConfiguration* current) {
  MalformedResponse bad;
  bad.raw = std::string(raw);
  std::vector<RawLine> lines = lines_of(raw);
  ProposerResponse ok;
  ok.raw = std::string(raw);
  std::vector<std::string> problems;

  for (Slot s : slots) {
    const std::string start = start_marker(s), end = end_marker(s);
    std::vector<std::size_t> starts, ends;
    for (std::size_t i = 0; i < lines.size(); i++) {
      std::string_view t = unquote(lines[i].text);
      if (t == start) starts.push_back(i);
      if (t == end) ends.push_back(i);
    }
    std::string name(slot_name(s));
    std::string problem;
    if (starts.empty()) problem = "missing '" + start + "'";
    else if (ends.empty()) problem = "missing '" + end + "'";
    else if (starts.size() > 1) problem = "duplicated '" + start + "'";
    else if (ends.size() > 1) problem = "duplicated '" + end + "'";
    else if (ends[0] < starts[0]) problem = "'" + end + "' precedes '" + start + "'";
    std::string body;
    if (problem.empty()) {
      for (std::size_t i = starts[0] + 1; i < ends[0]; i++) {
        if (is_fence(lines[i].text)) continue;
        if (is_marker_line(unquote(lines[i].text))) {
          problem = "marker line inside the body";
          break;
        }
        body.append(raw.substr(lines[i].begin, lines[i].next - lines[i].begin));
      }
    }
    if (problem.empty() && trim(body).empty()) problem = "empty body";
    if (problem.empty() && current && squeeze(body) == squeeze(current->body(s))) {
      problem = "body is identical to the current one";
      bad.identical = true;
    }
    if (!problem.empty()) {
      problems.push_back(name + ": " + problem);
      bad.slots.push_back(s);
      continue;
    }
    ok.bodies[s] = canonical_body(body);
  }
  if (problems.empty()) return ok;
  for (std::size_t i = 0; i < problems.size(); i++) bad.reason += (i ? "; " : "") + problems[i];
  return bad;
}

MockProposer::MockProposer(Catalog catalog, std::uint64_t seed) : catalog_(std::move(catalog)) {
  Rng rng(seed);
  for (Slot s : kAllSlots) {
    std::size_t n = catalog_.variants(s).size();
    if (n == 0) throw std::invalid_argument("catalog has no variant for slot " + std::string(slot_name(s)));
    cursor_[slot_index(s)] = static_cast<std::size_t>(rng.uniform_below(n));
  }
}

Proposal MockProposer::propose(const PromptRequest& request, const HeuristicConfiguration&) {
  check_slots(request.slots);
  ProposerResponse r;
  for (Slot s : request.slots) {
    const auto& variants = catalog_.variants(s);
    std::size_t& c = cursor_[slot_index(s)];
    const CatalogVariant& v = variants[c];
    c = (c + 1) % variants.size();
    r.bodies[s] = v.body;
    r.variants[s] = v.name;
    r.raw += start_marker(s) + "\n" + v.body + end_marker(s) + "\n";
  }
  return r;
}

void MockProposer::skip(const PromptRequest& request) {
  check_slots(request.slots);
  for (Slot s : request.slots) {
    std::size_t& c = cursor_[slot_index(s)];
    c = (c + 1) % catalog_.variants(s).size();
  }
}

std::string chat_message_content(const nlohmann::json& response) {
  try {
    return response.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("unexpected chat-completion response: ") + e.what());
  }
}

HttpChatTransport::HttpChatTransport(std::string endpoint, double timeout_seconds, int transport_retries)
    : endpoint_(std::move(endpoint)), timeout_(timeout_seconds), transport_retries_(transport_retries) {
  if (endpoint_.find("://") == std::string::npos) throw std::invalid_argument("endpoint must be a URL: " + endpoint_);
}

nlohmann::json HttpChatTransport::complete(const nlohmann::json& request, const std::string& api_key) {
  std::size_t scheme_end = endpoint_.find("://") + 3;
  std::size_t path_begin = endpoint_.find('/', scheme_end);
  std::string origin = endpoint_.substr(0, path_begin);
  std::string path = path_begin == std::string::npos ? "/" : endpoint_.substr(path_begin);

  httplib::Client client(origin);
  auto secs = static_cast<time_t>(timeout_);
  client.set_connection_timeout(secs < 30 ? secs : 30, 0);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key}};
  std::string body = request.dump();

  std::string last_error;
  for (int attempt = 0; attempt <= transport_retries_; attempt++) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::seconds(1 << std::min(attempt, 5)));
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body);
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw TransportError(std::string("response is not JSON: ") + e.what());
    }
  }
  throw TransportError(endpoint_ + ": " + last_error);
}

LlmProposer::LlmProposer(LlmSettings settings, std::unique_ptr<ChatTransport> transport)
    : settings_(std::move(settings)), transport_(std::move(transport)) {
  if (settings_.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (settings_.temperature < 0) throw std::invalid_argument("temperature must be >= 0");
  const char* key = std::getenv(settings_.api_key_env.c_str());
  if (!key || !*key) throw MissingApiKey("environment variable " + settings_.api_key_env + " is not set");
  api_key_ = key;
}

void LlmProposer::audit(const nlohmann::json& request, const nlohmann::json* response, const std::string& error) {
  if (settings_.audit_log.empty()) return;
  nlohmann::json entry = {{"time", static_cast<std::int64_t>(std::time(nullptr))}, {"request", request}};
  if (response) entry["response"] = *response;
  if (!error.empty()) entry["error"] = error;
  std::ofstream out(settings_.audit_log, std::ios::app);
  out << entry.dump() << '\n';
}

Proposal LlmProposer::propose(const PromptRequest& request, const HeuristicConfiguration& current) {
  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "user"}, {"content", build_prompt(request)}});
  Proposal last = MalformedResponse{"no attempt made", request.slots, false, "", 0};
  for (int attempt = 1; attempt <= settings_.max_retries + 1; attempt++) {
    nlohmann::json body = {{"model", settings_.model}, {"temperature", settings_.temperature}, {"messages", messages}};
    nlohmann::json response;
    try {
      response = transport_->complete(body, api_key_);
    } catch (const std::exception& e) {
      audit(body, nullptr, e.what());
      throw TransportError(e.what());
    }
    audit(body, &response, "");
    std::string content = chat_message_content(response);
    last = parse_response(content, request.slots, &current);
    std::visit([&](auto& r) { r.attempts = attempt; }, last);
    auto* bad = std::get_if<MalformedResponse>(&last);
    if (!bad) break;
    messages.push_back({{"role", "assistant"}, {"content", content}});
    messages.push_back({{"role", "user"},
                        {"content", "Your answer could not be used (" + bad->reason +
                                        "). Reply again with every requested function between its "
                                        "start and end marker lines."}});
  }
  return last;
}

}  // namespace satforge
