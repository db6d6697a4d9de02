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

// Sources of replacement slot bodies: an LLM chat endpoint or an offline
// catalog.

#ifndef SATFORGE_PROPOSER_HPP_
#define SATFORGE_PROPOSER_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "satforge/heuristics.hpp"
#include "satforge/random.hpp"

namespace satforge {

struct PromptRequest {
  std::vector<Slot> slots;
  std::string solver_source;
  std::vector<std::string> extra_tips;
};

// Throws std::invalid_argument for an empty or repeated slot set.
std::string build_prompt(const PromptRequest& request);

struct ProposerResponse {
  std::map<Slot, std::string> bodies;
  std::map<Slot, std::string> variants;  // catalog names, when known
  std::string raw;
  int attempts = 1;
};

struct MalformedResponse {
  std::string reason;
  std::vector<Slot> slots;  // slots at fault
  bool identical = false;   // a body repeats the current one
  std::string raw;
  int attempts = 1;
};

using Proposal = std::variant<ProposerResponse, MalformedResponse>;

// Extracts the body of every requested slot from between its marker lines.
// Fences, quotes and prose around the markers are ignored. When `current` is
// given, a body equal to the current one makes the response malformed.
Proposal parse_response(std::string_view raw, const std::vector<Slot>& slots,
                        const HeuristicConfiguration* current = nullptr);

class Proposer {
 public:
  virtual ~Proposer() = default;
  // `current` holds the bodies of the incumbent solver.
  virtual Proposal propose(const PromptRequest& request, const HeuristicConfiguration& current) = 0;
  virtual std::string name() const = 0;
  // Advances internal state as if `request` had been answered, without
  // producing anything. Used when resuming a campaign log.
  virtual void skip(const PromptRequest& request) { (void)request; }
};

// Catalog round robin: each slot starts at a seeded offset and then visits its
// variants in order.
class MockProposer final : public Proposer {
 public:
  // Throws std::invalid_argument if some slot has no variants.
  MockProposer(Catalog catalog, std::uint64_t seed);

  Proposal propose(const PromptRequest& request, const HeuristicConfiguration& current) override;
  std::string name() const override { return "mock"; }
  void skip(const PromptRequest& request) override;

  // Index of the variant the next request for `s` will return.
  std::size_t cursor(Slot s) const { return cursor_[slot_index(s)]; }
  const Catalog& catalog() const { return catalog_; }

 private:
  Catalog catalog_;
  std::array<std::size_t, kNumSlots> cursor_{};
};

struct LlmSettings {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o";
  double temperature = 1.0;
  int max_retries = 3;
  double request_timeout = 300.0;  // seconds
  std::string api_key_env = "OPENAI_API_KEY";
  std::filesystem::path audit_log;  // empty disables auditing
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingApiKey : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sends one chat-completion request body and returns the response body.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual nlohmann::json complete(const nlohmann::json& request, const std::string& api_key) = 0;
};

// OpenAI-compatible endpoint over HTTP or HTTPS.
class HttpChatTransport final : public ChatTransport {
 public:
  HttpChatTransport(std::string endpoint, double timeout_seconds, int transport_retries = 2);
  nlohmann::json complete(const nlohmann::json& request, const std::string& api_key) override;

 private:
  std::string endpoint_;
  double timeout_;
  int transport_retries_;
};

class LlmProposer final : public Proposer {
 public:
  // Reads the API key from settings.api_key_env; throws MissingApiKey when
  // unset or empty.
  LlmProposer(LlmSettings settings, std::unique_ptr<ChatTransport> transport);

  // Retries malformed answers up to max_retries times, feeding back the parse
  // error. Throws TransportError when the endpoint fails.
  Proposal propose(const PromptRequest& request, const HeuristicConfiguration& current) override;
  std::string name() const override { return "llm"; }

 private:
  void audit(const nlohmann::json& request, const nlohmann::json* response, const std::string& error);

  LlmSettings settings_;
  std::unique_ptr<ChatTransport> transport_;
  std::string api_key_;
};

// Text of the first choice of a chat-completion response.
std::string chat_message_content(const nlohmann::json& response);

}  // namespace satforge

#endif  // SATFORGE_PROPOSER_HPP_
