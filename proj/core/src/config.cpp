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

#include "satforge/config.hpp"

#include <fstream>
#include <set>

namespace satforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw CampaignError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw CampaignError("unknown key '" + key + "' in " + where);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

}  // namespace

CampaignConfig campaign_config_from_json(const json& j, const fs::path& base_dir) {
  reject_unknown(j, {"strategy", "budget", "timeout", "instances", "seed", "parallelism", "clamp_parallelism",
                     "proposer", "toolchain", "workspace", "output_dir"},
                 "campaign config");
  CampaignConfig c;
  try {
    if (j.contains("strategy")) c.strategy = parse_strategy(j["strategy"].get<std::string>());
    c.budget = j.value("budget", c.budget);
    c.timeout = j.value("timeout", c.timeout);
    c.seed = j.value("seed", c.seed);
    c.parallelism = j.value("parallelism", c.parallelism);
    c.clamp_parallelism = j.value("clamp_parallelism", c.clamp_parallelism);
    if (j.contains("workspace")) c.workspace = resolve(base_dir, j["workspace"].get<std::string>());
    else c.workspace = base_dir / c.workspace;
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    else c.output_dir = base_dir / c.output_dir;

    for (const auto& entry : j.at("instances")) {
      fs::path p = resolve(base_dir, entry.get<std::string>());
      if (fs::is_directory(p)) {
        for (const fs::path& f : list_instances(p)) c.instance_set.push_back(f);
      } else if (fs::is_regular_file(p)) {
        c.instance_set.push_back(p);
      } else {
        throw CampaignError("instance path not found: " + p.string());
      }
    }

    if (j.contains("toolchain")) {
      const json& t = j["toolchain"];
      reject_unknown(t, {"command", "timeout"}, "toolchain");
      if (t.contains("command")) c.toolchain.command = t["command"].get<std::vector<std::string>>();
      c.toolchain.timeout = t.value("timeout", c.toolchain.timeout);
    }

    if (j.contains("proposer")) {
      const json& p = j["proposer"];
      reject_unknown(p, {"kind", "catalog_dir", "llm"}, "proposer");
      std::string kind = p.value("kind", "mock");
      if (kind == "mock") c.proposer.kind = ProposerSettings::Kind::kMock;
      else if (kind == "llm") c.proposer.kind = ProposerSettings::Kind::kLlm;
      else throw CampaignError("proposer kind must be mock or llm, got '" + kind + "'");
      if (p.contains("catalog_dir")) c.proposer.catalog_dir = resolve(base_dir, p["catalog_dir"].get<std::string>());
      if (p.contains("llm")) {
        const json& l = p["llm"];
        reject_unknown(l, {"endpoint", "model", "temperature", "max_retries", "request_timeout", "api_key_env",
                           "audit_log"},
                       "proposer.llm");
        LlmSettings& s = c.proposer.llm;
        s.endpoint = l.value("endpoint", s.endpoint);
        s.model = l.value("model", s.model);
        s.temperature = l.value("temperature", s.temperature);
        s.max_retries = l.value("max_retries", s.max_retries);
        s.request_timeout = l.value("request_timeout", s.request_timeout);
        s.api_key_env = l.value("api_key_env", s.api_key_env);
        if (l.contains("audit_log")) s.audit_log = resolve(base_dir, l["audit_log"].get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw CampaignError(std::string("invalid campaign config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CampaignError(std::string("invalid campaign config: ") + e.what());
  }
  c.validate();
  return c;
}

CampaignConfig load_campaign_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw CampaignError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw CampaignError(path.string() + ": " + e.what());
  }
  return campaign_config_from_json(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

}  // namespace satforge
