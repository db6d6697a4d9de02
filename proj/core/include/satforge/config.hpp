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

#ifndef SATFORGE_CONFIG_HPP_
#define SATFORGE_CONFIG_HPP_

#include <filesystem>

#include <nlohmann/json.hpp>

#include "satforge/search.hpp"

namespace satforge {

// Builds a CampaignConfig from JSON. Relative paths resolve against
// `base_dir`; entries of "instances" may be files or directories of .cnf
// files. Unknown keys are rejected. Throws CampaignError.
CampaignConfig campaign_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

// Reads the file and resolves paths relative to its directory.
CampaignConfig load_campaign_config(const std::filesystem::path& path);

}  // namespace satforge

#endif  // SATFORGE_CONFIG_HPP_
