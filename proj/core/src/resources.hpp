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

// Files embedded at build time (see cmake/EmbedResources.cmake).

#ifndef SATFORGE_SRC_RESOURCES_HPP_
#define SATFORGE_SRC_RESOURCES_HPP_

#include <string_view>

namespace satforge::resources {

struct CatalogFile {
  std::string_view slot;
  std::string_view variant;
  std::string_view body;
};

// Solver template with the engine header inlined.
std::string_view solver_template();

// Catalog fixtures `<slot>/<variant>.txt`, sorted by path.
const CatalogFile* catalog_files();
std::size_t catalog_file_count();

}  // namespace satforge::resources

#endif  // SATFORGE_SRC_RESOURCES_HPP_
