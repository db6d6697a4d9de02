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

#ifndef SATFORGE_SUBPROCESS_HPP_
#define SATFORGE_SUBPROCESS_HPP_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace satforge {

class SubprocessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProcessResult {
  int exit_code = -1;     // valid when term_signal == 0
  int term_signal = 0;    // signal that ended the child, 0 if it exited
  bool timed_out = false; // killed by us after the deadline
  double wall_seconds = 0.0;
  std::string out;
  std::string err;

  bool exited() const { return term_signal == 0; }
};

// Runs argv[0] (looked up in PATH) in its own process group, capturing stdout
// and stderr. After `kill_after` seconds the whole group receives SIGKILL.
// Throws SubprocessError if the program cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, std::optional<double> kill_after = std::nullopt,
                          std::size_t max_capture = 64u << 20);

}  // namespace satforge

#endif  // SATFORGE_SUBPROCESS_HPP_
