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

#include "satforge/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <cstring>

extern char** environ;

namespace satforge {

namespace {

class Pipe {
 public:
  Pipe() {
    if (::pipe2(fds_, O_CLOEXEC) != 0) throw SubprocessError(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  int read_end() const { return fds_[0]; }
  int write_end() const { return fds_[1]; }
  void close_read() {
    if (fds_[0] >= 0) ::close(fds_[0]);
    fds_[0] = -1;
  }
  void close_write() {
    if (fds_[1] >= 0) ::close(fds_[1]);
    fds_[1] = -1;
  }

 private:
  int fds_[2] = {-1, -1};
};

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, std::optional<double> kill_after,
                          std::size_t max_capture) {
  if (argv.empty()) throw SubprocessError("empty command");
  using Clock = std::chrono::steady_clock;

  Pipe out_pipe, err_pipe;
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, out_pipe.write_end(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_pipe.write_end(), STDERR_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  const auto start = Clock::now();
  pid_t pid = -1;
  int rc = ::posix_spawnp(&pid, args[0], &actions, &attr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) throw SubprocessError("cannot start " + argv[0] + ": " + std::strerror(rc));
  out_pipe.close_write();
  err_pipe.close_write();

  ProcessResult result;
  std::array<std::string*, 2> sinks = {&result.out, &result.err};
  std::array<int, 2> fds = {out_pipe.read_end(), err_pipe.read_end()};
  const auto deadline =
      kill_after ? start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*kill_after))
                 : Clock::time_point::max();
  int status = 0;
  bool reaped = false;
  char buf[1 << 15];

  // Read until both pipes close and the child is reaped. Grandchildren that
  // keep the pipes open are killed with the group at the deadline.
  while (fds[0] >= 0 || fds[1] >= 0 || !reaped) {
    if (!reaped) {
      pid_t w = ::waitpid(pid, &status, WNOHANG);
      if (w == pid) reaped = true;
    }
    auto now = Clock::now();
    if (!result.timed_out && now >= deadline) {
      ::kill(-pid, SIGKILL);
      result.timed_out = true;
    }
    std::array<pollfd, 2> pfds{};
    int n = 0;
    std::array<int, 2> which{};
    for (int i = 0; i < 2; i++) {
      if (fds[i] >= 0) {
        pfds[n] = {fds[i], POLLIN, 0};
        which[n++] = i;
      }
    }
    int wait_ms = 20;
    if (deadline != Clock::time_point::max() && !result.timed_out) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
      if (left < wait_ms) wait_ms = static_cast<int>(left);
    }
    if (n == 0) {
      if (!reaped) ::poll(nullptr, 0, wait_ms);
      continue;
    }
    int ready = ::poll(pfds.data(), n, reaped && result.timed_out ? 0 : wait_ms);
    if (ready < 0 && errno != EINTR) break;
    bool progressed = false;
    for (int k = 0; k < n; k++) {
      if (!(pfds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      int i = which[k];
      ssize_t got = ::read(fds[i], buf, sizeof buf);
      if (got > 0) {
        progressed = true;
        std::size_t room = max_capture > sinks[i]->size() ? max_capture - sinks[i]->size() : 0;
        sinks[i]->append(buf, std::min<std::size_t>(room, static_cast<std::size_t>(got)));
      } else if (got == 0 || (errno != EINTR && errno != EAGAIN)) {
        fds[i] = -1;
      }
    }
    if (reaped && result.timed_out && !progressed) break;
  }
  if (!reaped) {
    ::waitpid(pid, &status, 0);
  }
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.term_signal = WTERMSIG(status);
  }
  // Leftover group members (e.g. a compiler's subprocesses) must not outlive us.
  ::kill(-pid, SIGKILL);
  return result;
}

}  // namespace satforge
