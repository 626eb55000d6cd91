#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <map>

#include "paracons/endpoint.hpp"
#include "paracons/error.hpp"

extern char** environ;

namespace paracons {

struct ExecEndpoint::Process {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string pending;  // bytes read past the last complete line

  ~Process() {
    if (to_child >= 0) ::close(to_child);
    if (from_child >= 0) ::close(from_child);
    if (pid > 0) {
      ::kill(pid, SIGTERM);
      int status = 0;
      ::waitpid(pid, &status, 0);
    }
  }
};

ExecEndpoint::ExecEndpoint(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  // A scorer that dies mid-write must surface as a TransportError, not SIGPIPE.
  ::signal(SIGPIPE, SIG_IGN);
}

ExecEndpoint::~ExecEndpoint() = default;

void ExecEndpoint::stop() { proc_.reset(); }

void ExecEndpoint::ensure_started() {
  if (proc_) {
    int status = 0;
    if (::waitpid(proc_->pid, &status, WNOHANG) == 0) return;
    proc_->pid = -1;  // already reaped
    proc_.reset();
  }
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw TransportError("pipe: " + std::string(std::strerror(errno)));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError("pipe: " + std::string(std::strerror(errno)));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  const char* argv[] = {"/bin/sh", "-c", command_.c_str(), nullptr};
  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr,
                               const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw TransportError("cannot start scorer '" + command_ + "': " + std::strerror(rc));
  }
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->to_child = in_pipe[1];
  proc_->from_child = out_pipe[0];
}

std::vector<ScoreResponse> ExecEndpoint::score(std::span<const ScoreJob> jobs) {
  std::lock_guard lock(mu_);
  ensure_started();

  const std::string body = encode_batch(jobs);
  std::size_t written = 0;
  while (written < body.size()) {
    const ssize_t n = ::write(proc_->to_child, body.data() + written, body.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string why = std::strerror(errno);
      stop();
      throw TransportError("scorer '" + command_ + "' not accepting input: " + why);
    }
    written += static_cast<std::size_t>(n);
  }

  // Read exactly one line per request.
  std::string lines;
  std::size_t got = 0;
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  char buf[1 << 14];
  while (got < jobs.size()) {
    const auto nl = proc_->pending.find('\n');
    if (nl != std::string::npos) {
      lines.append(proc_->pending, 0, nl + 1);
      proc_->pending.erase(0, nl + 1);
      ++got;
      continue;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      stop();
      throw TransportError("scorer '" + command_ + "' timed out");
    }
    pollfd pfd{proc_->from_child, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr < 0 && errno == EINTR) continue;
    if (pr <= 0) continue;
    const ssize_t n = ::read(proc_->from_child, buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      stop();
      throw TransportError("scorer '" + command_ + "' exited after " + std::to_string(got) +
                           " of " + std::to_string(jobs.size()) + " responses");
    }
    proc_->pending.append(buf, static_cast<std::size_t>(n));
  }
  try {
    return decode_batch(jobs, lines);
  } catch (const ProtocolError&) {
    // Responses may be out of step with requests now; restart on next use.
    stop();
    throw;
  }
}

}  // namespace paracons
