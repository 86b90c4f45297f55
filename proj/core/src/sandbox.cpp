#include "tampforge/sandbox.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sched.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace tampforge {

namespace fs = std::filesystem;

void to_json(json& j, const SandboxResult& r) {
  j = json{{"stdout", r.stdout_bytes},
           {"stderr", r.stderr_bytes},
           {"exit_status", r.exit_status},
           {"killed", r.killed},
           {"term_signal", r.term_signal},
           {"elapsed_seconds", r.elapsed_seconds},
           {"timed_out", r.timed_out},
           {"stdout_truncated", r.stdout_truncated}};
}

void from_json(const json& j, SandboxResult& r) {
  r.stdout_bytes = j.value("stdout", "");
  r.stderr_bytes = j.value("stderr", "");
  r.exit_status = j.value("exit_status", 0);
  r.killed = j.value("killed", false);
  r.term_signal = j.value("term_signal", 0);
  r.elapsed_seconds = j.value("elapsed_seconds", 0.0);
  r.timed_out = j.value("timed_out", false);
  r.stdout_truncated = j.value("stdout_truncated", false);
}

void Sandbox::Gate::acquire() {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [&] { return slots_ > 0; });
  --slots_;
}

void Sandbox::Gate::release() {
  {
    std::lock_guard lock(mutex_);
    ++slots_;
  }
  cv_.notify_one();
}

namespace {

struct GateSlot {
  explicit GateSlot(Sandbox::Gate& gate) : gate_(gate) { gate_.acquire(); }
  ~GateSlot() { gate_.release(); }
  Sandbox::Gate& gate_;
};

// Kills the whole child process group on scope exit so children never
// outlive the harness.
struct ChildGuard {
  pid_t pid = -1;
  bool reaped = false;

  ~ChildGuard() {
    if (pid > 0 && !reaped) {
      ::killpg(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
    }
  }
};

struct ScratchDir {
  fs::path path;

  ~ScratchDir() {
    if (!path.empty()) {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

[[noreturn]] void run_child(const std::vector<std::string>& cmd, const fs::path& scratch,
                            const fs::path& source, size_t max_memory, int out_fd,
                            int err_fd, int status_fd) {
  ::setpgid(0, 0);
#ifdef __linux__
  // Best effort: drop network access when the kernel allows it.
  ::unshare(CLONE_NEWNET);
#endif
  if (max_memory > 0) {
    rlimit limit{max_memory, max_memory};
    ::setrlimit(RLIMIT_AS, &limit);
  }
  if (::chdir(scratch.c_str()) != 0) _exit(126);
  ::dup2(out_fd, STDOUT_FILENO);
  ::dup2(err_fd, STDERR_FILENO);
  const int devnull = ::open("/dev/null", O_RDONLY);
  if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);

  std::vector<char*> argv;
  for (const auto& part : cmd) argv.push_back(const_cast<char*>(part.c_str()));
  std::string source_str = source.string();
  argv.push_back(source_str.data());
  argv.push_back(nullptr);

  // Scrubbed environment: no credentials, no proxies, deterministic python.
  const std::string home = "HOME=" + scratch.string();
  const std::string tmp = "TMPDIR=" + scratch.string();
  std::vector<char*> envp;
  const char* fixed[] = {"PATH=/usr/local/bin:/usr/bin:/bin",
                         "LC_ALL=C",
                         "PYTHONHASHSEED=0",
                         "PYTHONDONTWRITEBYTECODE=1",
                         "PYTHONIOENCODING=utf-8"};
  for (const char* e : fixed) envp.push_back(const_cast<char*>(e));
  envp.push_back(const_cast<char*>(home.c_str()));
  envp.push_back(const_cast<char*>(tmp.c_str()));
  envp.push_back(nullptr);

  ::execvpe(argv[0], argv.data(), envp.data());
  const int code = errno;
  ssize_t ignored = ::write(status_fd, &code, sizeof(code));
  (void)ignored;
  _exit(127);
}

}  // namespace

Sandbox::Config Sandbox::config_from_env() {
  Config config;
  if (const char* cmd = std::getenv("TAMPFORGE_GUEST_CMD"); cmd && *cmd) {
    config.interpreter_cmd.clear();
    std::istringstream stream(cmd);
    std::string part;
    while (stream >> part) config.interpreter_cmd.push_back(part);
  }
  return config;
}

Sandbox::Sandbox(Config config)
    : config_(std::move(config)),
      gate_(config_.max_parallel > 0
                ? config_.max_parallel
                : std::max(1u, std::thread::hardware_concurrency())) {
  if (config_.interpreter_cmd.empty()) {
    throw InterpreterNotFoundError("empty interpreter command");
  }
}

SandboxResult Sandbox::execute(std::string_view program, const SandboxLimits& limits) const {
  if (limits.timeout_seconds <= 0.0) {
    throw std::invalid_argument("sandbox timeout must be > 0");
  }
  GateSlot slot(gate_);

  ScratchDir scratch;
  {
    const fs::path root = config_.scratch_root.empty() ? fs::temp_directory_path()
                                                       : fs::path(config_.scratch_root);
    fs::create_directories(root);
    std::string tmpl = (root / "tampforge-guest-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) {
      throw std::runtime_error("mkdtemp failed: " + std::string(std::strerror(errno)));
    }
    scratch.path = tmpl;
  }
  const fs::path source = scratch.path / ("guest" + config_.source_extension);
  {
    std::ofstream out(source, std::ios::binary);
    out.write(program.data(), static_cast<std::streamsize>(program.size()));
  }

  int out_pipe[2], err_pipe[2], status_pipe[2];
  if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0 || ::pipe2(status_pipe, O_CLOEXEC) != 0) {
    throw std::runtime_error("pipe creation failed");
  }

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    ::close(status_pipe[0]);
    run_child(config_.interpreter_cmd, scratch.path, source, limits.max_memory_bytes,
              out_pipe[1], err_pipe[1], status_pipe[1]);
  }

  ChildGuard guard{pid};
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  ::close(status_pipe[1]);

  // EOF here means exec succeeded (the pipe is close-on-exec).
  int exec_errno = 0;
  if (::read(status_pipe[0], &exec_errno, sizeof(exec_errno)) == sizeof(exec_errno)) {
    ::close(status_pipe[0]);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    ::waitpid(pid, nullptr, 0);
    guard.reaped = true;
    throw InterpreterNotFoundError("cannot run '" + config_.interpreter_cmd[0] +
                                   "': " + std::strerror(exec_errno));
  }
  ::close(status_pipe[0]);

  SandboxResult result;
  struct StreamState {
    int fd;
    std::string* sink;
    size_t cap;
    bool open = true;
    bool* truncated;
  };
  bool stderr_truncated = false;
  StreamState streams[2] = {
      {out_pipe[0], &result.stdout_bytes, limits.max_stdout_bytes, true,
       &result.stdout_truncated},
      {err_pipe[0], &result.stderr_bytes, limits.max_stderr_bytes, true, &stderr_truncated},
  };
  for (auto& s : streams) ::fcntl(s.fd, F_SETFL, O_NONBLOCK);

  // Hard ceiling on blocking: timeout plus a short drain grace.
  constexpr double kGraceSeconds = 1.5;
  bool killed_for_timeout = false;
  char buffer[16384];
  while (streams[0].open || streams[1].open) {
    if (!killed_for_timeout && seconds_since(start) >= limits.timeout_seconds) {
      ::killpg(pid, SIGKILL);
      killed_for_timeout = true;
    }
    if (killed_for_timeout &&
        seconds_since(start) >= limits.timeout_seconds + kGraceSeconds) {
      for (auto& s : streams) {
        if (s.open) {
          ::close(s.fd);
          s.open = false;
        }
      }
      break;
    }

    pollfd fds[2];
    nfds_t nfds = 0;
    for (auto& s : streams) {
      if (s.open) fds[nfds++] = {s.fd, POLLIN, 0};
    }
    const double deadline = killed_for_timeout ? limits.timeout_seconds + kGraceSeconds
                                               : limits.timeout_seconds;
    const int wait_ms = std::clamp(
        static_cast<int>((deadline - seconds_since(start)) * 1000.0) + 1, 1, 200);
    if (::poll(fds, nfds, wait_ms) <= 0) continue;

    nfds_t slot_index = 0;
    for (auto& s : streams) {
      if (!s.open) continue;
      const pollfd& entry = fds[slot_index++];
      if (!(entry.revents & (POLLIN | POLLHUP | POLLERR))) continue;
      while (true) {
        const ssize_t n = ::read(s.fd, buffer, sizeof(buffer));
        if (n == 0 || (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR)) {
          ::close(s.fd);
          s.open = false;
          break;
        }
        if (n < 0) break;  // drained for now
        const size_t room = s.cap > s.sink->size() ? s.cap - s.sink->size() : 0;
        if (room < static_cast<size_t>(n)) *s.truncated = true;
        s.sink->append(buffer, std::min<size_t>(n, room));
      }
    }
  }

  // The guest may close its pipes and keep running; wait out the remaining
  // budget without blocking past it.
  int status = 0;
  while (true) {
    const pid_t reaped = ::waitpid(pid, &status, WNOHANG);
    if (reaped == pid || reaped < 0) break;
    if (seconds_since(start) >= limits.timeout_seconds) {
      ::killpg(pid, SIGKILL);
      killed_for_timeout = true;
      ::waitpid(pid, &status, 0);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  guard.reaped = true;
  // Reap any stragglers in the process group.
  ::killpg(pid, SIGKILL);

  result.elapsed_seconds = seconds_since(start);
  result.timed_out = killed_for_timeout;
  if (WIFEXITED(status)) {
    result.exit_status = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.killed = true;
    result.term_signal = WTERMSIG(status);
  }
  return result;
}

}  // namespace tampforge
