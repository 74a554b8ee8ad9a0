// SPDX-License-Identifier: Apache-2.0

#include "indloop/solver.hpp"

#include <fcntl.h>
#include <linux/perf_event.h>
#include <poll.h>
#include <signal.h>
#include <sys/ioctl.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace indloop {

namespace fs = std::filesystem;

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Unsat: return "unsat";
    case Verdict::Sat: return "sat";
    case Verdict::Unknown: return "unknown";
    case Verdict::Timeout: return "timeout";
    case Verdict::Error: return "error";
  }
  return "error";
}

void SolverConfig::validate() const {
  if (command.find("{file}") == std::string::npos)
    throw std::invalid_argument("solver command must contain {file}");
  if (timeout.count() <= 0) throw std::invalid_argument("solver timeout must be positive");
  if (workers == 0) throw std::invalid_argument("worker count must be positive");
}

std::vector<std::string> expand_command(const SolverConfig& cfg, const std::string& file) {
  auto replace_all = [](std::string s, std::string_view key, const std::string& value) {
    for (std::size_t pos = s.find(key); pos != std::string::npos;
         pos = s.find(key, pos + value.size())) {
      s.replace(pos, key.size(), value);
    }
    return s;
  };
  long ms = static_cast<long>(cfg.timeout.count());
  std::vector<std::string> argv;
  std::istringstream in(cfg.command);
  std::string tok;
  while (in >> tok) {
    tok = replace_all(tok, "{file}", file);
    tok = replace_all(tok, "{timeout_ms}", std::to_string(ms));
    tok = replace_all(tok, "{timeout_s}", std::to_string((ms + 999) / 1000));
    argv.push_back(tok);
  }
  return argv;
}

Verdict parse_verdict(const std::string& out) {
  std::istringstream in(out);
  std::string line;
  std::optional<Verdict> v;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string_view s(line.data() + b, e - b + 1);
    if (s.starts_with("(error")) return Verdict::Error;
    if (s == "unsat") v = Verdict::Unsat;
    else if (s == "sat") v = Verdict::Sat;
    else if (s == "unknown") v = Verdict::Unknown;
    else if (s == "timeout") v = Verdict::Timeout;
  }
  return v.value_or(Verdict::Error);
}

namespace {

const fs::path& default_scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("indloop-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::atomic<std::uint64_t> g_file_counter{0};

int open_instruction_counter(pid_t pid) {
  perf_event_attr attr{};
  attr.type = PERF_TYPE_HARDWARE;
  attr.size = sizeof(attr);
  attr.config = PERF_COUNT_HW_INSTRUCTIONS;
  attr.disabled = 1;
  attr.enable_on_exec = 1;
  attr.inherit = 1;
  attr.exclude_kernel = 1;
  attr.exclude_hv = 1;
  return static_cast<int>(syscall(SYS_perf_event_open, &attr, pid, -1, -1, 0));
}

void drain(int fd, std::string& buf) {
  char tmp[4096];
  for (;;) {
    ssize_t n = ::read(fd, tmp, sizeof tmp);
    if (n > 0) {
      buf.append(tmp, static_cast<std::size_t>(n));
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    break;
  }
}

}  // namespace

SolverRun run_solver_file(const std::string& path, const SolverConfig& cfg) {
  SolverRun run;
  std::vector<std::string> args = expand_command(cfg, path);
  if (args.empty()) {
    run.diagnostics = "empty solver command";
    return run;
  }
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  int out_pipe[2], err_pipe[2], go_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) || ::pipe2(err_pipe, O_CLOEXEC) || ::pipe2(go_pipe, O_CLOEXEC)) {
    run.diagnostics = std::string("pipe: ") + std::strerror(errno);
    return run;
  }

  auto start = std::chrono::steady_clock::now();
  pid_t pid = ::fork();
  if (pid < 0) {
    run.diagnostics = std::string("fork: ") + std::strerror(errno);
    return run;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    char c;
    while (::read(go_pipe[0], &c, 1) < 0 && errno == EINTR) {
    }
    ::execvp(argv[0], argv.data());
    const char msg[] = "exec failed\n";
    [[maybe_unused]] auto n = ::write(STDERR_FILENO, msg, sizeof msg - 1);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  ::close(go_pipe[0]);

  int perf_fd = -1;
  if (cfg.metric == SpeedMetric::Instructions) perf_fd = open_instruction_counter(pid);
  char go = 1;
  [[maybe_unused]] auto w = ::write(go_pipe[1], &go, 1);
  ::close(go_pipe[1]);

  auto deadline = start + cfg.timeout + cfg.grace;
  std::string out, err;
  bool killed = false;
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  while (open_fds > 0) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      killed = true;
      break;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    int r = ::poll(fds, 2, wait_ms);
    if (r < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (auto& f : fds) {
      if (f.fd < 0 || !(f.revents & (POLLIN | POLLHUP | POLLERR))) continue;
      char buf[4096];
      ssize_t n = ::read(f.fd, buf, sizeof buf);
      if (n > 0) {
        (&f == &fds[0] ? out : err).append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (n < 0 && errno != EINTR && errno != EAGAIN)) {
        ::close(f.fd);
        f.fd = -1;
        --open_fds;
      }
    }
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  auto end = std::chrono::steady_clock::now();
  for (auto& f : fds) {
    if (f.fd >= 0) {
      if (!killed) drain(f.fd, &f == &fds[0] ? out : err);
      ::close(f.fd);
    }
  }
  run.elapsed_ms = std::chrono::duration<double, std::milli>(end - start).count();
  if (perf_fd >= 0) {
    std::uint64_t count = 0;
    if (::read(perf_fd, &count, sizeof count) == static_cast<ssize_t>(sizeof count))
      run.instructions = count;
    ::close(perf_fd);
  }

  if (killed) {
    run.verdict = Verdict::Timeout;
    run.exit_code = -SIGKILL;
    return run;
  }
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -WTERMSIG(status);
  run.verdict = parse_verdict(out);
  if (run.verdict == Verdict::Error) {
    run.diagnostics = "exit " + std::to_string(run.exit_code) + ": " + out + err;
    if (run.diagnostics.size() > 2000) run.diagnostics.resize(2000);
  }
  return run;
}

SolverRun run_solver(const std::string& script, const SolverConfig& cfg) {
  fs::path dir = cfg.scratch_dir.empty() ? default_scratch() : fs::path(cfg.scratch_dir);
  fs::create_directories(dir);
  fs::path file = dir / ("q" + std::to_string(g_file_counter.fetch_add(1)) + ".smt2");
  {
    std::ofstream o(file);
    if (!o) {
      SolverRun r;
      r.diagnostics = "cannot write " + file.string();
      return r;
    }
    o << script;
  }
  SolverRun r = run_solver_file(file.string(), cfg);
  if (!cfg.keep_files) {
    std::error_code ec;
    fs::remove(file, ec);
  }
  return r;
}

bool solver_available(const SolverConfig& cfg) {
  auto args = expand_command(cfg, "x");
  if (args.empty()) return false;
  const std::string& exe = args.front();
  if (exe.find('/') != std::string::npos) return ::access(exe.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::istringstream in(path);
  std::string dir;
  while (std::getline(in, dir, ':')) {
    if (dir.empty()) continue;
    if (::access((fs::path(dir) / exe).c_str(), X_OK) == 0) return true;
  }
  return false;
}

}  // namespace indloop
