#pragma once

// Runs the CLI binary and captures stdout and the exit status.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace runner {

struct Result {
  int exit_code = -1;
  std::string out;
};

inline Result run(const std::string& args) {
  const std::string cmd = std::string(HBSPECTRA_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed: " + cmd);
  Result r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string data(const std::string& name) { return std::string(HBSPECTRA_DATA_DIR) + "/" + name; }

}  // namespace runner
