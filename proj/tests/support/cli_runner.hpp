#pragma once

// Helpers for driving the built CLI binary from tests.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace cli_test {

#ifndef TREEAGG_CLI_PATH
#define TREEAGG_CLI_PATH "treeagg"
#endif

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("treeagg_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string stamp = std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const std::string out_path =
      (std::filesystem::temp_directory_path() / ("treeagg_out_" + stamp)).string();
  const std::string err_path =
      (std::filesystem::temp_directory_path() / ("treeagg_err_" + stamp)).string();
  const std::string command =
      std::string(TREEAGG_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

}  // namespace cli_test
