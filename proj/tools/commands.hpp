#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "manifest.hpp"

namespace kgcli {

/// Where a command's results go.  Without --out everything is printed; a
/// path with an extension names the single result file; any other path is
/// a directory that receives the named artifacts.  File outputs get a
/// manifest beside them.
class Output {
 public:
  std::string out;

  void set_command(std::string cmd, std::vector<std::string> args);
  void emit(const std::string& name, const std::string& text);
  std::filesystem::path directory() const;
  void add_file(const std::filesystem::path& p) { manifest_.outputs.push_back(p); }
  void finish() const;

 private:
  bool file_mode() const;
  RunManifest manifest_;
};

std::string num(double v);

/// Registers every subcommand; the selected one stores its action in `run`.
void register_commands(CLI::App& app, Output& output, std::function<int()>& run);

}  // namespace kgcli
