#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kgcli {

std::string sha256_file(const std::filesystem::path& p);

/// Records the command line and SHA-256 digests of every output file.  No
/// timestamps, so identical runs produce identical manifests.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  std::vector<std::filesystem::path> outputs;

  void write(const std::filesystem::path& path) const;
};

}  // namespace kgcli
