#pragma once

#include <string>
#include <utility>
#include <vector>

namespace crossweigh {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Reproducibility record emitted by every CLI run: command, config echo,
// toolkit version, and input-file digests.
struct RunManifest {
  std::string command;
  std::string version = kToolkitVersion;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, fnv1a64 digest
  std::vector<std::pair<std::string, std::string>> params;   // key, value
  std::vector<std::pair<std::string, std::string>> outputs;  // role, path
};

std::string write_manifest(const RunManifest& manifest);

}  // namespace crossweigh
