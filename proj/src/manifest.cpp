#include "crossweigh/manifest.hpp"

namespace crossweigh {

std::string write_manifest(const RunManifest& manifest) {
  std::string out = "crossweigh-manifest 1\n";
  out += "command " + manifest.command + "\n";
  out += "version " + manifest.version + "\n";
  for (const auto& [path, digest] : manifest.inputs)
    out += "input " + path + " fnv1a64 " + digest + "\n";
  for (const auto& [key, value] : manifest.params) out += key + " " + value + "\n";
  for (const auto& [role, path] : manifest.outputs)
    out += "output " + role + " " + path + "\n";
  return out;
}

}  // namespace crossweigh
