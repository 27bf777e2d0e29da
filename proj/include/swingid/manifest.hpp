#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace swingid {

// Record of one command-line run, written as manifest.txt into the output
// directory. Holds everything needed to reproduce the run: the subcommand,
// its input files, the config file with a fingerprint of its content, and
// the master seed. Reruns refuse to proceed when the config file on disk no
// longer matches the recorded fingerprint.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> inputs;  // positional input paths, as given
  std::string config_path;          // empty when the run had no --config
  std::string config_hash;          // fingerprint of the loaded config
  std::uint64_t seed = 1;
  int threads = 1;
  bool full = false;
  std::string out_dir;
  std::string version;

  static RunManifest from_file(const std::string& path);
  void write(const std::string& path) const;
};

}  // namespace swingid
