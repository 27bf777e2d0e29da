#include "swingid/manifest.hpp"

#include <fstream>

#include "swingid/config.hpp"
#include "swingid/errors.hpp"

namespace swingid {

RunManifest RunManifest::from_file(const std::string& path) {
  const Config cfg = Config::from_file(path);
  RunManifest m;
  m.subcommand = cfg.get_string("run.subcommand");
  for (int i = 0; cfg.has("run.input." + std::to_string(i)); ++i)
    m.inputs.push_back(cfg.get_string("run.input." + std::to_string(i)));
  m.config_path = cfg.get_string("run.config", "");
  m.config_hash = cfg.get_string("run.config_hash", "");
  m.seed = static_cast<std::uint64_t>(cfg.get_int("run.seed"));
  m.threads = static_cast<int>(cfg.get_int("run.threads", 1));
  m.full = cfg.get_bool("run.full", false);
  m.out_dir = cfg.get_string("run.out");
  m.version = cfg.get_string("run.version", "");
  if (m.subcommand.empty()) throw ValidationError("manifest: empty subcommand");
  return m;
}

void RunManifest::write(const std::string& path) const {
  Config cfg;
  cfg.set("run.subcommand", subcommand);
  for (std::size_t i = 0; i < inputs.size(); ++i)
    cfg.set("run.input." + std::to_string(i), inputs[i]);
  if (!config_path.empty()) cfg.set("run.config", config_path);
  if (!config_hash.empty()) cfg.set("run.config_hash", config_hash);
  cfg.set_int("run.seed", static_cast<long long>(seed));
  cfg.set_int("run.threads", threads);
  cfg.set("run.full", full ? "true" : "false");
  cfg.set("run.out", out_dir);
  cfg.set("run.version", version);

  std::ofstream out(path);
  if (!out) throw IoError("manifest: cannot write " + path);
  out << cfg.serialize();
  if (!out) throw IoError("manifest: write failed for " + path);
}

}  // namespace swingid
