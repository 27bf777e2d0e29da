#include <filesystem>
#include <fstream>

#include "cli_common.hpp"
#include "swingid/errors.hpp"
#include "swingid/version.hpp"

using namespace swingid;

Config load_config(const CliArgs& args) {
  if (args.config_path.empty()) return Config();
  return Config::from_file(args.config_path);
}

void ensure_out_dir(const std::string& out) {
  if (out.empty()) throw ConfigError("--out is required for this subcommand");
  std::filesystem::create_directories(out);
}

void write_manifest(const CliArgs& args, const Config& cfg,
                    const std::string& subcommand) {
  RunManifest m;
  m.subcommand = subcommand;
  m.inputs = args.inputs;
  m.config_path = args.config_path;
  m.config_hash = cfg.fingerprint();
  m.seed = args.seed;
  m.threads = args.threads;
  m.full = args.full;
  m.out_dir = args.out;
  m.version = kVersion;
  m.write((std::filesystem::path(args.out) / "manifest.txt").string());
}

void write_report_text(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& [key, value] : kv) out << key << " = " << value << "\n";
  if (!out) throw IoError("write failed for " + path);
}

int dispatch(const std::string& subcommand, const CliArgs& args) {
  if (subcommand == "preprocess") return cmd_preprocess(args);
  if (subcommand == "identify") return cmd_identify(args);
  if (subcommand == "validate") return cmd_validate(args);
  if (subcommand == "simulate-controller") return cmd_simulate_controller(args);
  throw ValidationError("unknown subcommand in manifest: " + subcommand);
}
