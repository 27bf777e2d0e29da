#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "cli_common.hpp"
#include "swingid/errors.hpp"

using namespace swingid;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::set<std::string> output_files(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() != "manifest.txt")
      names.insert(entry.path().filename().string());
  return names;
}

}  // namespace

int cmd_report(const CliArgs& args, bool rerun) {
  if (args.inputs.size() != 1)
    throw ValidationError("report expects one input: a run directory or manifest file");

  fs::path manifest_path(args.inputs[0]);
  if (fs::is_directory(manifest_path)) manifest_path /= "manifest.txt";
  const RunManifest m = RunManifest::from_file(manifest_path.string());
  const fs::path run_dir = manifest_path.parent_path();

  if (!rerun) {
    std::cout << "subcommand: " << m.subcommand << "\n";
    for (const auto& in : m.inputs) std::cout << "input: " << in << "\n";
    std::cout << "config: " << (m.config_path.empty() ? "(none)" : m.config_path)
              << "\n"
              << "config_hash: " << m.config_hash << "\n"
              << "seed: " << m.seed << "\n"
              << "threads: " << m.threads << "\n"
              << "full: " << (m.full ? "true" : "false") << "\n"
              << "version: " << m.version << "\n";
    for (const auto& name : output_files(run_dir))
      std::cout << "output: " << name << " ("
                << fs::file_size(run_dir / name) << " bytes)\n";
    return 0;
  }

  if (args.out.empty())
    throw ConfigError("report --rerun requires --out for the reproduced run");
  if (fs::exists(args.out) && fs::equivalent(fs::path(args.out), run_dir))
    throw ValidationError("report --rerun must write to a different directory");

  // the config the run recorded must not have drifted
  CliArgs rerun_args;
  rerun_args.config_path = m.config_path;
  rerun_args.seed = m.seed;
  rerun_args.threads = m.threads;
  rerun_args.full = m.full;
  rerun_args.inputs = m.inputs;
  rerun_args.out = args.out;
  const Config cfg = load_config(rerun_args);
  if (cfg.fingerprint() != m.config_hash)
    throw ValidationError("config file changed since the recorded run: " +
                          m.config_path);

  const int rc = dispatch(m.subcommand, rerun_args);
  if (rc != 0) return rc;

  const std::set<std::string> original = output_files(run_dir);
  const std::set<std::string> reproduced = output_files(args.out);
  bool all_ok = true;
  for (const auto& name : original) {
    if (!reproduced.count(name)) {
      std::cout << name << ": MISSING from rerun\n";
      all_ok = false;
      continue;
    }
    const bool same = slurp(run_dir / name) == slurp(fs::path(args.out) / name);
    std::cout << name << (same ? ": identical\n" : ": DIFFERS\n");
    all_ok = all_ok && same;
  }
  for (const auto& name : reproduced)
    if (!original.count(name)) {
      std::cout << name << ": EXTRA in rerun\n";
      all_ok = false;
    }
  std::cout << (all_ok ? "rerun reproduced the run byte-identically\n"
                       : "rerun deviated from the recorded run\n");
  return all_ok ? 0 : 1;
}
