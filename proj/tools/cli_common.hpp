#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swingid/config.hpp"
#include "swingid/manifest.hpp"

// Parsed command line shared by every subcommand.
struct CliArgs {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 1;
  bool full = false;
  std::vector<std::string> inputs;
};

// Each returns a process exit code (0 success; throwing is also fine, main
// maps exceptions to exit codes 1/2).
int cmd_preprocess(const CliArgs& args);
int cmd_identify(const CliArgs& args);
int cmd_validate(const CliArgs& args);
int cmd_simulate_controller(const CliArgs& args);
int cmd_report(const CliArgs& args, bool rerun);

// Helpers shared by the command implementations (cli_util.cpp).
swingid::Config load_config(const CliArgs& args);  // empty when no --config
void ensure_out_dir(const std::string& out);
void write_manifest(const CliArgs& args, const swingid::Config& cfg,
                    const std::string& subcommand);
void write_report_text(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& kv);
int dispatch(const std::string& subcommand, const CliArgs& args);
