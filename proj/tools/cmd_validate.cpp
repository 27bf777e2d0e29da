#include <filesystem>
#include <string>

#include "cli_common.hpp"
#include "swingid/errors.hpp"
#include "swingid/synthval.hpp"

using namespace swingid;

int cmd_validate(const CliArgs& args) {
  if (!args.inputs.empty())
    throw ValidationError("validate takes no positional inputs; use --config");
  if (args.config_path.empty())
    throw ConfigError("validate requires --config with a scenario");
  const Config cfg = load_config(args);
  ensure_out_dir(args.out);
  const std::filesystem::path out(args.out);

  const std::string base_dir =
      std::filesystem::path(args.config_path).parent_path().string();
  const Scenario scenario = Scenario::from_config(cfg, base_dir.empty() ? "." : base_dir);

  SweepOptions opts;
  opts.full = args.full;
  opts.noisy = cfg.get_bool("validate.noisy", false);
  opts.seed = args.seed;
  opts.threads = args.threads;
  opts.max_combos = static_cast<int>(cfg.get_int("validate.max_combos", 0));
  opts.ident.n_starts = static_cast<int>(cfg.get_int("identify.n_starts", 10));

  const SweepResult result = run_validation(scenario, opts);

  write_combos_csv((out / "combos.csv").string(), result);
  write_stats_csv((out / "stats.csv").string(), result);
  write_manifest(args, cfg, "validate");
  return 0;
}
