#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "cli_common.hpp"
#include "swingid/errors.hpp"
#include "swingid/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"swing-leg impedance toolkit: gait preprocessing, joint "
               "impedance identification, synthetic validation, and "
               "interaction-controller simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", swingid::kVersion);

  CliArgs args;
  bool rerun = false;

  auto add_common = [&args](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "configuration file (key = value)");
    sub->add_option("--seed", args.seed, "master random seed")
        ->capture_default_str();
    sub->add_option("--out", args.out, "output directory");
    sub->add_option("--threads", args.threads, "worker threads")
        ->capture_default_str();
    sub->add_flag("--full", args.full,
                  "run the full parameter sweep instead of the smoke subset");
    return sub;
  };

  auto* pre = add_common(app.add_subcommand(
      "preprocess", "segment a gait recording into strides and report "
                    "transparency metrics"));
  pre->add_option("recording", args.inputs, "gait recording CSV")
      ->expected(1)
      ->required();

  auto* ident = add_common(app.add_subcommand(
      "identify", "estimate joint stiffness and damping from a perturbed / "
                  "unperturbed trajectory pair"));
  ident->add_option("trajectories", args.inputs,
                    "perturbed.csv unperturbed.csv")
      ->expected(2)
      ->required();

  add_common(app.add_subcommand(
      "validate", "run the synthetic estimation sweep and summarize errors"));

  add_common(app.add_subcommand(
      "simulate-controller",
      "simulate the admittance force controller on a step or noise profile"));

  auto* rep = add_common(app.add_subcommand(
      "report", "summarize a recorded run, or reproduce it with --rerun"));
  rep->add_option("run", args.inputs, "run directory or manifest file")
      ->expected(1)
      ->required();
  rep->add_flag("--rerun", rerun,
                "re-execute the run from its manifest into --out and compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "report") return cmd_report(args, rerun);
    return dispatch(name, args);
  } catch (const swingid::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const swingid::IoError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const swingid::ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
