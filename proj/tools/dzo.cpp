// dzo: distributed zero-order optimization experiments.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dzo/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace dzo::cli;

  CLI::App app{"Distributed zero-order stochastic optimization experiments"};
  app.require_subcommand(1);

  std::string config, out_dir, csv, column, suite;
  int seeds = 0;
  double tail = 0.5;

  auto* run = app.add_subcommand("run", "Run one experiment and write trace.csv + manifest.json");
  run->add_option("--config", config, "JSON config file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a seed sweep and aggregate the traces");
  sweep->add_option("--config", config, "JSON config file")->required();
  auto* seeds_opt = sweep->add_option("--seeds", seeds, "Number of seeds (>= 2)");
  sweep->add_option("--out", out_dir, "Output directory")->required();

  ValidateOptions vopt;
  auto* validate = app.add_subcommand("validate", "Run a validation suite");
  validate->add_option("suite", suite, "kernel | mixing | estimator | hard")
      ->required()
      ->check(CLI::IsMember({"kernel", "mixing", "estimator", "hard"}));
  validate->add_option("--betas", vopt.betas, "Kernel smoothness orders");
  validate->add_option("--n-max", vopt.n_max, "Largest ring/path/grid size");
  validate->add_option("--er-samples", vopt.er_samples, "Erdos-Renyi samples");
  validate->add_option("--samples", vopt.samples, "Monte-Carlo samples per estimator check");
  validate->add_option("--bias-samples", vopt.bias_samples, "Monte-Carlo samples per bias point");
  validate->add_option("--seed", vopt.seed, "Master seed");

  auto* ratefit = app.add_subcommand("ratefit", "Fit a log-log rate to a CSV column");
  ratefit->add_option("--csv", csv, "CSV with a t column")->required();
  ratefit->add_option("--column", column, "Column to fit")->required();
  ratefit->add_option("--tail", tail, "Tail fraction of rows to fit")->capture_default_str();

  double beta = 2.0, alpha = 1.0, T = 16.0;
  int d = 1;
  auto* hard = app.add_subcommand("hard", "Hard-instance tools");
  hard->require_subcommand(1);
  auto* check = hard->add_subcommand("check", "Check one hard-instance configuration");
  check->add_option("--beta", beta)->required();
  check->add_option("--alpha", alpha)->required();
  check->add_option("--T", T)->required();
  check->add_option("--d", d)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  return guarded(
      [&]() -> int {
        if (*run) return cmd_run(config, out_dir, std::cout);
        if (*sweep) {
          return cmd_sweep(config, seeds_opt->count() ? std::optional<int>(seeds) : std::nullopt,
                           out_dir, std::cout);
        }
        if (*validate) return cmd_validate(suite, vopt, std::cout);
        if (*ratefit) return cmd_ratefit(csv, column, tail, std::cout);
        return cmd_hard_check(beta, alpha, T, d, std::cout);
      },
      std::cerr);
}
