#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eikonal/errors.hpp"
#include "eikonal/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kIoError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-scale domain decomposition solver for static Eikonal equations"};
  app.require_subcommand(1);

  std::string config_path;
  eikonal::Overrides overrides;
  long long seed = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON experiment config");
    cmd->add_option("--workers", overrides.workers, "worker threads (default: hardware concurrency)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "seed for randomized slowness fields")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", overrides.out_dir, "output directory");
    cmd->add_option("--snapshot-every", overrides.snapshot_every, "write fields every k iterations (0: never)")
        ->check(CLI::NonNegativeNumber);
  };

  auto* run = app.add_subcommand("run", "two-scale solve with error history and final fields");
  auto* reference = app.add_subcommand("reference", "whole-domain fine FSM solution");
  auto* model = app.add_subcommand("model", "model strip iteration with theta bounds");
  auto* speedup = app.add_subcommand("speedup", "flop model table");
  for (auto* cmd : {run, reference, model, speedup}) add_common(cmd);

  CLI11_PARSE(app, argc, argv);
  overrides.seed = seed;

  try {
    eikonal::ExperimentConfig config =
        config_path.empty() ? eikonal::parse_config(nlohmann::json::object()) : eikonal::load_config(config_path);
    eikonal::apply_overrides(config, overrides);
    if (run->parsed()) return eikonal::cmd_run(config, std::cout);
    if (reference->parsed()) return eikonal::cmd_reference(config, std::cout);
    if (model->parsed()) return eikonal::cmd_model(config, std::cout);
    return eikonal::cmd_speedup(config, std::cout);
  } catch (const eikonal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const eikonal::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
