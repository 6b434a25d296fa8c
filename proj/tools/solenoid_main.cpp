#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "solenoid/commands.hpp"
#include "solenoid/config.hpp"
#include "solenoid/errors.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitSpecInvalid = 2;
constexpr int kExitCap = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on skew-product solenoid attractors"};
  app.footer(solenoid::csv_help());

  std::string command;
  std::string config_path;
  std::optional<int> depth;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool timings = false;

  std::vector<std::string> names(std::begin(solenoid::kCommands), std::end(solenoid::kCommands));
  app.add_option("command", command, "One of validate, pressure, bowen, dimension, transversality, holonomy, "
                                     "deviations, report")
      ->required()
      ->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--depth", depth, "Generation n (overrides depth_n)");
  app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
  app.add_option("--seed", seed, "RNG seed (overrides seed)");
  app.add_option("--threads", threads, "Worker threads, 0 = all cores");
  app.add_flag("--timings", timings, "Add per-stage wall-clock timings to the JSON report");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = solenoid::load_config(config_path);
    if (depth) {
      if (*depth < 1) throw solenoid::ParseError("--depth must be at least 1");
      cfg.depth_n = *depth;
    }
    if (out_dir) cfg.output_dir = *out_dir;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;

    const auto report = solenoid::run_command(cfg, command);
    const auto files = solenoid::write_report(report, cfg.output_dir, timings);
    for (const auto& f : files) std::cout << f.string() << '\n';
    return 0;
  } catch (const solenoid::SpecInvalid& e) {
    std::cerr << "solenoid: " << e.what() << '\n';
    return kExitSpecInvalid;
  } catch (const solenoid::CapExceeded& e) {
    std::cerr << "solenoid: resource cap exceeded: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "solenoid: " << e.what() << '\n';
    return kExitFailure;
  }
}
