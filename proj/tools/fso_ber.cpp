// Command-line front end: sweeps average BER over transmit power for a preset
// or a config file and writes curves.csv + report.txt.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "fso/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Average BER of OOK free-space optical links under weak turbulence and pointing errors"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Sweep BER over transmit power and write CSV + report");
  std::string preset_name;
  std::string config_path;
  std::optional<std::string> methods;
  std::optional<std::string> sweep;
  std::optional<std::string> mc_trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> fec_threshold;
  std::optional<double> prev_v_min;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;

  auto* preset_opt = run->add_option("--preset", preset_name, "case1 | case2 | case3")
                         ->check(CLI::IsMember(fso::preset_names()));
  auto* config_opt = run->add_option("--config", config_path, "key = value config file")
                         ->check(CLI::ExistingFile);
  preset_opt->excludes(config_opt);
  run->add_option("--methods", methods, "comma list of exact,approx-new,approx-prev,mc");
  run->add_option("--sweep", sweep, "power grid lo:hi:step in dBm (default -4:16:0.5)");
  run->add_option("--mc-trials", mc_trials, "Monte Carlo trials per power point");
  run->add_option("--seed", seed, "Monte Carlo master seed");
  run->add_option("--fec-threshold", fec_threshold, "BER threshold for crossings (default 3.84e-3)");
  run->add_option("--prev-vmin", prev_v_min, "lower cutoff on v for approx-prev (default 1e-3)");
  run->add_option("--threads", threads, "worker threads, 0 = all cores");
  run->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (preset_name.empty() && config_path.empty()) {
      throw fso::ConfigError({"one of --preset or --config is required"});
    }
    fso::RunConfig config =
        preset_name.empty() ? fso::load_config(config_path) : fso::preset(preset_name);
    if (methods) config.methods = fso::parse_methods(*methods);
    if (sweep) config.sweep = fso::parse_sweep(*sweep);
    if (mc_trials) {
      const auto n = fso::parse_count(*mc_trials);
      if (!n) throw fso::ConfigError({"--mc-trials expects a non-negative integer, got '" + *mc_trials + "'"});
      config.mc_trials = *n;
    }
    if (seed) config.seed = *seed;
    if (fec_threshold) config.fec_threshold = *fec_threshold;
    if (prev_v_min) config.prev_v_min = *prev_v_min;
    if (threads) config.threads = *threads;
    if (out_dir) config.output_path = *out_dir;

    const auto artifacts = fso::run(config);
    std::cout << "wrote " << artifacts.csv.string() << "\n"
              << "wrote " << artifacts.report.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "fso_ber: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
