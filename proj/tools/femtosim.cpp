// femtosim: experiment runner for femtocell frequency-allocation schemes.
//
//   femtosim run --config configs/default.cfg --experiment fig5 --out fig5.csv
//   femtosim validate --config configs/default.cfg --set n_trials=0
//   femtosim print-config --config configs/default.cfg --seed 7
//
// Exit codes: 0 success, 2 invalid configuration or usage, 3 runtime failure.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "femto/experiment.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config_path;
  std::string experiment = "fig5";
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
};

femto::ExperimentConfig effective_config(const Options& o) {
  femto::ExperimentConfig c =
      o.config_path.empty() ? femto::ExperimentConfig{} : femto::ExperimentConfig::load(o.config_path);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw femto::ConfigError("--set expects key=value, got '" + kv + "'");
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.out = o.out;
  return c;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "key=value experiment config file")->check(CLI::ExistingFile);
  sub->add_option("--set", o.sets, "override a config key (key=value, repeatable)");
  sub->add_option("--seed", o.seed, "override the master seed");
  sub->add_option("--out", o.out, "output CSV path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Femtocell/macrocell frequency-allocation outage simulator"};
  app.require_subcommand(1);
  Options opt;

  auto* run = app.add_subcommand("run", "run a named experiment and write its CSV");
  add_common(run, opt);
  run->add_option("--experiment", opt.experiment, "fig5 | fig6 | son-ablation");
  run->add_option("--workers", opt.workers, "worker threads (does not affect results)")
      ->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "check a configuration without running");
  add_common(validate, opt);

  auto* print = app.add_subcommand("print-config", "print the effective configuration");
  add_common(print, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  femto::ExperimentConfig config;
  try {
    config = effective_config(opt);
    config.validate();
    if (*run) femto::sweep_settings(config, opt.experiment, opt.workers);
  } catch (const femto::InvalidArgument& e) {
    std::cerr << "femtosim: invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  }

  if (*validate) {
    std::cout << "ok " << config.hash() << '\n';
    return 0;
  }
  if (*print) {
    std::cout << config.to_text();
    return 0;
  }

  try {
    const std::string csv = femto::run_experiment(config, opt.experiment, opt.workers);
    femto::write_atomically(config.out, csv);
    std::cerr << "femtosim: wrote " << config.out << '\n';
  } catch (const std::exception& e) {
    std::cerr << "femtosim: run failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
