#include <iostream>

#include "CLI11.hpp"

#include "higgslab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"higgslab: lattice U(1) Higgs model laboratory (VQE / ED / DMRG)"};
  app.require_subcommand(1);

  std::string run_config, verify_config;
  auto* run_cmd = app.add_subcommand("run", "execute a configured experiment");
  run_cmd->add_option("config", run_config, "experiment config file (TOML-style)")
      ->required();
  auto* verify_cmd =
      app.add_subcommand("verify", "validate a config and estimate resources");
  verify_cmd->add_option("config", verify_config, "experiment config file")->required();
  auto* oracle_cmd =
      app.add_subcommand("oracle-suite", "run the independent numerical oracles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      higgslab::ExperimentConfig cfg;
      try {
        cfg = higgslab::ExperimentConfig::from_file(run_config);
      } catch (const std::exception& ex) {
        std::cerr << "invalid config: " << ex.what() << "\n";
        return 2;
      }
      auto outcome = higgslab::run_experiment(cfg);
      if (!outcome.summary.empty()) std::cout << outcome.summary;
      for (const auto& a : outcome.artifacts) std::cout << "wrote " << a << "\n";
      return outcome.exit_code;
    }
    if (*verify_cmd) {
      higgslab::ExperimentConfig cfg;
      try {
        cfg = higgslab::ExperimentConfig::from_file(verify_config);
      } catch (const std::exception& ex) {
        std::cerr << "invalid config: " << ex.what() << "\n";
        return 2;
      }
      std::cout << higgslab::verify_report(cfg);
      return 0;
    }
    if (*oracle_cmd) {
      bool ok = higgslab::run_oracle_suite(std::cout);
      return ok ? 0 : 1;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
