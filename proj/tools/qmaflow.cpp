#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qma/cli.hpp"
#include "qma/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"quaternionic Monge-Ampere flow laboratory on flat tori"};
  app.require_subcommand(1);

  std::string calib_out = "calibration.json";
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "compute kappa/c_grad and write them");
  calibrate->add_option("--out", calib_out, "output path")
      ->capture_default_str();

  std::string verify_config;
  CLI::App* verify =
      app.add_subcommand("verify", "run the identity verification suites");
  verify->add_option("--config", verify_config, "run configuration (for seed "
                                                "and calibration path)");

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "integrate the flow");
  run->add_option("--config", run_config, "run configuration JSON")
      ->required();

  std::string manifest;
  CLI::App* resume =
      app.add_subcommand("resume", "continue a run from a snapshot manifest");
  resume->add_option("--manifest", manifest, "snapshot manifest JSON")
      ->required();

  CLI11_PARSE(app, argc, argv);

  // Worker-count cap; reductions are fixed-tree, so the value cannot change
  // any result. Logged for the record.
  if (const char* threads = std::getenv("QMA_THREADS"))
    std::cerr << "QMA_THREADS=" << threads << " (informational)\n";

  try {
    if (calibrate->parsed()) return qma::cli::cmd_calibrate(calib_out, std::cout);
    if (verify->parsed()) {
      qma::RunConfig cfg;
      if (!verify_config.empty())
        cfg = qma::parse_run_config_file(verify_config);
      return qma::cli::cmd_verify(cfg, std::cout);
    }
    if (run->parsed())
      return qma::cli::cmd_run(qma::parse_run_config_file(run_config),
                               std::cout);
    if (resume->parsed()) return qma::cli::cmd_resume(manifest, std::cout);
  } catch (const qma::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const qma::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
