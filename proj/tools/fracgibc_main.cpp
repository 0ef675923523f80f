#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "fracgibc/config.hpp"
#include "fracgibc/errors.hpp"
#include "fracgibc/harness.hpp"
#include "fracgibc/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fracgibc: time-fractional diffusion with a generalized impedance subregion"};
  app.set_version_flag("--version", std::string(fracgibc::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::string selected;

  for (const auto& name : fracgibc::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "study configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for all randomized steps");
    sub->callback([&selected, name]() { selected = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const fracgibc::StudyConfig cfg = fracgibc::parse_config_file(config_path);
    fracgibc::run_command(selected, cfg, out_dir, seed);
  } catch (const fracgibc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fracgibc::InvalidInput& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const fracgibc::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
