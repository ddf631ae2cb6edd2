#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinmech/config.hpp"
#include "spinmech/errors.hpp"
#include "spinmech/orchestrator.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;
constexpr int exit_analysis = 4;

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-oscillator hybrid system simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
  long seed = 0; // reserved; all recipes are deterministic

  const std::vector<std::string> names = {"field-map", "esr-map",  "mech-response", "rabi",
                                          "triplet",   "mollow-sweep", "scales",    "report"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker thread count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed (reserved)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_config;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();

  spinmech::SystemConfig config;
  try {
    config = spinmech::load_config(config_path);
  } catch (const spinmech::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const spinmech::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }

  try {
    const auto files = spinmech::run_subcommand(subcommand, config, out_dir, threads);
    for (const auto& f : files) std::cout << f << "\n";
  } catch (const spinmech::StepTooLarge& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const spinmech::EvaluationInsideMagnet& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const spinmech::GridSpecError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const spinmech::NonUniformSampling& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return exit_analysis;
  } catch (const spinmech::DivisionByZeroCoupling& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return exit_analysis;
  } catch (const std::exception& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return exit_analysis;
  }
  return exit_ok;
}
