// delaysir: simulate the delayed spatial SIR model, report step-size bounds, scan sharpness.
#include <iostream>

#include <CLI11.hpp>

#include "delaysir/commands.hpp"
#include "delaysir/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Delayed spatial SIR simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "Output directory (overrides output.dir)");
  };
  auto* simulate = app.add_subcommand("simulate", "Run trajectories and write fields, heatmaps and logs");
  auto* bounds = app.add_subcommand("bounds", "Theoretical step-size bounds per case and scheme");
  auto* sharpness = app.add_subcommand("sharpness", "Empirical sharpness of the step-size bound");
  for (auto* sub : {simulate, bounds, sharpness}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : delaysir::kExitConfig;
  }

  try {
    delaysir::RunConfig cfg = delaysir::load_config(config_path);
    const std::filesystem::path out = out_dir.empty() ? cfg.output_dir : std::filesystem::path(out_dir);
    if (simulate->parsed()) return delaysir::cmd_simulate(cfg, out, std::cout);
    if (bounds->parsed()) return delaysir::cmd_bounds(cfg, out, std::cout);
    return delaysir::cmd_sharpness(cfg, out, std::cout);
  } catch (const delaysir::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return delaysir::kExitConfig;
}
