#include "pcula/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Penalized constrained Langevin sampler and experiments"};
  pcula::CliOptions opt;
  std::string config, out;
  std::uint64_t seed_override = 0;
  app.add_option("--config", config, "Run configuration file")->required();
  auto* out_opt = app.add_option("--out", out, "Output directory (overrides $PCULA_OUT_DIR)");
  auto* seed_opt =
      app.add_option("--seed-override", seed_override, "Rewrite seeds to s, s+1, ...");
  app.add_flag("--strict", opt.strict, "Treat step-size and projection warnings as errors");
  app.add_flag("--quiet", opt.quiet, "Suppress the summary on standard output");
  app.add_option("--threads", opt.threads, "Worker cap (0 = hardware concurrency)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : pcula::kExitValidation;
  }
  opt.config_path = config;
  if (*out_opt) opt.out = out;
  if (*seed_opt) opt.seed_override = seed_override;
  return pcula::run_cli(opt, std::cout, std::cerr);
}
