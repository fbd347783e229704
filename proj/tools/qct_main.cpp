#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qct/cli.hpp"
#include "qct/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"quasiclassical tunneling toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  unsigned long long seed_value = 0;

  app.add_option("-c,--config", config_path, "scenario config (INI)")
      ->required();
  app.add_option("-o,--out", out_dir, "output directory (default: out)");
  app.add_option("-s,--set", overrides,
                 "override a config entry, section.key=value (repeatable)");
  auto* seed_opt =
      app.add_option("--seed", seed_value, "override field.seed for random fields");

  app.add_subcommand("alpha", "alpha decay lifetime of one nucleus")
      ->fallthrough();
  app.add_subcommand("sweep", "alpha decay lifetimes across an energy range")
      ->fallthrough();
  app.add_subcommand("wkb", "1-d barrier penetration integral")->fallthrough();
  app.add_subcommand("flow", "first-order gradient flow between critical points")
      ->fallthrough();
  app.add_subcommand("instanton", "second-order relaxation between endpoints")
      ->fallthrough();
  app.add_subcommand("compare", "all action routes between two critical points")
      ->fallthrough();
  app.add_subcommand("manifold", "gradient flow on a curved surface chart")
      ->fallthrough();
  app.add_subcommand("morse", "basin decomposition of a surface field")
      ->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    qct::Config cfg = qct::Config::parse_file(config_path);
    if (cfg.empty())
      throw qct::Error("config file is empty: " + config_path);
    for (const auto& kv : overrides) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw qct::Error("--set expects section.key=value, got '" + kv + "'");
      cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
    }
    std::optional<unsigned long long> seed;
    if (seed_opt->count() > 0) seed = seed_value;

    const qct::cli::ScenarioResult res =
        qct::cli::run_scenario(command, std::move(cfg), out_dir, seed);
    std::cout << res.report;
    for (const auto& f : res.files_written)
      std::cout << "wrote " << f << "\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
