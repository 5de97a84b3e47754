// Command-line front end: supstable <command> [--config PATH] [overrides]

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "supstable/commands.hpp"
#include "supstable/errors.hpp"
#include "supstable/run_config.hpp"

namespace {

struct Flag {
  const char* option;
  const char* key;
  const char* help;
};

constexpr Flag kValueFlags[] = {
    {"--alpha", "alpha", "stability index in (0, 2)"},
    {"--c-plus", "c_plus", "weight of positive jumps"},
    {"--c-minus", "c_minus", "weight of negative jumps"},
    {"--seed", "seed", "master seed"},
    {"--paths", "n_paths", "supremum paths"},
    {"--accepted", "meander_accepted", "accepted meander paths"},
    {"--steps", "n_steps", "finest skeleton steps per unit time"},
    {"--grid-min", "grid_min", "first grid point"},
    {"--grid-max", "grid_max", "last grid point"},
    {"--grid-points", "grid_points", "number of grid points"},
    {"--out", "out", "output directory"},
    {"--t", "t", "time horizon"},
    {"--x", "x", "passage level"},
    {"--threads", "threads", "worker threads (0: all cores)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Suprema, meanders and passage times of stable Levy processes"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> values[std::size(kValueFlags)];
  bool grid_log = false;
  bool grid_linear = false;

  const char* commands[][2] = {
      {"density", "tabulate the density of X_t"},
      {"sup", "simulate the supremum and write its density"},
      {"meander", "simulate the meander and write its densities"},
      {"passage", "first-passage density and survival over a time grid"},
      {"verify", "full pipeline and asymptotic report"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value config file");
    for (std::size_t i = 0; i < std::size(kValueFlags); ++i) {
      sub->add_option(kValueFlags[i].option, values[i], kValueFlags[i].help);
    }
    sub->add_flag("--grid-log", grid_log, "log-spaced grid");
    sub->add_flag("--grid-linear", grid_linear, "linearly spaced grid");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return supstable::kExitUsage;
  }

  supstable::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      supstable::apply_entries(cfg, supstable::read_config_file(config_path));
    }
    for (std::size_t i = 0; i < std::size(kValueFlags); ++i) {
      if (values[i]) {
        supstable::set_key(cfg, kValueFlags[i].key, *values[i]);
      }
    }
    if (grid_log && grid_linear) {
      throw supstable::ConfigError("--grid-log and --grid-linear conflict");
    }
    if (grid_log || grid_linear) {
      supstable::set_key(cfg, "grid_spacing", grid_log ? "log" : "linear");
    }
  } catch (const supstable::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return supstable::kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  return supstable::run_command(name, cfg, std::cout, std::cerr);
}
