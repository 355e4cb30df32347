// exospin: field, optimize, exclusion, systematics, responsivity and
// strayfield subcommands over an INI config.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "exospin/cli/commands.hpp"
#include "exospin/cli/config.hpp"

namespace {

using namespace exospin::cli;

unsigned threads_from_env() {
  const char* s = std::getenv("EXOSPIN_THREADS");
  if (!s || !*s) return 0;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError("EXOSPIN_THREADS must be a positive integer");
  return static_cast<unsigned>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exotic spin-interaction fields, sensitivity and systematics for NV magnetometry"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool force = false;
  std::string sweep_param;
  int sweep_points = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "INI config file");
    sub->add_option("-o,--out-dir", out_dir, "output directory (overrides [run] out_dir)");
    sub->add_flag("--force", force, "allow a polarized preset with a spin-velocity potential");
  };

  auto* field = app.add_subcommand("field", "field amplitude per unit coupling -> field.json");
  auto* optimize = app.add_subcommand("optimize", "figure-of-merit sweeps -> sweep_<param>.csv");
  optimize->add_option("--param", sweep_param, "d_nv, d_tm, R_tm, d_gap or A_nv");
  optimize->add_option("--points", sweep_points, "log-spaced grid points (>= 5)");
  auto* exclusion =
      app.add_subcommand("exclusion", "f_min(lambda) -> exclusion_<kind>_<preset>.csv");
  auto* systematics = app.add_subcommand("systematics", "budget.json and budget.txt");
  auto* responsivity =
      app.add_subcommand("responsivity", "bias-angle responsivity -> responsivity.csv");
  auto* strayfield =
      app.add_subcommand("strayfield", "magnetized-mass stray field -> strayfield_<kind>.csv");
  for (auto* sub : {field, optimize, exclusion, systematics, responsivity, strayfield}) {
    add_common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.mc.threads = threads_from_env();

    CommandOptions opt;
    opt.force = force;
    opt.log = &std::cout;
    if (!sweep_param.empty()) opt.sweep_param = sweep_param;
    if (sweep_points != 0) opt.sweep_points = sweep_points;

    int rc = kExitOk;
    if (*field) rc = cmd_field(cfg, opt);
    else if (*optimize) rc = cmd_optimize(cfg, opt);
    else if (*exclusion) rc = cmd_exclusion(cfg, opt);
    else if (*systematics) rc = cmd_systematics(cfg, opt);
    else if (*responsivity) rc = cmd_responsivity(cfg, opt);
    else if (*strayfield) rc = cmd_strayfield(cfg, opt);
    if (rc == kExitNonConvergence) {
      std::cerr << "warning: Monte Carlo did not reach target_rel_se within max_samples\n";
    }
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const exospin::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
