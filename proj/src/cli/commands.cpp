#include "exospin/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "exospin/sensitivity.hpp"
#include "exospin/serialization.hpp"
#include "exospin/systematics.hpp"

namespace exospin::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

fs::path output_path(const RunConfig& cfg, const std::string& file) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("[run] out_dir: cannot create '" + cfg.out_dir + "': " + ec.message());
  return dir / file;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("[run] out_dir: cannot write '" + path.string() + "'");
  f << content;
}

void log_line(const CommandOptions& opt, const std::string& s) {
  if (opt.log) *opt.log << s << '\n';
}

int exit_for(bool converged) { return converged ? kExitOk : kExitNonConvergence; }

}  // namespace

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

int cmd_field(const RunConfig& cfg, const CommandOptions& opt) {
  const PotentialKind kind = kind_or_default(cfg);
  const auto names = presets_or_default(cfg, kind);
  if (names.size() != 1) throw ConfigError("[geometry] preset: field takes a single preset");
  const GeometryPreset p = resolve_preset(cfg, names.front(), kind, opt.force);
  const double lambda = lambda_or_target(cfg, p);
  const FieldEstimate f = field_amplitude(p.geometry, kind, lambda, cfg.mc);

  json phases = json::array();
  for (const auto& v : f.per_phase_values) {
    phases.push_back({{"phase_rad", v.phase},
                      {"field_per_coupling_T", v.field_per_coupling},
                      {"std_error_T", v.std_error}});
  }
  json j;
  j["kind"] = std::string(kind_name(kind));
  j["coupling_symbol"] = std::string(coupling_symbol(kind));
  j["preset"] = p.name;
  j["lambda_m"] = lambda;
  j["amplitude_per_coupling_T"] = f.amplitude_per_coupling;
  j["std_error_T"] = f.std_error;
  j["per_phase"] = std::move(phases);
  j["seed"] = f.seed_used;
  j["samples"] = f.samples_used;
  j["flagged"] = !f.converged;
  const auto path = output_path(cfg, "field.json");
  write_file(path, j.dump(2) + "\n");
  log_line(opt, "wrote " + path.string() + ": amplitude " + csv_number(f.amplitude_per_coupling) +
                    " +- " + csv_number(f.std_error) + " T per unit coupling" +
                    (f.converged ? "" : " (not converged)"));
  return exit_for(f.converged);
}

int cmd_optimize(const RunConfig& cfg, const CommandOptions& opt) {
  const PotentialKind kind = kind_or_default(cfg);
  const auto names = presets_or_default(cfg, kind);
  if (names.size() != 1) throw ConfigError("[geometry] preset: optimize takes a single preset");
  const GeometryPreset p = resolve_preset(cfg, names.front(), kind, opt.force);
  const double lambda = lambda_or_target(cfg, p);

  std::vector<SweepParam> params;
  if (opt.sweep_param) {
    const auto sp = parse_sweep_param(*opt.sweep_param);
    if (!sp) {
      throw ConfigError("--param: unknown sweep parameter '" + *opt.sweep_param +
                        "' (d_nv, d_tm, R_tm, d_gap, A_nv)");
    }
    params.push_back(*sp);
  } else {
    params = {SweepParam::DNv, SweepParam::DTm, SweepParam::RTm, SweepParam::DGap};
  }
  if (opt.sweep_points && *opt.sweep_points < 5) {
    throw ConfigError("--points: a sweep needs at least 5 points");
  }

  bool converged = true;
  for (SweepParam param : params) {
    std::vector<double> grid = default_sweep_grid(param, lambda);
    if (opt.sweep_points) {
      const double lo = grid.front(), hi = grid.back();
      const int n = *opt.sweep_points;
      grid.clear();
      for (int i = 0; i < n; ++i) grid.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    }
    const SweepResult r = sweep(p, kind, lambda, param, grid, cfg.mc);
    std::string csv = "param_value_m,fom_normalized,stderr\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      csv += csv_number(r.grid[i]) + "," + csv_number(r.fom_normalized[i]) + "," +
             csv_number(r.mc_errors[i]) + "\n";
    }
    const auto path = output_path(cfg, "sweep_" + r.param_name + ".csv");
    write_file(path, csv);
    log_line(opt, "wrote " + path.string());
    converged = converged && r.converged;
  }
  return exit_for(converged);
}

int cmd_exclusion(const RunConfig& cfg, const CommandOptions& opt) {
  const PotentialKind kind = kind_or_default(cfg);
  std::vector<std::string> names = cfg.presets;
  if (names.empty()) {
    if (requires_polarized_mass(kind)) {
      names = {"polarized-1um"};
    } else {
      names = {"unpolarized-50um", "unpolarized-5um", "unpolarized-0.5um"};
    }
  }
  std::vector<double> grid;
  if (cfg.lambda_grid) {
    grid = log_lambda_grid(cfg.lambda_grid->min, cfg.lambda_grid->max,
                           cfg.lambda_grid->points_per_decade);
  } else if (cfg.lambda) {
    grid = {*cfg.lambda};
  } else {
    grid = default_lambda_grid();
  }

  // Resolve every preset first so a bad one fails before any MC runs.
  std::vector<GeometryPreset> presets;
  for (const auto& n : names) presets.push_back(resolve_preset(cfg, n, kind, opt.force));

  bool converged = true;
  for (const auto& p : presets) {
    const ExclusionCurve c = exclusion_curve(kind, p, grid, cfg.mc);
    std::string csv = "lambda_m,f_min,f_min_stderr,field_per_coupling_T\n";
    for (std::size_t i = 0; i < c.lambda_grid.size(); ++i) {
      csv += csv_number(c.lambda_grid[i]) + "," + csv_number(c.f_min[i]) + "," +
             csv_number(c.f_min_stderr[i]) + "," + csv_number(c.field_per_coupling[i]) + "\n";
    }
    const auto path =
        output_path(cfg, "exclusion_" + std::string(kind_name(kind)) + "_" + p.name + ".csv");
    write_file(path, csv);
    std::size_t flagged = 0;
    for (bool f : c.flagged) flagged += f;
    log_line(opt, "wrote " + path.string() + " (" + std::to_string(flagged) +
                      " points above 5% relative error)");
    converged = converged && c.converged;
  }
  return exit_for(converged);
}

int cmd_systematics(const RunConfig& cfg, const CommandOptions& opt) {
  const PotentialKind kind = kind_or_default(cfg);
  const auto names = presets_or_default(cfg, kind);
  if (names.size() != 1) throw ConfigError("[geometry] preset: systematics takes a single preset");
  const GeometryPreset p = resolve_preset(cfg, names.front(), kind, opt.force);
  const BudgetAssumptions a = resolve_assumptions(cfg, kind);
  const SystematicsBudget b = budget(p, kind, a, cfg.mc);
  write_file(output_path(cfg, "budget.json"), to_json(b));
  write_file(output_path(cfg, "budget.txt"), budget_text(b));
  log_line(opt, "wrote budget.json and budget.txt in " + cfg.out_dir);
  return kExitOk;
}

int cmd_responsivity(const RunConfig& cfg, const CommandOptions& opt) {
  const double b0 = cfg.geometry.b0.value_or(10 * units::mT);
  std::string csv = "theta_deg,responsivity,signal_weighted\n";
  for (int i = 0; i <= 180; ++i) {
    const double deg = 0.5 * i;
    const double theta = deg * units::deg;
    csv += csv_number(deg) + "," + csv_number(nv_responsivity(b0, theta).value) + "," +
           csv_number(signal_weighted_responsivity(b0, theta)) + "\n";
  }
  const auto path = output_path(cfg, "responsivity.csv");
  write_file(path, csv);
  log_line(opt, "wrote " + path.string());
  return kExitOk;
}

int cmd_strayfield(const RunConfig& cfg, const CommandOptions& opt) {
  const PotentialKind kind = cfg.kind.value_or(PotentialKind::V6_7);
  const auto names = presets_or_default(cfg, kind);
  if (names.size() != 1) throw ConfigError("[geometry] preset: strayfield takes a single preset");
  const GeometryPreset p = resolve_preset(cfg, names.front(), kind, opt.force);
  const auto& g = p.geometry;
  if (!g.mass.spin) {
    throw ConfigError("[geometry] preset: strayfield needs a polarized test mass");
  }
  const double m = magnetization(g.mass.spin->polarized_density, g.mass.spin->nuclear_moment);
  std::vector<double> xs;
  const int n = 13;
  for (int i = 0; i < n; ++i) {
    xs.push_back(g.trajectory.amplitude * (2.0 * i / (n - 1) - 1.0));
  }
  const StrayFieldCurve c = stray_field_curve(g, m, xs, cfg.mc);
  std::string csv = "displacement_m,field_T,stderr_T\n";
  for (const auto& pt : c.points) {
    csv += csv_number(pt.displacement) + "," + csv_number(pt.field) + "," +
           csv_number(pt.std_error) + "\n";
  }
  const auto path = output_path(cfg, "strayfield_" + std::string(kind_name(kind)) + ".csv");
  write_file(path, csv);
  log_line(opt, "wrote " + path.string() + ": gradient " + csv_number(c.gradient) + " +- " +
                    csv_number(c.gradient_std_error) + " T/m");
  return kExitOk;
}

}  // namespace exospin::cli
