#pragma once

// INI-style run configuration. Sections in brackets, one `key = value` per
// line, '#' or ';' starts a comment. Unknown sections or keys are rejected.
// Lengths are in um, frequencies in MHz, fields in mT as the key names say.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exospin/core_model.hpp"
#include "exospin/errors.hpp"
#include "exospin/mc_integrator.hpp"
#include "exospin/optimizer.hpp"
#include "exospin/potentials.hpp"
#include "exospin/systematics.hpp"

namespace exospin::cli {

/// Config problem; the message always names the offending key or section.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct GeometryOverrides {
  std::optional<double> d_nv, r_nv, d_tm, r_tm, d_gap;  // m
  std::optional<double> rho;                            // m^-3
  std::optional<Vec3> sigma_nv, sigma_tm;
  std::optional<double> theta;                          // rad
  std::optional<double> b0;                             // T
  std::optional<double> d1;                             // m
  std::optional<double> f_m;                            // Hz
  std::optional<Vec3> direction;
};

struct LambdaGridSpec {
  double min = 0.0;  // m
  double max = 0.0;
  int points_per_decade = 20;
};

struct SystematicsOverrides {
  std::optional<double> sigma_c;  // C/m^2
  std::optional<double> e_perp, e_par;
  std::optional<double> shear_projection, charge_projection;
  std::optional<double> delta_phi;
  std::optional<double> eps_r, n_depol;
};

struct RunConfig {
  std::vector<std::string> presets;  // empty: default for the kind
  GeometryOverrides geometry;
  std::optional<PotentialKind> kind;
  std::optional<double> lambda;      // m
  std::optional<LambdaGridSpec> lambda_grid;
  std::optional<double> t_s;
  MCConfig mc;
  std::string out_dir = ".";
  SystematicsOverrides systematics;
};

/// Throws ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

PotentialKind kind_or_default(const RunConfig& cfg);

/// Preset names to run: the configured list or the default for the kind.
std::vector<std::string> presets_or_default(const RunConfig& cfg, PotentialKind kind);

/// Preset for `name`, oriented for `kind`, with overrides and t_s applied.
/// Throws ConfigError on an unknown preset, a polarized preset paired with a
/// kind that does not need one (unless `force`), or an invalid result.
GeometryPreset resolve_preset(const RunConfig& cfg, const std::string& name, PotentialKind kind,
                              bool force);

/// Preset target lambda unless [run] lambda_um is set.
double lambda_or_target(const RunConfig& cfg, const GeometryPreset& p);

BudgetAssumptions resolve_assumptions(const RunConfig& cfg, PotentialKind kind);

}  // namespace exospin::cli
