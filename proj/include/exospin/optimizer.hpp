#pragma once

// Geometry presets, figure-of-merit sweeps and exclusion curves.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exospin/core_model.hpp"
#include "exospin/mc_integrator.hpp"
#include "exospin/potentials.hpp"

namespace exospin {

struct GeometryPreset {
  std::string name;
  double target_lambda = 0.0;     // m
  ExperimentGeometry geometry;
  double measurement_time = 1e4;  // s, used for exclusion runs
};

/// Throws UnknownPreset.
GeometryPreset preset(std::string_view name);
std::vector<std::string> preset_names();

/// Default preset for a kind: "polarized-1um" for spin-spin kinds,
/// "unpolarized-5um" otherwise.
std::string default_preset_name(PotentialKind kind);

/// Sets sigma_nv, sigma_tm (when polarized), e_v and the bias angle to the
/// configuration in which `kind` gives its largest in-phase signal.
ExperimentGeometry oriented_for(PotentialKind kind, ExperimentGeometry geom);

enum class SweepParam { DNv, DTm, RTm, DGap, ANv };

std::string_view sweep_param_name(SweepParam p);
std::optional<SweepParam> parse_sweep_param(std::string_view name);

/// Small illumination spot used to emulate A_nv -> 0.
double small_spot_radius(double r_tm, double lambda);

/// Geometry with `param` set to `value`. For every parameter except A_nv the
/// spot is shrunk to small_spot_radius; for A_nv `value` is the spot radius.
ExperimentGeometry apply_sweep_value(ExperimentGeometry geom, SweepParam param, double value,
                                     double lambda);

struct SweepResult {
  std::string param_name;
  std::vector<double> grid;            // m
  std::vector<double> fom_normalized;  // peak = 1
  std::vector<double> mc_errors;       // on fom_normalized
  bool converged = true;
};

/// Grid must be strictly increasing with at least 5 points.
SweepResult sweep(const GeometryPreset& preset, PotentialKind kind, double lambda,
                  SweepParam param, const std::vector<double>& grid, const MCConfig& mc);

/// Default grid in multiples of lambda (or of m for A_nv), as in the optimization panels.
std::vector<double> default_sweep_grid(SweepParam param, double lambda);

struct AreaPenalty {
  double ratio = 1.0;
  double std_error = 0.0;
  bool converged = true;
};

/// Field amplitude at the small spot over the amplitude at the preset spot.
AreaPenalty area_penalty(const GeometryPreset& preset, PotentialKind kind, double lambda,
                         const MCConfig& mc);

struct ExclusionCurve {
  PotentialKind kind = PotentialKind::V12_13;
  std::string preset_name;
  std::vector<double> lambda_grid;         // m
  std::vector<double> f_min;
  std::vector<double> f_min_stderr;
  std::vector<double> field_per_coupling;  // T
  std::vector<bool> flagged;               // relative MC error above 5%
  double t_total = 0.0;
  bool converged = true;
};

ExclusionCurve exclusion_curve(PotentialKind kind, const GeometryPreset& preset,
                               const std::vector<double>& lambda_grid, const MCConfig& mc);

/// 20 points per decade over [0.1 um, 1 mm].
std::vector<double> default_lambda_grid();
std::vector<double> log_lambda_grid(double lo, double hi, int points_per_decade);

struct OverlayCurve {
  std::vector<double> lambda;
  std::vector<double> f;
};

/// Reads a "lambda_m,f" CSV. Throws ParseError carrying the line number.
OverlayCurve overlay_import(const std::string& path);
OverlayCurve overlay_parse(std::string_view text);

}  // namespace exospin
