#include "exospin/optimizer.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "exospin/errors.hpp"
#include "exospin/sensitivity.hpp"

namespace exospin {
namespace {

using namespace units;

SensorLayer paper_sensor(double d_nv) {
  SensorLayer s;
  s.thickness = d_nv;
  s.illum_radius = 25 * um;
  s.sigma_nv = Vec3::UnitX();
  s.nv_density = 1e24;  // 1e6 per um^3
  s.contrast = 0.03;
  s.photon_prob = 0.05;
  s.duty = 0.8;
  s.phase_time = 17e-6;
  return s;
}

Trajectory paper_trajectory() {
  Trajectory t;
  t.amplitude = 0.75 * um;
  t.frequency = 1 * MHz;
  t.direction = Vec3::UnitX();
  return t;
}

GeometryPreset unpolarized(std::string name, double lambda, double d_nv, double d_gap) {
  GeometryPreset p;
  p.name = std::move(name);
  p.target_lambda = lambda;
  p.geometry.sensor = paper_sensor(d_nv);
  p.geometry.mass.radius = 150 * um;
  p.geometry.mass.thickness = 100 * um;
  p.geometry.mass.nucleon_density = 1.6e30;
  p.geometry.gap = d_gap;
  p.geometry.trajectory = paper_trajectory();
  p.geometry.bias_field = 10 * mT;
  p.geometry.bias_angle = 0.0;
  return p;
}

GeometryPreset polarized_1um() {
  GeometryPreset p;
  p.name = "polarized-1um";
  p.target_lambda = 1 * um;
  p.geometry.sensor = paper_sensor(1.25 * um);
  p.geometry.mass.radius = 150 * um;
  p.geometry.mass.thickness = 2 * um;
  p.geometry.mass.nucleon_density = 2.114e30;  // diamond, 3.51 g/cm^3
  p.geometry.mass.spin = SpinPolarization{5e25, Vec3::UnitZ(), 3.5e-27};
  p.geometry.gap = 0.5 * um;
  p.geometry.trajectory = paper_trajectory();
  p.geometry.bias_field = 10 * mT;
  p.geometry.bias_angle = 80 * deg;
  return p;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& field, std::size_t line, const char* what) {
  const std::string t = trim(field);
  if (t.empty()) throw ParseError(std::string("empty ") + what + " field", line);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw ParseError(std::string("non-numeric ") + what + " field '" + t + "'", line);
  }
  return v;
}

}  // namespace

GeometryPreset preset(std::string_view name) {
  if (name == "unpolarized-50um") return unpolarized("unpolarized-50um", 50 * um, 62.5 * um, 5 * um);
  if (name == "unpolarized-5um") return unpolarized("unpolarized-5um", 5 * um, 6.25 * um, 0.5 * um);
  if (name == "unpolarized-0.5um") {
    return unpolarized("unpolarized-0.5um", 0.5 * um, 0.625 * um, 0.2 * um);
  }
  if (name == "polarized-1um") return polarized_1um();
  throw UnknownPreset("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"unpolarized-50um", "unpolarized-5um", "unpolarized-0.5um", "polarized-1um"};
}

std::string default_preset_name(PotentialKind kind) {
  return requires_polarized_mass(kind) ? "polarized-1um" : "unpolarized-5um";
}

ExperimentGeometry oriented_for(PotentialKind kind, ExperimentGeometry g) {
  const Vec3 x = Vec3::UnitX(), y = Vec3::UnitY(), z = Vec3::UnitZ();
  switch (kind) {
    case PotentialKind::V12_13:
      g.sensor.sigma_nv = x;
      g.trajectory.direction = x;
      break;
    case PotentialKind::V4_5:
      // sigma_nv . (v x r_hat) with r_hat mostly along z.
      g.sensor.sigma_nv = y;
      g.trajectory.direction = x;
      break;
    case PotentialKind::V6_7:
      g.sensor.sigma_nv = x;
      g.trajectory.direction = x;
      break;
    case PotentialKind::V14:
    case PotentialKind::V15:
      g.sensor.sigma_nv = x;
      g.trajectory.direction = y;
      break;
  }
  if (g.mass.spin) {
    g.mass.spin->sigma_tm = z;
    g.bias_angle = 80 * deg;
  } else {
    g.bias_angle = 0.0;
  }
  return g;
}

std::string_view sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::DNv: return "d_nv";
    case SweepParam::DTm: return "d_tm";
    case SweepParam::RTm: return "R_tm";
    case SweepParam::DGap: return "d_gap";
    case SweepParam::ANv: return "A_nv";
  }
  return "";
}

std::optional<SweepParam> parse_sweep_param(std::string_view name) {
  for (auto p : {SweepParam::DNv, SweepParam::DTm, SweepParam::RTm, SweepParam::DGap,
                 SweepParam::ANv}) {
    if (sweep_param_name(p) == name) return p;
  }
  return std::nullopt;
}

double small_spot_radius(double r_tm, double lambda) {
  return std::min(0.05 * r_tm, 0.05 * lambda);
}

ExperimentGeometry apply_sweep_value(ExperimentGeometry g, SweepParam param, double value,
                                     double lambda) {
  switch (param) {
    case SweepParam::DNv: g.sensor.thickness = value; break;
    case SweepParam::DTm: g.mass.thickness = value; break;
    case SweepParam::RTm: g.mass.radius = value; break;
    case SweepParam::DGap: g.gap = value; break;
    case SweepParam::ANv: g.sensor.illum_radius = value; return g;
  }
  g.sensor.illum_radius = small_spot_radius(g.mass.radius, lambda);
  return g;
}

std::vector<double> default_sweep_grid(SweepParam param, double lambda) {
  std::vector<double> mult;
  switch (param) {
    case SweepParam::DNv: mult = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 5.0}; break;
    case SweepParam::DTm: mult = {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0}; break;
    case SweepParam::RTm: mult = {0.5, 1.0, 2.0, 3.0, 5.0, 9.0, 20.0}; break;
    case SweepParam::DGap: mult = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0}; break;
    case SweepParam::ANv: return {1 * um, 2 * um, 5 * um, 10 * um, 25 * um, 50 * um};
  }
  for (double& m : mult) m *= lambda;
  return mult;
}

SweepResult sweep(const GeometryPreset& p, PotentialKind kind, double lambda, SweepParam param,
                  const std::vector<double>& grid, const MCConfig& mc) {
  if (grid.size() < 5) throw InvalidArgument("sweep grid needs at least 5 points");
  if (!strictly_increasing(grid)) throw InvalidArgument("sweep grid must be strictly increasing");
  const ExperimentGeometry base = oriented_for(kind, p.geometry);

  SweepResult out;
  out.param_name = std::string(sweep_param_name(param));
  out.grid = grid;
  std::vector<double> fom, se;
  for (double value : grid) {
    const auto g = apply_sweep_value(base, param, value, lambda);
    const auto f = figure_of_merit(g, kind, lambda, mc, p.measurement_time);
    fom.push_back(std::abs(f.value));
    se.push_back(f.std_error);
    out.converged = out.converged && f.converged;
  }
  const double peak = *std::max_element(fom.begin(), fom.end());
  for (std::size_t i = 0; i < fom.size(); ++i) {
    out.fom_normalized.push_back(peak > 0.0 ? fom[i] / peak : 0.0);
    out.mc_errors.push_back(peak > 0.0 ? se[i] / peak : 0.0);
  }
  return out;
}

AreaPenalty area_penalty(const GeometryPreset& p, PotentialKind kind, double lambda,
                         const MCConfig& mc) {
  const ExperimentGeometry wide = oriented_for(kind, p.geometry);
  ExperimentGeometry narrow = wide;
  narrow.sensor.illum_radius = 0.05 * wide.mass.radius;
  const auto a = field_amplitude(narrow, kind, lambda, mc);
  const auto b = field_amplitude(wide, kind, lambda, mc);
  AreaPenalty r;
  r.ratio = a.amplitude_per_coupling / b.amplitude_per_coupling;
  r.std_error = std::abs(r.ratio) * std::hypot(a.std_error / a.amplitude_per_coupling,
                                               b.std_error / b.amplitude_per_coupling);
  r.converged = a.converged && b.converged;
  return r;
}

ExclusionCurve exclusion_curve(PotentialKind kind, const GeometryPreset& p,
                               const std::vector<double>& lambda_grid, const MCConfig& mc) {
  if (lambda_grid.empty()) throw InvalidArgument("lambda grid is empty");
  if (lambda_grid.front() <= 0.0 || !strictly_increasing(lambda_grid)) {
    throw InvalidArgument("lambda grid must be positive and ascending");
  }
  const ExperimentGeometry g = oriented_for(kind, p.geometry);
  const double db = delta_b_min(g.sensor, p.measurement_time).delta_b_min;

  ExclusionCurve c;
  c.kind = kind;
  c.preset_name = p.name;
  c.lambda_grid = lambda_grid;
  c.t_total = p.measurement_time;
  for (double lambda : lambda_grid) {
    const auto f = field_amplitude(g, kind, lambda, mc);
    const double a = std::abs(f.amplitude_per_coupling);
    const double fmin = db / a;
    const double rel = a > 0.0 ? f.std_error / a : INFINITY;
    c.field_per_coupling.push_back(a);
    c.f_min.push_back(fmin);
    c.f_min_stderr.push_back(fmin * rel);
    c.flagged.push_back(!(rel <= 0.05));
    c.converged = c.converged && f.converged;
  }
  return c;
}

std::vector<double> log_lambda_grid(double lo, double hi, int points_per_decade) {
  if (!(lo > 0.0 && hi >= lo) || points_per_decade < 1) {
    throw InvalidArgument("lambda_grid needs 0 < min <= max and points_per_decade >= 1");
  }
  const double decades = std::log10(hi / lo);
  const int n = static_cast<int>(std::lround(decades * points_per_decade));
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) {
    g.push_back(lo * std::pow(10.0, static_cast<double>(i) / points_per_decade));
  }
  if (n > 0) g.back() = hi;
  return g;
}

std::vector<double> default_lambda_grid() { return log_lambda_grid(0.1 * um, 1e-3, 20); }

OverlayCurve overlay_parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty overlay file, expected header lambda_m,f", 1);
  ++lineno;
  if (trim(line) != "lambda_m,f") {
    throw ParseError("expected header 'lambda_m,f', got '" + trim(line) + "'", lineno);
  }
  OverlayCurve c;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError("expected two comma-separated fields", lineno);
    }
    const double lambda = parse_number(line.substr(0, comma), lineno, "lambda_m");
    const double f = parse_number(line.substr(comma + 1), lineno, "f");
    if (!(lambda > 0.0)) throw ParseError("lambda_m must be > 0", lineno);
    c.lambda.push_back(lambda);
    c.f.push_back(f);
  }
  return c;
}

OverlayCurve overlay_import(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open overlay file " + path, 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return overlay_parse(ss.str());
}

}  // namespace exospin
