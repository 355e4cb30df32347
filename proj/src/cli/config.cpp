#include "exospin/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace exospin::cli {
namespace {

using units::um;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

struct Entry {
  std::string section, key, value;
  std::size_t line;
  std::string name() const { return "[" + section + "] " + key; }
};

[[noreturn]] void fail(const Entry& e, const std::string& why) {
  throw ConfigError("line " + std::to_string(e.line) + ": " + e.name() + ": " + why);
}

double as_double(const Entry& e) {
  const char* s = e.value.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (e.value.empty() || end != s + e.value.size() || !std::isfinite(v)) {
    fail(e, "expected a finite number, got '" + e.value + "'");
  }
  return v;
}

double positive(const Entry& e) {
  const double v = as_double(e);
  if (!(v > 0.0)) fail(e, e.key + " must be > 0");
  return v;
}

double non_negative(const Entry& e) {
  const double v = as_double(e);
  if (!(v >= 0.0)) fail(e, e.key + " must be >= 0");
  return v;
}

double unit_interval(const Entry& e) {
  const double v = as_double(e);
  if (!(v >= 0.0 && v <= 1.0)) fail(e, e.key + " must lie in [0, 1]");
  return v;
}

std::uint64_t as_count(const Entry& e) {
  std::uint64_t v = 0;
  const auto* b = e.value.data();
  const auto* end = b + e.value.size();
  const auto r = std::from_chars(b, end, v);
  if (e.value.empty() || r.ec != std::errc{} || r.ptr != end) {
    fail(e, "expected a non-negative integer, got '" + e.value + "'");
  }
  return v;
}

Vec3 as_direction(const Entry& e) {
  const auto parts = split(e.value, ',');
  if (parts.size() != 3) fail(e, "expected three comma-separated numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    Entry sub = e;
    sub.value = parts[i];
    v[i] = as_double(sub);
  }
  if (!(v.norm() > 0.0)) fail(e, e.key + " must be non-zero");
  return v.normalized();
}

using Handler = void (*)(RunConfig&, const Entry&);

const std::map<std::string, std::map<std::string, Handler>>& handlers() {
  static const std::map<std::string, std::map<std::string, Handler>> h = {
      {"geometry",
       {
           {"preset",
            [](RunConfig& c, const Entry& e) {
              c.presets.clear();
              for (const auto& p : split(e.value, ',')) {
                if (p.empty()) fail(e, "empty preset name");
                c.presets.push_back(p);
              }
              if (c.presets.empty()) fail(e, "empty preset name");
            }},
           {"d_nv_um", [](RunConfig& c, const Entry& e) { c.geometry.d_nv = positive(e) * um; }},
           {"r_nv_um", [](RunConfig& c, const Entry& e) { c.geometry.r_nv = positive(e) * um; }},
           {"d_tm_um", [](RunConfig& c, const Entry& e) { c.geometry.d_tm = positive(e) * um; }},
           {"r_tm_um", [](RunConfig& c, const Entry& e) { c.geometry.r_tm = positive(e) * um; }},
           {"d_gap_um",
            [](RunConfig& c, const Entry& e) { c.geometry.d_gap = positive(e) * um; }},
           {"rho_per_m3", [](RunConfig& c, const Entry& e) { c.geometry.rho = positive(e); }},
           {"sigma_nv",
            [](RunConfig& c, const Entry& e) { c.geometry.sigma_nv = as_direction(e); }},
           {"sigma_tm",
            [](RunConfig& c, const Entry& e) { c.geometry.sigma_tm = as_direction(e); }},
           {"theta_deg",
            [](RunConfig& c, const Entry& e) {
              const double t = as_double(e);
              if (t < 0.0 || t > 180.0) fail(e, "theta_deg must lie in [0, 180]");
              c.geometry.theta = t * units::deg;
            }},
           {"b0_mT",
            [](RunConfig& c, const Entry& e) { c.geometry.b0 = non_negative(e) * units::mT; }},
       }},
      {"trajectory",
       {
           {"d1_um", [](RunConfig& c, const Entry& e) { c.geometry.d1 = non_negative(e) * um; }},
           {"f_m_MHz",
            [](RunConfig& c, const Entry& e) { c.geometry.f_m = positive(e) * units::MHz; }},
           {"direction",
            [](RunConfig& c, const Entry& e) {
              const Vec3 d = as_direction(e);
              if (std::abs(d.z()) > 1e-12) {
                fail(e, "direction must be perpendicular to the cylinder axis (z = 0)");
              }
              c.geometry.direction = d;
            }},
       }},
      {"mc",
       {
           {"samples",
            [](RunConfig& c, const Entry& e) {
              c.mc.n_samples = as_count(e);
              if (c.mc.n_samples == 0) fail(e, "samples must be > 0");
            }},
           {"seed", [](RunConfig& c, const Entry& e) { c.mc.seed = as_count(e); }},
           {"phase_points",
            [](RunConfig& c, const Entry& e) {
              const auto n = as_count(e);
              if (n < 8 || n % 2 != 0 || n > 4096) fail(e, "phase_points must be even and >= 8");
              c.mc.n_phase_points = static_cast<int>(n);
            }},
           {"target_rel_se",
            [](RunConfig& c, const Entry& e) {
              const double v = as_double(e);
              if (!(v > 0.0 && v < 1.0)) fail(e, "target_rel_se must lie in (0, 1)");
              c.mc.target_rel_se = v;
            }},
           {"max_samples",
            [](RunConfig& c, const Entry& e) {
              c.mc.max_samples = as_count(e);
              if (c.mc.max_samples == 0) fail(e, "max_samples must be > 0");
            }},
       }},
      {"run",
       {
           {"kind",
            [](RunConfig& c, const Entry& e) {
              c.kind = parse_kind(e.value);
              if (!c.kind) fail(e, "unknown kind '" + e.value + "' (v4_5, v12_13, v6_7, v14, v15)");
            }},
           {"lambda_um", [](RunConfig& c, const Entry& e) { c.lambda = positive(e) * um; }},
           {"lambda_grid",
            [](RunConfig& c, const Entry& e) {
              const auto parts = split(e.value, ',');
              if (parts.size() != 3) fail(e, "lambda_grid expects min_um,max_um,points_per_decade");
              Entry sub = e;
              LambdaGridSpec g;
              sub.value = parts[0];
              g.min = positive(sub) * um;
              sub.value = parts[1];
              g.max = positive(sub) * um;
              sub.value = parts[2];
              const auto ppd = as_count(sub);
              if (ppd < 1 || ppd > 1000) fail(e, "lambda_grid points_per_decade must be >= 1");
              if (g.max < g.min) fail(e, "lambda_grid max must be >= min");
              g.points_per_decade = static_cast<int>(ppd);
              c.lambda_grid = g;
            }},
           {"t_s", [](RunConfig& c, const Entry& e) { c.t_s = positive(e); }},
           {"out_dir",
            [](RunConfig& c, const Entry& e) {
              if (e.value.empty()) fail(e, "out_dir must not be empty");
              c.out_dir = e.value;
            }},
       }},
      {"systematics",
       {
           {"sigma_c_uC_m2",
            [](RunConfig& c, const Entry& e) { c.systematics.sigma_c = non_negative(e) * 1e-6; }},
           {"e_perp_V_m",
            [](RunConfig& c, const Entry& e) { c.systematics.e_perp = as_double(e); }},
           {"e_par_V_m", [](RunConfig& c, const Entry& e) { c.systematics.e_par = as_double(e); }},
           {"shear_projection",
            [](RunConfig& c, const Entry& e) { c.systematics.shear_projection = unit_interval(e); }},
           {"charge_projection",
            [](RunConfig& c, const Entry& e) {
              c.systematics.charge_projection = unit_interval(e);
            }},
           {"delta_phi_rad",
            [](RunConfig& c, const Entry& e) {
              const double v = as_double(e);
              if (!(v >= 0.0 && v <= std::numbers::pi / 2)) {
                fail(e, "delta_phi_rad must lie in [0, pi/2]");
              }
              c.systematics.delta_phi = v;
            }},
           {"eps_r",
            [](RunConfig& c, const Entry& e) {
              const double v = as_double(e);
              if (!(v >= 1.0)) fail(e, "eps_r must be >= 1");
              c.systematics.eps_r = v;
            }},
           {"n_depol",
            [](RunConfig& c, const Entry& e) {
              const double v = as_double(e);
              if (!(v > 0.0 && v < 1.0)) fail(e, "n_depol must lie in (0, 1)");
              c.systematics.n_depol = v;
            }},
       }},
  };
  return h;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  std::set<std::string> seen;
  bool max_given = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!handlers().count(section)) {
        throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section +
                          "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    Entry e{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
    if (section.empty()) fail(e, "key '" + e.key + "' outside any section");
    const auto& keys = handlers().at(section);
    const auto it = keys.find(e.key);
    if (it == keys.end()) fail(e, "unknown key '" + e.key + "'");
    if (!seen.insert(e.name()).second) fail(e, "duplicate key '" + e.key + "'");
    it->second(cfg, e);
    if (section == "mc" && e.key == "max_samples") max_given = true;
  }
  if (!max_given) {
    cfg.mc.max_samples = std::max(cfg.mc.max_samples, cfg.mc.n_samples);
  } else if (cfg.mc.max_samples < cfg.mc.n_samples) {
    throw ConfigError("[mc] max_samples must be >= samples");
  }
  if (cfg.lambda && cfg.lambda_grid) {
    throw ConfigError("[run] lambda_um and lambda_grid are mutually exclusive");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

PotentialKind kind_or_default(const RunConfig& cfg) {
  return cfg.kind.value_or(PotentialKind::V12_13);
}

std::vector<std::string> presets_or_default(const RunConfig& cfg, PotentialKind kind) {
  if (!cfg.presets.empty()) return cfg.presets;
  return {default_preset_name(kind)};
}

GeometryPreset resolve_preset(const RunConfig& cfg, const std::string& name, PotentialKind kind,
                              bool force) {
  GeometryPreset p;
  try {
    p = preset(name);
  } catch (const UnknownPreset& e) {
    throw ConfigError(std::string("[geometry] preset: ") + e.what());
  }
  const bool needs = requires_polarized_mass(kind);
  if (needs && !p.geometry.mass.spin) {
    throw ConfigError("[geometry] preset: " + std::string(kind_name(kind)) +
                      " requires a polarized test mass; '" + name + "' is unpolarized");
  }
  if (!needs && p.geometry.mass.spin && !force) {
    throw ConfigError("[geometry] preset: potential does not require polarized mass ('" + name +
                      "' with " + std::string(kind_name(kind)) + "); pass --force to run anyway");
  }

  auto& g = p.geometry;
  g = oriented_for(kind, g);
  const auto& o = cfg.geometry;
  if (o.d_nv) g.sensor.thickness = *o.d_nv;
  if (o.r_nv) g.sensor.illum_radius = *o.r_nv;
  if (o.d_tm) g.mass.thickness = *o.d_tm;
  if (o.r_tm) g.mass.radius = *o.r_tm;
  if (o.d_gap) g.gap = *o.d_gap;
  if (o.rho) {
    if (needs) {
      g.mass.spin->polarized_density = *o.rho;
    } else {
      g.mass.nucleon_density = *o.rho;
    }
  }
  if (o.sigma_nv) g.sensor.sigma_nv = *o.sigma_nv;
  if (o.sigma_tm) {
    if (!g.mass.spin) {
      throw ConfigError("[geometry] sigma_tm: preset '" + name + "' has no polarized mass");
    }
    g.mass.spin->sigma_tm = *o.sigma_tm;
  }
  if (o.theta) g.bias_angle = *o.theta;
  if (o.b0) g.bias_field = *o.b0;
  if (o.d1) g.trajectory.amplitude = *o.d1;
  if (o.f_m) g.trajectory.frequency = *o.f_m;
  if (o.direction) g.trajectory.direction = *o.direction;
  if (cfg.t_s) p.measurement_time = *cfg.t_s;
  try {
    validate(g);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("[geometry] ") + e.what());
  }
  return p;
}

double lambda_or_target(const RunConfig& cfg, const GeometryPreset& p) {
  return cfg.lambda.value_or(p.target_lambda);
}

BudgetAssumptions resolve_assumptions(const RunConfig& cfg, PotentialKind kind) {
  BudgetAssumptions a = default_assumptions(kind);
  const auto& s = cfg.systematics;
  if (s.sigma_c) a.sigma_c = *s.sigma_c;
  if (s.e_perp) a.e_perp = *s.e_perp;
  if (s.e_par) a.e_par = *s.e_par;
  if (s.shear_projection) a.shear_projection = *s.shear_projection;
  if (s.charge_projection) a.charge_projection = *s.charge_projection;
  if (s.delta_phi) a.delta_phi = *s.delta_phi;
  if (s.eps_r) a.eps_r = *s.eps_r;
  if (s.n_depol) a.n_depol = *s.n_depol;
  if (cfg.t_s) a.t_total = *cfg.t_s;
  return a;
}

}  // namespace exospin::cli
