#include "exospin/systematics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "exospin/errors.hpp"
#include "exospin/sensitivity.hpp"

namespace exospin {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

ShearResult shear_stress(double v, double d_gap, double projection, const PhysicalConstants& k) {
  require(d_gap > 0.0, "d_gap must be > 0");
  require(projection >= 0.0 && projection <= 1.0, "shear projection must lie in [0, 1]");
  ShearResult r;
  r.tau = k.mu_air * v / d_gap * projection;
  r.df = r.tau * k.stress_coupling;
  r.b_equiv = std::abs(r.df) / k.gamma_nv;
  return r;
}

StarkResult stark_shift(double e_par, double e_perp, double b_par, const PhysicalConstants& k) {
  require(b_par >= 0.0, "B_par must be >= 0");
  const double a = k.gamma_nv * b_par;
  const double b = k.d_perp * e_perp;
  // sqrt(a^2 + b^2) - a without cancellation
  const double split = b == 0.0 ? 0.0 : b * b / (std::hypot(a, b) + a);
  StarkResult r;
  r.df_plus = k.d_parallel * e_par + split;
  r.df_minus = k.d_parallel * e_par - split;
  r.b_equiv = std::abs(r.df_plus) / k.gamma_nv;
  return r;
}

double sheet_current_field(double sigma_c, double v, const PhysicalConstants& k) {
  return 0.5 * k.mu0 * sigma_c * v;
}

double surface_charge_field(double sigma_c, double v, double r_tm, double d_gap,
                            const PhysicalConstants& k) {
  require(sigma_c >= 0.0 && v >= 0.0 && r_tm >= 0.0, "surface charge inputs must be >= 0");
  require(d_gap > 0.0, "d_gap must be > 0");
  if (std::isinf(d_gap)) return 0.0;
  const double s = std::hypot(r_tm, d_gap);
  // 1 - d/s = R^2 / (s (s + d))
  return sheet_current_field(sigma_c, v, k) * r_tm * r_tm / (s * (s + d_gap));
}

double breakdown_sigma(double e_breakdown, const PhysicalConstants& k) {
  require(e_breakdown >= 0.0, "breakdown field must be >= 0");
  return 2.0 * k.eps0 * e_breakdown;
}

DielectricResult dielectric_motion(double eps_r, double n_depol, double v, double b0,
                                   const PhysicalConstants& k) {
  require(eps_r >= 1.0, "eps_r must be >= 1");
  require(n_depol > 0.0 && n_depol < 1.0, "depolarization factor must lie in (0, 1)");
  const double chi = eps_r - 1.0;
  DielectricResult r;
  r.sigma_c = chi * k.eps0 / (1.0 + n_depol * chi) * std::abs(v * b0);
  r.field_bound = sheet_current_field(r.sigma_c, std::abs(v), k);
  return r;
}

double magnetization(double rho_s, double mu_nuc) {
  require(rho_s >= 0.0 && mu_nuc >= 0.0, "magnetization inputs must be >= 0");
  return rho_s * mu_nuc;
}

ThermalPolarization thermal_polarization(double number_density, double mu_nuc, double b,
                                         double temperature, const PhysicalConstants& k) {
  require(temperature > 0.0, "temperature must be > 0");
  ThermalPolarization r;
  r.rho_pol = number_density * std::tanh(mu_nuc * b / (k.k_B * temperature));
  r.m = r.rho_pol * mu_nuc;
  return r;
}

double phase_error_suppression(double delta_phi) {
  require(delta_phi >= 0.0 && delta_phi <= std::numbers::pi / 2, "delta_phi must lie in [0, pi/2]");
  return 2.0 * delta_phi / std::numbers::pi;
}

StrayFieldCurve stray_field_curve(const ExperimentGeometry& geom, double m,
                                  std::span<const double> displacements, const MCConfig& mc) {
  return dipole_stray_field(geom, m, displacements, mc);
}

BudgetAssumptions default_assumptions(PotentialKind kind) {
  BudgetAssumptions a;
  a.sigma_c = breakdown_sigma(3e6);
  a.e_perp = 1e3;
  a.e_par = 0.0;
  a.delta_phi = 0.9 * units::deg;
  a.eps_r = 5.5;
  a.n_depol = 1.0 / 3.0;
  switch (kind) {
    case PotentialKind::V12_13:
      a.shear_projection = 1.0;
      a.charge_projection = 0.0;
      break;
    case PotentialKind::V6_7:
      a.shear_projection = 0.0;
      a.charge_projection = 0.0;
      break;
    case PotentialKind::V4_5:
      a.shear_projection = 0.0;
      a.charge_projection = 1.0;
      break;
    case PotentialKind::V14:
    case PotentialKind::V15:
      a.shear_projection = 1.0;
      a.charge_projection = 1.0;
      break;
  }
  return a;
}

SystematicsBudget budget(const GeometryPreset& p, [[maybe_unused]] PotentialKind kind,
                         const BudgetAssumptions& a, const MCConfig& mc) {
  require(a.charge_projection >= 0.0 && a.charge_projection <= 1.0,
          "charge projection must lie in [0, 1]");
  require(a.sigma_c >= 0.0, "sigma_c must be >= 0");
  const ExperimentGeometry& g = p.geometry;
  const double v = peak_velocity(g.trajectory);
  const double db = delta_b_min(g.sensor, a.t_total).delta_b_min;

  SystematicsBudget b;
  b.geometry_ref = p.name;
  auto add = [&](std::string name, double field, std::optional<double> df, std::string mit) {
    b.entries.push_back({std::move(name), field, df, std::move(mit), field / db});
  };

  const auto shear = shear_stress(v, g.gap, a.shear_projection);
  add("shear_stress", shear.b_equiv, shear.df,
      "operate in vacuum (1e-4 bar or lower) or alternate the m_s=0<->+1 and 0<->-1 "
      "transitions, which cancels the common stress shift");

  const auto stark =
      stark_shift(a.e_par, a.e_perp, g.bias_field * std::abs(std::cos(g.bias_angle)));
  add("stark_shift", stark.b_equiv, stark.df_plus,
      "phase-sensitive detection rejects fields in phase with displacement; alternating "
      "both transitions removes the d_par E_par term");

  const double sc =
      a.charge_projection * surface_charge_field(a.sigma_c, v, g.mass.radius, g.gap);
  add("surface_charge", sc, std::nullopt,
      "coat the test mass with a low-affinity triboelectric layer, neutralize the gas, or "
      "shrink R_tm / widen d_gap");

  const auto diel = dielectric_motion(a.eps_r, a.n_depol, v, g.bias_field);
  add("dielectric_motion", a.charge_projection * diel.field_bound, std::nullopt,
      "none needed below 1 fT");

  double stray = 0.0;
  std::string mit = "unpolarized test mass, no magnetization";
  if (g.mass.spin) {
    const double m = magnetization(g.mass.spin->polarized_density, g.mass.spin->nuclear_moment);
    const double xs[] = {0.0};
    const auto curve = stray_field_curve(g, m, xs, mc);
    stray = std::abs(curve.gradient) * g.trajectory.amplitude;
    const double supp = phase_error_suppression(a.delta_phi);
    mit = "displacement quadrature; phase error " + fmt("%.4g", a.delta_phi) +
          " rad suppresses it by 2dphi/pi = " + fmt("%.4g", supp) + " to " +
          fmt("%.3e", stray * supp) +
          " T; counter-polarize test-mass NV spins to cancel M";
  }
  add("magnetization", stray, std::nullopt, mit);
  return b;
}

std::string budget_text(const SystematicsBudget& b) {
  std::string out = "systematics budget for " + b.geometry_ref + "\n";
  char line[512];
  std::snprintf(line, sizeof line, "%-18s %-15s %-15s %-15s %s\n", "entry", "field_T",
                "shift_Hz", "ratio_dBmin", "mitigation");
  out += line;
  for (const auto& e : b.entries) {
    const std::string shift = e.frequency_shift ? fmt("%.6e", *e.frequency_shift) : "-";
    std::snprintf(line, sizeof line, "%-18s %-15.6e %-15s %-15.6e %s\n", e.name.c_str(),
                  e.spurious_field, shift.c_str(), e.ratio_to_delta_b_min,
                  e.mitigations.c_str());
    out += line;
  }
  return out;
}

}  // namespace exospin
