#pragma once

// Closed-form spurious-signal estimators and the systematics budget.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exospin/core_model.hpp"
#include "exospin/mc_integrator.hpp"
#include "exospin/optimizer.hpp"
#include "exospin/potentials.hpp"

namespace exospin {

struct ShearResult {
  double tau = 0.0;      // Pa
  double df = 0.0;       // Hz
  double b_equiv = 0.0;  // T, single-transition monitoring
};

/// tau = mu_air v / d_gap * projection.
ShearResult shear_stress(double v, double d_gap, double projection,
                         const PhysicalConstants& k = kConstants);

struct StarkResult {
  double df_plus = 0.0;   // Hz, relative to E = 0
  double df_minus = 0.0;
  double b_equiv = 0.0;   // |df_plus| / gamma
};

/// f+- = d_par E_par +- sqrt((gamma B_par)^2 + (d_perp E_perp)^2).
StarkResult stark_shift(double e_par, double e_perp, double b_par,
                        const PhysicalConstants& k = kConstants);

/// Field of a uniformly charged disc of radius R_tm moving at v, seen at
/// distance d_gap on its axis: (mu0 sigma v / 2)(1 - d/sqrt(R^2 + d^2)).
double surface_charge_field(double sigma_c, double v, double r_tm, double d_gap,
                            const PhysicalConstants& k = kConstants);

/// Infinite-sheet limit mu0 sigma v / 2.
double sheet_current_field(double sigma_c, double v, const PhysicalConstants& k = kConstants);

/// sigma = 2 eps0 E.
double breakdown_sigma(double e_breakdown, const PhysicalConstants& k = kConstants);

struct DielectricResult {
  double sigma_c = 0.0;      // C/m^2
  double field_bound = 0.0;  // T
};

/// Polarization charge of a dielectric moving through B0 with v perpendicular to B0.
DielectricResult dielectric_motion(double eps_r, double n_depol, double v, double b0,
                                   const PhysicalConstants& k = kConstants);

/// M = rho_s mu.
double magnetization(double rho_s, double mu_nuc);

struct ThermalPolarization {
  double rho_pol = 0.0;  // m^-3
  double m = 0.0;        // A/m
};

/// Spin-1/2 Boltzmann estimate rho_pol = N tanh(mu B / k_B T).
ThermalPolarization thermal_polarization(double number_density, double mu_nuc, double b,
                                         double temperature,
                                         const PhysicalConstants& k = kConstants);

/// 2 delta_phi / pi.
double phase_error_suppression(double delta_phi);

/// Throws GeometryMismatch when the geometry has no polarized mass.
StrayFieldCurve stray_field_curve(const ExperimentGeometry& geom, double m,
                                  std::span<const double> displacements, const MCConfig& mc);

struct BudgetAssumptions {
  double sigma_c = 0.0;            // C/m^2
  double e_perp = 0.0;             // V/m
  double e_par = 0.0;              // V/m
  double shear_projection = 0.0;   // stress share along the NV axis
  double charge_projection = 0.0;  // share of the sheet-current field along sigma_nv
  double delta_phi = 0.0;          // rad
  double eps_r = 1.0;
  double n_depol = 1.0 / 3.0;
  double t_total = 1e4;            // s
};

/// Worst-case defaults: air-breakdown surface charge, E_perp = 1 kV/m,
/// eps_r of diamond, 0.9 degree phase error. Projections depend on which
/// field components lie along sigma_nv for the kind's orientation.
BudgetAssumptions default_assumptions(PotentialKind kind);

struct BudgetEntry {
  std::string name;
  double spurious_field = 0.0;            // T
  std::optional<double> frequency_shift;  // Hz
  std::string mitigations;
  double ratio_to_delta_b_min = 0.0;
};

struct SystematicsBudget {
  std::vector<BudgetEntry> entries;
  std::string geometry_ref;
};

/// Uses preset.geometry as given; pass it through oriented_for() first for the
/// canonical orientation of `kind`.
SystematicsBudget budget(const GeometryPreset& preset, PotentialKind kind,
                         const BudgetAssumptions& a, const MCConfig& mc);

/// Fixed-width text table, one row per entry.
std::string budget_text(const SystematicsBudget& b);

}  // namespace exospin
