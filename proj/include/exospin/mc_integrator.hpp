#pragma once

// Monte Carlo estimation of the NV-layer-averaged effective field per unit
// coupling, and of the magnetostatic stray field of a magnetized test mass.
//
// Pairs are (uniform NV point, uniform mass point). Every phase of the
// trajectory reuses the same pairs, only shifting the mass by its displacement
// at that phase, so phase differences carry little sampling noise.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "exospin/core_model.hpp"
#include "exospin/potentials.hpp"

namespace exospin {

struct MCConfig {
  std::uint64_t n_samples = 1u << 18;     // drawn before the first convergence check
  std::uint64_t seed = 20210301;
  int n_phase_points = 8;
  double target_rel_se = 0.01;
  std::uint64_t max_samples = 1ull << 26;
  unsigned threads = 0;                   // 0: hardware concurrency; never changes results
};

void validate(const MCConfig& mc);

struct PhaseValue {
  double phase = 0.0;
  double field_per_coupling = 0.0;  // T
  double std_error = 0.0;           // T
};

struct FieldEstimate {
  double amplitude_per_coupling = 0.0;  // cosine (velocity) quadrature, T
  double std_error = 0.0;
  std::vector<PhaseValue> per_phase_values;
  std::uint64_t seed_used = 0;
  std::uint64_t samples_used = 0;  // per phase
  bool converged = false;          // false: max_samples hit above target (NonConvergence)
};

struct PhaseEstimate {
  double field_per_coupling = 0.0;
  double std_error = 0.0;
  std::uint64_t samples_used = 0;
  bool converged = false;
};

/// Per-pair integrand in T m^3 per unit density; see potentials.hpp.
using PairKernel = std::function<double(const PairContext&)>;

/// Uniform point in the upright cylinder of the given radius spanning
/// [z_min, z_max], centred laterally on `lateral_center`.
Vec3 sample_cylinder(std::mt19937_64& rng, double radius, double z_min, double z_max,
                     const Vec3& lateral_center = Vec3::Zero());

/// Throws GeometryMismatch if `kind` needs a polarized mass the geometry lacks.
PhaseEstimate field_at_phase(const ExperimentGeometry& geom, PotentialKind kind, double lambda,
                             double phase, const MCConfig& mc,
                             const PhysicalConstants& k = kConstants);

FieldEstimate field_amplitude(const ExperimentGeometry& geom, PotentialKind kind, double lambda,
                              const MCConfig& mc, const PhysicalConstants& k = kConstants);

// Same estimators for an arbitrary kernel; `density` multiplies the kernel.
PhaseEstimate field_at_phase(const ExperimentGeometry& geom, const PairKernel& kernel,
                             double density, double lambda, double phase, const MCConfig& mc);
FieldEstimate field_amplitude(const ExperimentGeometry& geom, const PairKernel& kernel,
                              double density, double lambda, const MCConfig& mc);

struct StrayFieldEstimate {
  double displacement = 0.0;  // m along e_v
  double field = 0.0;         // sigma_nv . B averaged over the NV volume, T
  double std_error = 0.0;
};

struct StrayFieldCurve {
  std::vector<StrayFieldEstimate> points;
  double gradient = 0.0;      // dB/dx at x = 0, T/m
  double gradient_std_error = 0.0;
  std::uint64_t samples_used = 0;
};

/// Stray field of the test mass uniformly magnetized with |M| = magnetization
/// along sigma_tm. The point-dipole volume integral is evaluated through its
/// exact boundary form: the axial part of M as the rim surface current M x n,
/// the transverse part as the rim magnetic charge M . n. Uses exactly
/// mc.n_samples samples, shared by all displacements.
StrayFieldCurve dipole_stray_field(const ExperimentGeometry& geom, double magnetization,
                                   std::span<const double> displacements, const MCConfig& mc,
                                   const PhysicalConstants& k = kConstants);

StrayFieldEstimate dipole_stray_field(const ExperimentGeometry& geom, double magnetization,
                                      double displacement, const MCConfig& mc,
                                      const PhysicalConstants& k = kConstants);

/// Direct volume integral of the point-dipole field over the mass. Converges
/// only when the NV volume is well separated from the mass compared with the
/// mass size; kept as an independent check of the boundary form.
StrayFieldEstimate dipole_stray_field_volume(const ExperimentGeometry& geom,
                                             double magnetization, double displacement,
                                             const MCConfig& mc,
                                             const PhysicalConstants& k = kConstants);

/// Step used for the central-difference gradient of the stray-field curve.
inline constexpr double kStrayGradientStep = 0.1e-6;

}  // namespace exospin
