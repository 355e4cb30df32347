#pragma once

// Physical constants, geometry types and test-mass kinematics.
//
// Coordinates: z is the cylinder axis, normal to the diamond surface. The NV
// layer fills -d_nv <= z <= 0 within R_nv of the origin. The test mass fills
// d_gap <= z <= d_gap + d_tm within R_tm of its centre, which sits at x(t) e_v
// laterally. All quantities are SI.

#include <numbers>
#include <optional>

#include <Eigen/Dense>

namespace exospin {

using Vec3 = Eigen::Vector3d;

namespace units {
inline constexpr double um = 1e-6;
inline constexpr double nm = 1e-9;
inline constexpr double MHz = 1e6;
inline constexpr double kHz = 1e3;
inline constexpr double mT = 1e-3;
inline constexpr double pT = 1e-12;
inline constexpr double fT = 1e-15;
inline constexpr double deg = std::numbers::pi / 180.0;
}  // namespace units

struct PhysicalConstants {
  double hbar = 1.054571817e-34;     // J s
  double c = 299792458.0;            // m/s
  double m_e = 9.1093837015e-31;     // kg
  double m_N = 1.6749e-27;           // kg, neutron mass used as the nucleon mass
  double gamma_nv = 28.03e9;         // Hz/T
  double mu0 = 1.25663706212e-6;     // T m/A
  double eps0 = 8.8541878128e-12;    // F/m
  double k_B = 1.380649e-23;         // J/K
  double mu_13C = 3.5e-27;           // J/T
  double d_parallel = 3.5e-3;        // Hz per V/m
  double d_perp = 0.17;              // Hz per V/m
  double stress_coupling = 21e-3;    // Hz/Pa
  double mu_air = 1.8e-5;            // Pa s
  double D_zfs = 2.87e9;             // Hz
};

inline constexpr PhysicalConstants kConstants{};

struct SpinPolarization {
  double polarized_density = 0.0;  // rho_s, m^-3
  Vec3 sigma_tm = Vec3::UnitZ();
  double nuclear_moment = 0.0;     // J/T
};

struct TestMass {
  double radius = 0.0;             // R_tm
  double thickness = 0.0;          // d_tm
  double nucleon_density = 0.0;    // rho, m^-3
  std::optional<SpinPolarization> spin;
};

struct SensorLayer {
  double thickness = 0.0;          // d_nv
  double illum_radius = 0.0;       // R_nv
  Vec3 sigma_nv = Vec3::UnitX();
  double nv_density = 0.0;         // n, m^-3
  double contrast = 0.0;           // C
  double photon_prob = 0.0;        // eta
  double duty = 0.0;               // delta
  double phase_time = 0.0;         // tau_tot, s
};

struct Trajectory {
  double amplitude = 0.0;          // d1
  double frequency = 0.0;          // f_m
  Vec3 direction = Vec3::UnitX();  // e_v
};

struct ExperimentGeometry {
  SensorLayer sensor;
  TestMass mass;
  double gap = 0.0;                // d_gap
  Trajectory trajectory;
  double bias_field = 0.0;         // B0, T
  double bias_angle = 0.0;         // theta between B0 and sigma_nv, rad
};

// Each validate() throws InvalidArgument naming the first violated invariant.
void validate(const TestMass& mass);
void validate(const SensorLayer& sensor);
void validate(const Trajectory& trajectory);
void validate(const ExperimentGeometry& geometry);

bool is_unit(const Vec3& v, double tol = 1e-12);

double peak_velocity(const Trajectory& trajectory);

/// cos(phase) with the quarter-period points snapped to exact zero, so that the
/// velocity, and every field that is linear in it, vanishes exactly there.
double velocity_phase_factor(double phase);

Vec3 velocity_at_phase(const Trajectory& trajectory, double phase);
Vec3 displacement_at_phase(const Trajectory& trajectory, double phase);

double sensing_volume(const SensorLayer& sensor);
double mass_volume(const TestMass& mass);

}  // namespace exospin
