#include "exospin/core_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "exospin/errors.hpp"

namespace exospin {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

bool is_unit(const Vec3& v, double tol) {
  return v.allFinite() && std::abs(v.norm() - 1.0) <= tol;
}

void validate(const TestMass& mass) {
  require(finite_positive(mass.radius), "test mass radius must be > 0");
  require(finite_positive(mass.thickness), "test mass thickness must be > 0");
  require(finite_positive(mass.nucleon_density), "nucleon density must be > 0");
  if (mass.spin) {
    require(finite_positive(mass.spin->polarized_density), "polarized spin density must be > 0");
    require(is_unit(mass.spin->sigma_tm), "sigma_tm must be a unit vector");
    require(std::isfinite(mass.spin->nuclear_moment) && mass.spin->nuclear_moment >= 0.0,
            "nuclear moment must be >= 0");
  }
}

void validate(const SensorLayer& s) {
  require(finite_positive(s.thickness), "NV layer thickness must be > 0");
  require(finite_positive(s.illum_radius), "illumination radius must be > 0");
  require(is_unit(s.sigma_nv), "sigma_nv must be a unit vector");
  require(finite_positive(s.nv_density), "NV density must be > 0");
  require(s.contrast > 0.0 && s.contrast < 1.0, "contrast must lie in (0, 1)");
  require(s.photon_prob > 0.0 && s.photon_prob <= 1.0, "photon probability must lie in (0, 1]");
  require(s.duty > 0.0 && s.duty <= 1.0, "duty cycle must lie in (0, 1]");
  require(finite_positive(s.phase_time), "phase accumulation time must be > 0");
}

void validate(const Trajectory& t) {
  require(std::isfinite(t.amplitude) && t.amplitude >= 0.0, "displacement amplitude must be >= 0");
  require(finite_positive(t.frequency), "modulation frequency must be > 0");
  require(is_unit(t.direction), "trajectory direction must be a unit vector");
}

void validate(const ExperimentGeometry& g) {
  validate(g.sensor);
  validate(g.mass);
  validate(g.trajectory);
  require(finite_positive(g.gap), "gap must be > 0");
  // Lateral motion keeps the faces parallel, so a positive gap rules out overlap.
  require(std::abs(g.trajectory.direction.z()) <= 1e-12,
          "trajectory direction must be perpendicular to the cylinder axis");
  require(std::isfinite(g.bias_field) && g.bias_field >= 0.0, "bias field must be >= 0");
  require(std::isfinite(g.bias_angle), "bias angle must be finite");
}

double peak_velocity(const Trajectory& t) {
  return 2.0 * std::numbers::pi * t.frequency * t.amplitude;
}

double velocity_phase_factor(double phase) {
  const double c = std::cos(phase);
  return std::abs(c) < 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(phase))
             ? 0.0
             : c;
}

Vec3 velocity_at_phase(const Trajectory& t, double phase) {
  return peak_velocity(t) * velocity_phase_factor(phase) * t.direction;
}

Vec3 displacement_at_phase(const Trajectory& t, double phase) {
  return t.amplitude * std::sin(phase) * t.direction;
}

double sensing_volume(const SensorLayer& s) {
  return std::numbers::pi * s.illum_radius * s.illum_radius * s.thickness;
}

double mass_volume(const TestMass& m) {
  return std::numbers::pi * m.radius * m.radius * m.thickness;
}

}  // namespace exospin
