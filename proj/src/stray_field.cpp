#include <cmath>
#include <numbers>
#include <vector>

#include "exospin/detail/mc_engine.hpp"
#include "exospin/errors.hpp"
#include "exospin/mc_integrator.hpp"

namespace exospin {
namespace {

constexpr std::uint32_t kRimStream = 2;
constexpr std::uint32_t kVolumeStream = 3;
constexpr double kPi = std::numbers::pi;

void check_stray_inputs(const ExperimentGeometry& geom, double magnetization,
                        const MCConfig& mc) {
  validate(geom);
  validate(mc);
  if (!geom.mass.spin) {
    throw GeometryMismatch("stray field needs a polarized test mass (sigma_tm)");
  }
  if (!(std::isfinite(magnetization) && magnetization >= 0.0)) {
    throw InvalidArgument("magnetization must be >= 0");
  }
}

detail::EngineSettings fixed_settings(const MCConfig& mc, std::uint32_t stream) {
  detail::EngineSettings s;
  s.seed = mc.seed;
  s.stream = stream;
  s.min_samples = mc.n_samples;
  s.max_samples = mc.n_samples;
  s.target_rel_se = 0.0;
  s.threads = mc.threads;
  return s;
}

// sigma_nv . B at r_nv from one rim element at angle phi, height z, of a mass
// centred laterally at `center`. Returned value is already multiplied by the
// rim area so its mean over uniform (phi, z) is the full integral.
struct RimIntegrand {
  Vec3 sigma_nv;
  double m_axial;     // M_z
  Vec3 m_transverse;  // (M_x, M_y, 0)
  double radius;
  double area;        // 2 pi R d_tm
  double prefactor;   // mu0 / 4 pi

  double operator()(const Vec3& r_nv, const Vec3& center, double cphi, double sphi,
                    double z) const {
    const Vec3 src(center.x() + radius * cphi, center.y() + radius * sphi, z);
    const Vec3 d = r_nv - src;
    const double inv_r = 1.0 / d.norm();
    const double inv_r3 = inv_r * inv_r * inv_r;
    // Amperian rim current K = M_z phi_hat; Biot-Savart K x d / |d|^3.
    const Vec3 k_dir(-sphi, cphi, 0.0);
    const Vec3 b_current = m_axial * k_dir.cross(d);
    // Magnetic rim charge sigma_m = M . n, field sigma_m d / |d|^3 (B = mu0 H outside).
    const double sigma_m = m_transverse.x() * cphi + m_transverse.y() * sphi;
    const Vec3 b_charge = sigma_m * d;
    return area * prefactor * inv_r3 * sigma_nv.dot(b_current + b_charge);
  }
};

}  // namespace

StrayFieldCurve dipole_stray_field(const ExperimentGeometry& geom, double magnetization,
                                   std::span<const double> displacements, const MCConfig& mc,
                                   const PhysicalConstants& k) {
  check_stray_inputs(geom, magnetization, mc);
  const SensorLayer& nv = geom.sensor;
  const TestMass& tm = geom.mass;
  const Vec3 m = magnetization * tm.spin->sigma_tm;
  const Vec3& e_v = geom.trajectory.direction;

  RimIntegrand f{nv.sigma_nv, m.z(), Vec3(m.x(), m.y(), 0.0), tm.radius,
                 2.0 * kPi * tm.radius * tm.thickness, k.mu0 / (4.0 * kPi)};

  // Requested displacements followed by the two gradient stencil points.
  std::vector<Vec3> centers;
  centers.reserve(displacements.size() + 2);
  for (double x : displacements) centers.push_back(x * e_v);
  centers.push_back(kStrayGradientStep * e_v);
  centers.push_back(-kStrayGradientStep * e_v);
  const std::size_t n = centers.size();

  std::vector<double> weights(n, 0.0);
  weights[n - 2] = 1.0 / (2.0 * kStrayGradientStep);
  weights[n - 1] = -1.0 / (2.0 * kStrayGradientStep);

  const double z0 = geom.gap;
  const double z1 = geom.gap + tm.thickness;
  auto sample = [&](std::mt19937_64& rng, std::span<double> out) {
    const Vec3 r_nv = sample_cylinder(rng, nv.illum_radius, -nv.thickness, 0.0);
    const double phi = 2.0 * kPi * detail::uniform01(rng);
    const double z = z0 + (z1 - z0) * detail::uniform01(rng);
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    for (std::size_t i = 0; i < n; ++i) out[i] = f(r_nv, centers[i], cphi, sphi, z);
  };

  const auto r = detail::run_batches(fixed_settings(mc, kRimStream), weights, sample);

  StrayFieldCurve curve;
  curve.points.reserve(displacements.size());
  for (std::size_t i = 0; i < displacements.size(); ++i) {
    curve.points.push_back({displacements[i], r.values[i].mean, r.values[i].std_error()});
  }
  curve.gradient = r.combination.mean;
  curve.gradient_std_error = r.combination.std_error();
  curve.samples_used = r.samples;
  return curve;
}

StrayFieldEstimate dipole_stray_field(const ExperimentGeometry& geom, double magnetization,
                                      double displacement, const MCConfig& mc,
                                      const PhysicalConstants& k) {
  const double xs[] = {displacement};
  return dipole_stray_field(geom, magnetization, xs, mc, k).points.front();
}

StrayFieldEstimate dipole_stray_field_volume(const ExperimentGeometry& geom,
                                             double magnetization, double displacement,
                                             const MCConfig& mc, const PhysicalConstants& k) {
  check_stray_inputs(geom, magnetization, mc);
  const SensorLayer& nv = geom.sensor;
  const TestMass& tm = geom.mass;
  const Vec3 m = magnetization * tm.spin->sigma_tm;
  const Vec3 center = displacement * geom.trajectory.direction;
  const double scale = mass_volume(tm) * k.mu0 / (4.0 * kPi);

  auto sample = [&](std::mt19937_64& rng, std::span<double> out) {
    const Vec3 r_nv = sample_cylinder(rng, nv.illum_radius, -nv.thickness, 0.0);
    const Vec3 r_tm =
        sample_cylinder(rng, tm.radius, geom.gap, geom.gap + tm.thickness, center);
    const Vec3 d = r_nv - r_tm;
    const double r2 = d.squaredNorm();
    const double inv_r = 1.0 / std::sqrt(r2);
    const Vec3 b = (3.0 * d * m.dot(d) / r2 - m) * (inv_r * inv_r * inv_r);
    out[0] = scale * nv.sigma_nv.dot(b);
  };

  const double weights[] = {1.0};
  const auto r = detail::run_batches(fixed_settings(mc, kVolumeStream), weights, sample);
  return {displacement, r.values[0].mean, r.values[0].std_error()};
}

}  // namespace exospin
