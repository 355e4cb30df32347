#include "exospin/mc_integrator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "exospin/detail/mc_engine.hpp"
#include "exospin/errors.hpp"

namespace exospin {
namespace {

constexpr std::uint32_t kFieldStream = 1;

// Kernels are linear in v, so each phase is evaluated as
// cos(phase) * kernel(displacement, peak velocity). Phases sharing a
// displacement (p and pi - p) share one kernel call.
struct PhasePlan {
  std::vector<Vec3> displacements;  // unique, moving phases only
  std::vector<int> slot;            // per phase: index into displacements, -1 if at rest
  std::vector<double> factor;       // per phase: cos(phase)
  Vec3 peak_velocity;
};

PhasePlan plan_phases(const Trajectory& traj, std::span<const double> phases) {
  PhasePlan plan;
  plan.peak_velocity = peak_velocity(traj) * traj.direction;
  for (double p : phases) {
    const double c = velocity_phase_factor(p);
    plan.factor.push_back(c);
    if (c == 0.0 || plan.peak_velocity.squaredNorm() == 0.0) {
      plan.slot.push_back(-1);
      continue;
    }
    const Vec3 d = displacement_at_phase(traj, p);
    int found = -1;
    for (std::size_t i = 0; i < plan.displacements.size(); ++i) {
      if ((plan.displacements[i] - d).norm() <= 1e-15 * (1.0 + d.norm())) {
        found = static_cast<int>(i);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(plan.displacements.size());
      plan.displacements.push_back(d);
    }
    plan.slot.push_back(found);
  }
  return plan;
}

detail::EngineSettings engine_settings(const MCConfig& mc, std::uint32_t stream,
                                       double target) {
  detail::EngineSettings s;
  s.seed = mc.seed;
  s.stream = stream;
  s.min_samples = mc.n_samples;
  s.max_samples = mc.max_samples;
  s.target_rel_se = target;
  s.threads = mc.threads;
  return s;
}

// Kernel is any callable double(const PairContext&).
template <class Kernel>
detail::EngineResult integrate_phases(const ExperimentGeometry& geom, Kernel&& kern,
                                      double density, double lambda, const PhasePlan& plan,
                                      std::span<const double> weights, const MCConfig& mc) {
  const SensorLayer& nv = geom.sensor;
  const TestMass& tm = geom.mass;
  const double weight = density * mass_volume(tm);
  const double gap = geom.gap;

  PairContext proto;
  proto.sigma_nv = nv.sigma_nv;
  if (tm.spin) proto.sigma_tm = tm.spin->sigma_tm;
  proto.lambda = lambda;
  proto.v_vec = plan.peak_velocity;
  const std::size_t n_unique = plan.displacements.size();

  // Called concurrently from worker threads; all mutable state is local.
  auto sample = [&](std::mt19937_64& rng, std::span<double> out) {
    PairContext ctx = proto;
    double unique[16];
    std::vector<double> spill;
    double* vals = unique;
    if (n_unique > 16) {
      spill.resize(n_unique);
      vals = spill.data();
    }
    const Vec3 r_nv = sample_cylinder(rng, nv.illum_radius, -nv.thickness, 0.0);
    const Vec3 r_tm = sample_cylinder(rng, tm.radius, gap, gap + tm.thickness);
    for (std::size_t i = 0; i < n_unique; ++i) {
      ctx.r_vec = r_tm + plan.displacements[i] - r_nv;
      vals[i] = weight * kern(ctx);
    }
    for (std::size_t k = 0; k < plan.slot.size(); ++k) {
      out[k] = plan.slot[k] < 0 ? 0.0 : plan.factor[k] * vals[plan.slot[k]];
    }
  };
  return detail::run_batches(engine_settings(mc, kFieldStream, mc.target_rel_se), weights,
                             sample);
}

template <class Kernel>
PhaseEstimate phase_impl(const ExperimentGeometry& geom, Kernel&& kern, double density,
                         double lambda, double phase, const MCConfig& mc) {
  const double phases[] = {phase};
  const auto plan = plan_phases(geom.trajectory, phases);
  const double weights[] = {1.0};
  const auto r = integrate_phases(geom, kern, density, lambda, plan, weights, mc);
  return {r.values[0].mean, r.values[0].std_error(), r.samples, r.converged};
}

template <class Kernel>
FieldEstimate amplitude_impl(const ExperimentGeometry& geom, Kernel&& kern, double density,
                             double lambda, const MCConfig& mc) {
  const int n = mc.n_phase_points;
  std::vector<double> phases(n), weights(n);
  for (int i = 0; i < n; ++i) {
    phases[i] = 2.0 * std::numbers::pi * i / n;
    weights[i] = 2.0 / n * velocity_phase_factor(phases[i]);
  }
  const auto plan = plan_phases(geom.trajectory, phases);
  const auto r = integrate_phases(geom, kern, density, lambda, plan, weights, mc);

  FieldEstimate est;
  est.amplitude_per_coupling = r.combination.mean;
  est.std_error = r.combination.std_error();
  est.seed_used = mc.seed;
  est.samples_used = r.samples;
  est.converged = r.converged;
  est.per_phase_values.reserve(n);
  for (int i = 0; i < n; ++i) {
    est.per_phase_values.push_back({phases[i], r.values[i].mean, r.values[i].std_error()});
  }
  return est;
}

void check_inputs(const ExperimentGeometry& geom, double lambda, const MCConfig& mc) {
  validate(geom);
  validate(mc);
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be > 0");
}

template <class Fn>
decltype(auto) with_kernel(PotentialKind kind, const PhysicalConstants& k, Fn&& fn) {
  switch (kind) {
    case PotentialKind::V4_5:
      return fn([&k](const PairContext& c) { return kernel_v4_5(c, k); });
    case PotentialKind::V12_13:
      return fn([&k](const PairContext& c) { return kernel_v12_13(c, k); });
    case PotentialKind::V6_7:
      return fn([&k](const PairContext& c) { return kernel_v6_7(c, k); });
    case PotentialKind::V14:
      return fn([&k](const PairContext& c) { return kernel_v14(c, k); });
    case PotentialKind::V15:
      break;
  }
  return fn([&k](const PairContext& c) { return kernel_v15(c, k); });
}

}  // namespace

void validate(const MCConfig& mc) {
  if (mc.n_samples == 0) throw InvalidArgument("mc samples must be > 0");
  if (mc.n_phase_points < 8 || mc.n_phase_points % 2 != 0) {
    throw InvalidArgument("mc phase_points must be even and >= 8");
  }
  if (!(mc.target_rel_se > 0.0 && mc.target_rel_se < 1.0)) {
    throw InvalidArgument("mc target_rel_se must lie in (0, 1)");
  }
  if (mc.max_samples < mc.n_samples) {
    throw InvalidArgument("mc max_samples must be >= samples");
  }
}

Vec3 sample_cylinder(std::mt19937_64& rng, double radius, double z_min, double z_max,
                     const Vec3& lateral_center) {
  const double rho = radius * std::sqrt(detail::uniform01(rng));
  const double phi = 2.0 * std::numbers::pi * detail::uniform01(rng);
  const double z = z_min + (z_max - z_min) * detail::uniform01(rng);
  return {lateral_center.x() + rho * std::cos(phi), lateral_center.y() + rho * std::sin(phi), z};
}

PhaseEstimate field_at_phase(const ExperimentGeometry& geom, PotentialKind kind, double lambda,
                             double phase, const MCConfig& mc, const PhysicalConstants& k) {
  check_inputs(geom, lambda, mc);
  const double density = source_density(kind, geom.mass);
  return with_kernel(kind, k, [&](auto kern) {
    return phase_impl(geom, kern, density, lambda, phase, mc);
  });
}

FieldEstimate field_amplitude(const ExperimentGeometry& geom, PotentialKind kind, double lambda,
                              const MCConfig& mc, const PhysicalConstants& k) {
  check_inputs(geom, lambda, mc);
  const double density = source_density(kind, geom.mass);
  return with_kernel(kind, k, [&](auto kern) {
    return amplitude_impl(geom, kern, density, lambda, mc);
  });
}

PhaseEstimate field_at_phase(const ExperimentGeometry& geom, const PairKernel& kernel,
                             double density, double lambda, double phase, const MCConfig& mc) {
  check_inputs(geom, lambda, mc);
  return phase_impl(geom, kernel, density, lambda, phase, mc);
}

FieldEstimate field_amplitude(const ExperimentGeometry& geom, const PairKernel& kernel,
                              double density, double lambda, const MCConfig& mc) {
  check_inputs(geom, lambda, mc);
  return amplitude_impl(geom, kernel, density, lambda, mc);
}

}  // namespace exospin
