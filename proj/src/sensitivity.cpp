#include "exospin/sensitivity.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "exospin/errors.hpp"

namespace exospin {

SensitivityResult delta_b_min(const SensorLayer& sensor, double t, const PhysicalConstants& k) {
  if (!(t > 0.0)) throw InvalidArgument("measurement time must be > 0");
  SensitivityResult r;
  r.v_sens = sensing_volume(sensor);
  r.t_total = t;
  r.normalized = 1.0 / (4.0 * k.gamma_nv * sensor.contrast *
                        std::sqrt(sensor.nv_density * sensor.photon_prob * sensor.duty *
                                  sensor.phase_time));
  r.delta_b_min = r.normalized / std::sqrt(r.v_sens * t);
  return r;
}

FigureOfMerit figure_of_merit(const ExperimentGeometry& geom, PotentialKind kind, double lambda,
                              const MCConfig& mc, double t, const PhysicalConstants& k) {
  const double db = delta_b_min(geom.sensor, t, k).delta_b_min;
  const FieldEstimate f = field_amplitude(geom, kind, lambda, mc, k);
  return {f.amplitude_per_coupling / db, f.std_error / db, f.converged};
}

double transition_frequency_plus(double b0, double theta, double b, const PhysicalConstants& k,
                                 bool* degenerate) {
  // Basis |+1>, |0>, |-1>.
  const double bx = k.gamma_nv * b0 * std::sin(theta);
  const double bz = k.gamma_nv * (b0 * std::cos(theta) + b);
  const double sx = bx / std::numbers::sqrt2;
  Eigen::Matrix3d h;
  h << k.D_zfs + bz, sx, 0.0,
       sx, 0.0, sx,
       0.0, sx, k.D_zfs - bz;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();

  int i0 = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(vecs(1, i)) > std::abs(vecs(1, i0))) i0 = i;
  }
  double upper[2];
  int j = 0;
  for (int i = 0; i < 3; ++i) {
    if (i != i0) upper[j++] = vals(i);
  }
  const bool degen = std::abs(upper[1] - upper[0]) < 1e3;
  if (degenerate) *degenerate = degen;
  const double e_hi = degen ? 0.5 * (upper[0] + upper[1]) : std::max(upper[0], upper[1]);
  return e_hi - vals(i0);
}

Responsivity nv_responsivity(double b0, double theta, const PhysicalConstants& k) {
  if (!(b0 >= 0.0)) throw InvalidArgument("bias field must be >= 0");
  const double h = kResponsivityStep;
  bool d0 = false, d1 = false, d2 = false;
  transition_frequency_plus(b0, theta, 0.0, k, &d0);
  const double fp = transition_frequency_plus(b0, theta, h, k, &d1);
  const double fm = transition_frequency_plus(b0, theta, -h, k, &d2);
  return {std::abs(fp - fm) / (2.0 * h), d0 || d1 || d2};
}

double signal_weighted_responsivity(double b0, double theta, const PhysicalConstants& k) {
  const double r0 = nv_responsivity(b0, 0.0, k).value;
  if (r0 == 0.0) return 0.0;
  return std::sin(theta) * nv_responsivity(b0, theta, k).value / r0;
}

ProtocolTiming protocol_timings(double f_m, int n, double rep_interval) {
  if (!(f_m > 0.0)) throw InvalidArgument("modulation frequency must be > 0");
  if (n < 1) throw InvalidArgument("XY8 repetition count N must be >= 1");
  ProtocolTiming p;
  p.tau_half_spacing = 1.0 / (2.0 * f_m);
  p.n_pulses = n;
  p.sequence_duration = 8.0 * n * p.tau_half_spacing;
  p.filter_bandwidth = f_m / (4.0 * n);
  p.rep_interval = rep_interval;
  if (!(rep_interval > p.sequence_duration)) {
    throw RepIntervalTooShort("repetition interval must exceed the XY8-" + std::to_string(n) +
                              " duration");
  }
  const double cycles = f_m * rep_interval;
  p.aliased_freq = std::abs(cycles - std::round(cycles)) / rep_interval;
  return p;
}

}  // namespace exospin
