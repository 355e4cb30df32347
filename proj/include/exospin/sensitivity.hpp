#pragma once

// Ensemble sensitivity, figure of merit, bias-angle responsivity and the
// XY8-N timing arithmetic.

#include "exospin/core_model.hpp"
#include "exospin/mc_integrator.hpp"
#include "exospin/potentials.hpp"

namespace exospin {

struct SensitivityResult {
  double delta_b_min = 0.0;  // T
  double normalized = 0.0;   // T s^1/2 m^3/2
  double v_sens = 0.0;       // m^3
  double t_total = 0.0;      // s
};

/// delta_B = 1 / (4 gamma C sqrt(n V eta delta t tau)).
SensitivityResult delta_b_min(const SensorLayer& sensor, double t,
                              const PhysicalConstants& k = kConstants);

struct FigureOfMerit {
  double value = 0.0;      // B per unit coupling / delta_B_min
  double std_error = 0.0;
  bool converged = true;
};

FigureOfMerit figure_of_merit(const ExperimentGeometry& geom, PotentialKind kind, double lambda,
                              const MCConfig& mc, double t,
                              const PhysicalConstants& k = kConstants);

/// f+ (m_s = 0 -> +1) of H/h = D Sz^2 + gamma (B0 sin(theta) Sx + (B0 cos(theta) + b) Sz).
/// `degenerate` is set when the two upper levels lie within 1 kHz; f+ is then
/// their mean distance from the m_s = 0 level.
double transition_frequency_plus(double b0, double theta, double b,
                                 const PhysicalConstants& k = kConstants,
                                 bool* degenerate = nullptr);

struct Responsivity {
  double value = 0.0;       // |df+/db|, Hz/T
  bool degenerate = false;
};

inline constexpr double kResponsivityStep = 1e-7;  // T

Responsivity nv_responsivity(double b0, double theta, const PhysicalConstants& k = kConstants);

/// sin(theta) R(theta) / R(0).
double signal_weighted_responsivity(double b0, double theta,
                                    const PhysicalConstants& k = kConstants);

struct ProtocolTiming {
  double tau_half_spacing = 0.0;   // 2 tau, s
  int n_pulses = 0;                // N of XY8-N
  double sequence_duration = 0.0;  // s
  double filter_bandwidth = 0.0;   // Hz
  double aliased_freq = 0.0;       // Hz
  double rep_interval = 0.0;       // s
};

/// Throws RepIntervalTooShort unless rep_interval exceeds the sequence duration.
ProtocolTiming protocol_timings(double f_m, int n, double rep_interval);

}  // namespace exospin
