#include <doctest.h>

#include <cmath>
#include <numbers>

#include "exospin/errors.hpp"
#include "exospin/optimizer.hpp"
#include "exospin/sensitivity.hpp"

using namespace exospin;
using units::deg;

TEST_CASE("volume-normalized sensitivity") {
  const SensorLayer s = preset("unpolarized-5um").geometry.sensor;
  const SensitivityResult r = delta_b_min(s, 1.0);
  CHECK(r.normalized == doctest::Approx(3.6052982672781094e-19).epsilon(1e-12));
  // in T s^1/2 um^3/2
  CHECK(r.normalized * 1e9 == doctest::Approx(3.7e-10).epsilon(0.05));
  CHECK(r.v_sens == doctest::Approx(std::numbers::pi * 25e-6 * 25e-6 * 6.25e-6));
}

TEST_CASE("delta_B_min of the presets at t = 1 s") {
  struct Row {
    const char* name;
    double frozen;
    double rounded;
  };
  const Row rows[] = {{"unpolarized-50um", 1.029167934e-12, 1e-12},
                      {"unpolarized-5um", 3.254514765e-12, 3e-12},
                      {"unpolarized-0.5um", 1.029167934e-11, 10e-12},
                      {"polarized-1um", 7.277316248e-12, 0.0}};
  for (const auto& row : rows) {
    CAPTURE(row.name);
    const double db = delta_b_min(preset(row.name).geometry.sensor, 1.0).delta_b_min;
    CHECK(db == doctest::Approx(row.frozen).epsilon(1e-9));
    if (row.rounded > 0) CHECK(db == doctest::Approx(row.rounded).epsilon(0.3));
  }
}

TEST_CASE("delta_B_min scales as t^-1/2") {
  const SensorLayer s = preset("unpolarized-5um").geometry.sensor;
  CHECK(delta_b_min(s, 4e4).delta_b_min ==
        doctest::Approx(0.5 * delta_b_min(s, 1e4).delta_b_min).epsilon(1e-14));
  CHECK_THROWS_AS(delta_b_min(s, 0.0), InvalidArgument);
}

TEST_CASE("figure of merit is amplitude over delta_B_min") {
  const auto p = preset("unpolarized-5um");
  MCConfig mc;
  mc.n_samples = 65536;
  mc.max_samples = 65536;
  const FigureOfMerit f = figure_of_merit(p.geometry, PotentialKind::V12_13, 5e-6, mc, 1e4);
  const FieldEstimate a = field_amplitude(p.geometry, PotentialKind::V12_13, 5e-6, mc);
  const double db = delta_b_min(p.geometry.sensor, 1e4).delta_b_min;
  CHECK(f.value == doctest::Approx(a.amplitude_per_coupling / db).epsilon(1e-14));
  CHECK(f.std_error == doctest::Approx(a.std_error / db).epsilon(1e-14));
}

TEST_CASE("responsivity against the bias angle") {
  const double b0 = 10e-3;
  const double gamma = kConstants.gamma_nv;
  CHECK(nv_responsivity(b0, 0.0).value == doctest::Approx(gamma).epsilon(1e-3));
  CHECK(nv_responsivity(b0, 90 * deg).value < 0.02 * gamma);
  CHECK(signal_weighted_responsivity(b0, 0.0) == 0.0);
  CHECK(signal_weighted_responsivity(b0, 90 * deg) < 0.02);

  // smooth and decreasing away from the degenerate end
  double prev = nv_responsivity(b0, 0.0).value;
  for (double a = 0.5; a <= 89.9; a += 0.5) {
    const double r = nv_responsivity(b0, a * deg).value;
    CHECK(r < prev);
    if (a <= 85.0) CHECK(std::abs(r - prev) < 0.02 * gamma);
    prev = r;
  }

  double best = 0.0, best_deg = 0.0;
  for (int i = 0; i <= 180; ++i) {
    const double s = signal_weighted_responsivity(b0, 0.5 * i * deg);
    if (s > best) {
      best = s;
      best_deg = 0.5 * i;
    }
  }
  CHECK(best_deg >= 75.0);
  CHECK(best_deg <= 86.0);
}

TEST_CASE("transition frequency at zero field") {
  bool degenerate = false;
  const double f = transition_frequency_plus(0.0, 0.3, 0.0, kConstants, &degenerate);
  CHECK(degenerate);
  CHECK(f == doctest::Approx(kConstants.D_zfs).epsilon(1e-12));
  const Responsivity r = nv_responsivity(0.0, 0.3);
  CHECK(r.degenerate);
  CHECK(std::isfinite(r.value));
  CHECK_THROWS_AS(nv_responsivity(-1e-3, 0.0), InvalidArgument);

  // pure axial field: f+ = D + gamma B
  const double f1 = transition_frequency_plus(10e-3, 0.0, 0.0, kConstants, &degenerate);
  CHECK_FALSE(degenerate);
  CHECK(f1 == doctest::Approx(kConstants.D_zfs + kConstants.gamma_nv * 10e-3).epsilon(1e-12));
}

TEST_CASE("XY8-N timing") {
  const ProtocolTiming t = protocol_timings(1e6, 1, 10e-6);
  CHECK(t.tau_half_spacing == doctest::Approx(500e-9).epsilon(1e-12));
  CHECK(t.filter_bandwidth == doctest::Approx(250e3).epsilon(1e-12));
  CHECK(t.sequence_duration == doctest::Approx(4e-6).epsilon(1e-12));
  CHECK(t.aliased_freq == 0.0);

  CHECK(protocol_timings(1.00005e6, 1, 10e-6).aliased_freq == doctest::Approx(50.0).epsilon(1e-6));
  CHECK(protocol_timings(1e6, 4, 100e-6).filter_bandwidth == doctest::Approx(62.5e3));

  CHECK_THROWS_AS(protocol_timings(1e6, 2, 8e-6), RepIntervalTooShort);
  CHECK_THROWS_AS(protocol_timings(1e6, 0, 1e-3), InvalidArgument);
  CHECK_THROWS_AS(protocol_timings(0.0, 1, 1e-3), InvalidArgument);
}
