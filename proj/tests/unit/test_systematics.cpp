#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "exospin/errors.hpp"
#include "exospin/optimizer.hpp"
#include "exospin/sensitivity.hpp"
#include "exospin/systematics.hpp"

using namespace exospin;
using units::deg;

namespace {

constexpr double kNuclearMagneton = 5.0507837461e-27;  // J/T

MCConfig fixed(std::uint64_t n) {
  MCConfig mc;
  mc.n_samples = n;
  mc.max_samples = n;
  return mc;
}

BudgetAssumptions zeroed() {
  BudgetAssumptions a;
  a.sigma_c = 0.0;
  a.e_perp = 0.0;
  a.e_par = 0.0;
  a.shear_projection = 0.0;
  a.charge_projection = 0.0;
  a.delta_phi = 0.0;
  a.eps_r = 1.0;
  return a;
}

}  // namespace

TEST_CASE("shear stress in the gap") {
  const ShearResult s = shear_stress(4.7, 0.2e-6, 1.0);
  CHECK(s.tau == doctest::Approx(423.0).epsilon(1e-12));
  CHECK(s.df == doctest::Approx(8.883).epsilon(1e-12));
  CHECK(s.b_equiv == doctest::Approx(3.16910453085979307e-10).epsilon(1e-12));
  CHECK(s.tau == doctest::Approx(423.0).epsilon(0.15));
  CHECK(s.df == doctest::Approx(8.9).epsilon(0.15));
  CHECK(s.b_equiv == doctest::Approx(317e-12).epsilon(0.15));

  const ShearResult z = shear_stress(0.0, 0.2e-6, 1.0);
  CHECK(z.tau == 0.0);
  CHECK(z.df == 0.0);
  CHECK(z.b_equiv == 0.0);
  CHECK_THROWS_AS(shear_stress(4.7, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("Stark shift") {
  const StarkResult a = stark_shift(0.0, 1e3, 10e-3);
  CHECK(a.df_plus == doctest::Approx(5.1551908669278171e-5).epsilon(1e-9));
  CHECK(a.b_equiv == doctest::Approx(1.8391690570559461e-15).epsilon(1e-9));
  CHECK(a.df_minus == doctest::Approx(-a.df_plus));
  CHECK(a.df_plus == doctest::Approx(52e-6).epsilon(0.15));
  CHECK(a.b_equiv == doctest::Approx(1.8e-15).epsilon(0.15));

  const StarkResult b = stark_shift(0.0, 1e3, 10e-3 * std::cos(80 * deg));
  CHECK(b.df_plus == doctest::Approx(2.9687560999347745e-4).epsilon(1e-9));
  CHECK(b.b_equiv == doctest::Approx(1.0591352479253566e-14).epsilon(1e-9));
  CHECK(b.df_plus == doctest::Approx(0.3e-3).epsilon(0.15));
  CHECK(b.b_equiv == doctest::Approx(10.6e-15).epsilon(0.15));

  const StarkResult c = stark_shift(200.0, 1e3, 5e-3);
  CHECK(c.df_plus == doctest::Approx(0.70010310381733853).epsilon(1e-12));
  CHECK(c.df_minus == doctest::Approx(0.69989689618266147).epsilon(1e-12));
  CHECK(c.b_equiv == doctest::Approx(2.4976921292091992e-11).epsilon(1e-12));

  const StarkResult z = stark_shift(0.0, 0.0, 10e-3);
  CHECK(z.df_plus == 0.0);
  CHECK(z.df_minus == 0.0);
  CHECK(z.b_equiv == 0.0);
}

TEST_CASE("surface charge") {
  const double sigma = breakdown_sigma(3e6);
  CHECK(sigma == doctest::Approx(5.31251268768e-5).epsilon(1e-11));
  CHECK(sigma == doctest::Approx(53e-6).epsilon(0.15));
  CHECK(breakdown_sigma(0.0) == 0.0);
  CHECK(breakdown_sigma(6e6) == doctest::Approx(2 * sigma).epsilon(1e-15));

  const double b_bd = surface_charge_field(sigma, 4.7, 150e-6, 0.2e-6);
  CHECK(b_bd == doctest::Approx(1.5667447987895125e-10).epsilon(1e-11));
  CHECK(b_bd == doctest::Approx(157e-12).epsilon(0.10));
  const double b10 = surface_charge_field(10e-6, 4.7, 150e-6, 0.2e-6);
  CHECK(b10 == doctest::Approx(2.9491596366873196e-11).epsilon(1e-11));
  CHECK(b10 == doctest::Approx(30e-12).epsilon(0.15));
  CHECK(surface_charge_field(10e-6, 4.7, 1e-6, 20e-6) ==
        doctest::Approx(3.6844644366065345e-14).epsilon(1e-11));

  CHECK(surface_charge_field(sigma, 4.7, 0.0, 0.2e-6) == 0.0);
  CHECK(surface_charge_field(sigma, 4.7, 150e-6, std::numeric_limits<double>::infinity()) == 0.0);
  CHECK_THROWS_AS(surface_charge_field(sigma, 4.7, 150e-6, 0.0), InvalidArgument);
}

TEST_CASE("surface-charge geometry scaling") {
  const double sigma = 10e-6, v = 4.7, d = 100e-6;
  const double sheet = sheet_current_field(sigma, v);
  CHECK(sheet == doctest::Approx(0.5 * kConstants.mu0 * sigma * v).epsilon(1e-15));

  // small disc: B / (R/d)^2 -> sheet / 2
  for (double ratio : {0.1, 0.05, 0.01}) {
    CAPTURE(ratio);
    const double b = surface_charge_field(sigma, v, ratio * d, d);
    CHECK(b / (ratio * ratio) == doctest::Approx(0.5 * sheet).epsilon(0.05));
  }
  // large disc: monotone approach to the sheet value
  double prev = 0.0;
  for (double ratio : {100.0, 200.0, 1e3, 1e4, 1e6}) {
    const double b = surface_charge_field(sigma, v, ratio * d, d);
    CHECK(b > prev);
    CHECK(b <= sheet);
    prev = b;
  }
  CHECK(prev == doctest::Approx(sheet).epsilon(1e-5));
}

TEST_CASE("dielectric motion") {
  const DielectricResult d = dielectric_motion(5.5, 1.0 / 3.0, 4.7, 10e-3);
  CHECK(d.sigma_c == doctest::Approx(7.4906428896288e-13).epsilon(1e-11));
  CHECK(d.sigma_c == doctest::Approx(7.5e-13).epsilon(0.15));
  CHECK(d.field_bound == doctest::Approx(2.2120595764401026e-18).epsilon(1e-11));
  CHECK(d.field_bound < 1e-15);
  CHECK(dielectric_motion(5.5, 1.0 / 3.0, 4.7, 0.0).sigma_c == 0.0);
  CHECK(dielectric_motion(1.0, 1.0 / 3.0, 4.7, 10e-3).sigma_c == 0.0);
}

TEST_CASE("magnetization and thermal polarization") {
  CHECK(magnetization(5e25, 3.5e-27) == doctest::Approx(0.175).epsilon(1e-14));
  CHECK(magnetization(5e25, 3.5e-27) == doctest::Approx(0.175).epsilon(0.15));
  CHECK(magnetization(0.0, 3.5e-27) == 0.0);
  // fully polarized NV at 1 ppm in diamond
  const double m_nv = magnetization(1.76e23, 1.857e-23);
  CHECK(m_nv == doctest::Approx(3.2).epsilon(0.05));
  CHECK(m_nv >= 0.175);

  // 29Si, 100% abundance
  const ThermalPolarization si = thermal_polarization(4.99e28, 2.803e-27, 10e-3, 300.0);
  CHECK(si.rho_pol == doctest::Approx(3.3769070439578294e20).epsilon(1e-9));
  CHECK(si.m == doctest::Approx(9.4654704442137959e-7).epsilon(1e-9));
  CHECK(si.rho_pol / 8e19 < 5.0);
  CHECK(si.rho_pol / 8e19 > 0.2);
  CHECK(si.m / 2e-7 < 5.0);
  CHECK(si.m / 2e-7 > 0.2);
  CHECK(si.m / si.rho_pol == 2.803e-27);

  // BGO: 209Bi as a spin-1/2-equivalent moment mu / (2I)
  const double mu_bi = 4.11 * kNuclearMagneton / 9.0;
  const ThermalPolarization bgo = thermal_polarization(1.379e28, mu_bi, 10e-3, 300.0);
  CHECK(bgo.rho_pol == doctest::Approx(7.6792324774190358e19).epsilon(1e-9));
  CHECK(bgo.m == doctest::Approx(1.7712338444625228e-7).epsilon(1e-9));
  CHECK(bgo.rho_pol / 7e19 < 5.0);
  CHECK(bgo.rho_pol / 7e19 > 0.2);
  CHECK(bgo.m / 1.4e-7 < 5.0);
  CHECK(bgo.m / 1.4e-7 > 0.2);
  CHECK(bgo.m / bgo.rho_pol == mu_bi);

  CHECK(thermal_polarization(4.99e28, 2.803e-27, 0.0, 300.0).rho_pol == 0.0);
  CHECK_THROWS_AS(thermal_polarization(4.99e28, 2.803e-27, 0.01, 0.0), InvalidArgument);
}

TEST_CASE("phase error suppression") {
  CHECK(phase_error_suppression(0.0) == 0.0);
  CHECK(phase_error_suppression(std::numbers::pi / 2) == 1.0);
  CHECK(phase_error_suppression(0.0157) == doctest::Approx(0.01).epsilon(0.005));
  CHECK(phase_error_suppression(0.0157) == 2.0 * 0.0157 / std::numbers::pi);
  CHECK_THROWS_AS(phase_error_suppression(-0.1), InvalidArgument);
  CHECK_THROWS_AS(phase_error_suppression(2.0), InvalidArgument);
}

TEST_CASE("budget: surface charge dominates for a narrow gap") {
  auto p = preset("unpolarized-0.5um");
  p.geometry = oriented_for(PotentialKind::V4_5, p.geometry);
  const SystematicsBudget b =
      budget(p, PotentialKind::V4_5, default_assumptions(PotentialKind::V4_5), fixed(65536));
  CHECK(b.geometry_ref == "unpolarized-0.5um");
  REQUIRE(b.entries.size() == 5);
  const BudgetEntry* top = &b.entries.front();
  for (const auto& e : b.entries) {
    if (e.spurious_field > top->spurious_field) top = &e;
    CHECK(!e.mitigations.empty());
  }
  CHECK(top->name == "surface_charge");
  CHECK(top->ratio_to_delta_b_min > 1.0);
  const double db = delta_b_min(p.geometry.sensor, 1e4).delta_b_min;
  CHECK(top->ratio_to_delta_b_min == doctest::Approx(top->spurious_field / db));
}

TEST_CASE("budget: zero assumptions") {
  auto p = preset("unpolarized-5um");
  const SystematicsBudget b = budget(p, PotentialKind::V12_13, zeroed(), fixed(65536));
  for (const auto& e : b.entries) {
    CAPTURE(e.name);
    CHECK(e.spurious_field == 0.0);
  }

  auto pol = preset("polarized-1um");
  pol.geometry = oriented_for(PotentialKind::V6_7, pol.geometry);
  const SystematicsBudget c = budget(pol, PotentialKind::V6_7, zeroed(), fixed(4 * 65536));
  for (const auto& e : c.entries) {
    CAPTURE(e.name);
    if (e.name == "magnetization") {
      CHECK(e.spurious_field > 0.0);
    } else {
      CHECK(e.spurious_field == 0.0);
    }
  }
}

TEST_CASE("budget is a pure function of its inputs") {
  auto pol = preset("polarized-1um");
  pol.geometry = oriented_for(PotentialKind::V6_7, pol.geometry);
  const auto a = default_assumptions(PotentialKind::V6_7);
  const std::string first = budget_text(budget(pol, PotentialKind::V6_7, a, fixed(65536)));
  const std::string second = budget_text(budget(pol, PotentialKind::V6_7, a, fixed(65536)));
  CHECK(first == second);
  CHECK(first.find("magnetization") != std::string::npos);
}

TEST_CASE("stray-field gradient for motion along sigma_nv") {
  const auto p = preset("polarized-1um");
  const auto g = oriented_for(PotentialKind::V6_7, p.geometry);
  const double m = magnetization(5e25, 3.5e-27);
  const double xs[] = {-0.75e-6, 0.0, 0.75e-6};
  const StrayFieldCurve c = stray_field_curve(g, m, xs, fixed(8 * 65536));
  CHECK(c.points.size() == 3);
  const double fT_per_um = std::abs(c.gradient) * 1e9;  // T/m to fT/um
  CHECK(fT_per_um >= 125.0);
  CHECK(fT_per_um <= 500.0);
  CHECK(c.gradient_std_error < 0.1 * std::abs(c.gradient));
}
