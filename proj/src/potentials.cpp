#include "exospin/potentials.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "exospin/errors.hpp"

namespace exospin {
namespace {

constexpr double kPi = std::numbers::pi;

const Vec3& spin_of_mass(const PairContext& ctx, std::string_view who) {
  if (!ctx.sigma_tm) {
    throw GeometryMismatch(std::string(who) + " needs the test-mass spin direction sigma_tm");
  }
  return *ctx.sigma_tm;
}

// (1/(lambda r) + 1/r^2) e^{-r/lambda}
double dipole_yukawa(double r, double lambda) {
  return (1.0 / (lambda * r) + 1.0 / (r * r)) * std::exp(-r / lambda);
}

}  // namespace

bool requires_polarized_mass(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::V4_5:
    case PotentialKind::V12_13:
      return false;
    case PotentialKind::V6_7:
    case PotentialKind::V14:
    case PotentialKind::V15:
      return true;
  }
  return false;
}

std::string_view coupling_symbol(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::V4_5: return "f₄₊₅";
    case PotentialKind::V12_13: return "f₁₂₊₁₃";
    case PotentialKind::V6_7: return "f₆₊₇";
    case PotentialKind::V14: return "f₁₄";
    case PotentialKind::V15: return "f₁₅";
  }
  return "";
}

std::string_view kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::V4_5: return "v4_5";
    case PotentialKind::V12_13: return "v12_13";
    case PotentialKind::V6_7: return "v6_7";
    case PotentialKind::V14: return "v14";
    case PotentialKind::V15: return "v15";
  }
  return "";
}

std::optional<PotentialKind> parse_kind(std::string_view name) {
  for (auto kind : kAllKinds) {
    if (kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

double kernel_v12_13(const PairContext& ctx, const PhysicalConstants& k) {
  const double r = ctx.r_vec.norm();
  return ctx.sigma_nv.dot(ctx.v_vec) * std::exp(-r / ctx.lambda) / (4.0 * kPi * k.gamma_nv * r);
}

double kernel_v4_5(const PairContext& ctx, const PhysicalConstants& k) {
  const double r = ctx.r_vec.norm();
  const Vec3 r_hat = ctx.r_vec / r;
  const double angular = ctx.sigma_nv.dot(ctx.v_vec.cross(r_hat));
  const double prefactor = k.hbar / (4.0 * kPi * k.m_e * k.c * k.gamma_nv);
  return -prefactor * angular * dipole_yukawa(r, ctx.lambda);
}

double kernel_v6_7(const PairContext& ctx, const PhysicalConstants& k) {
  const Vec3& sigma_tm = spin_of_mass(ctx, "V6+7");
  const double r = ctx.r_vec.norm();
  const Vec3 r_hat = ctx.r_vec / r;
  const double angular = ctx.sigma_nv.dot(ctx.v_vec) * sigma_tm.dot(r_hat);
  const double prefactor = k.hbar / (4.0 * kPi * k.m_e * k.c * k.gamma_nv);
  return -prefactor * angular * dipole_yukawa(r, ctx.lambda);
}

double kernel_v14(const PairContext& ctx, const PhysicalConstants& k) {
  const Vec3& sigma_tm = spin_of_mass(ctx, "V14");
  const double r = ctx.r_vec.norm();
  const double angular = ctx.sigma_nv.dot(sigma_tm.cross(ctx.v_vec));
  return angular * std::exp(-r / ctx.lambda) / (2.0 * kPi * k.gamma_nv * r);
}

double kernel_v15(const PairContext& ctx, const PhysicalConstants& k) {
  const Vec3& sigma_tm = spin_of_mass(ctx, "V15");
  const double r = ctx.r_vec.norm();
  const Vec3 r_hat = ctx.r_vec / r;
  const Vec3 v_cross_r = ctx.v_vec.cross(r_hat);
  const double angular = ctx.sigma_nv.dot(v_cross_r) * sigma_tm.dot(r_hat) +
                         ctx.sigma_nv.dot(r_hat) * sigma_tm.dot(v_cross_r);
  const double lambda = ctx.lambda;
  const double radial =
      (1.0 / (lambda * lambda * r) + 3.0 / (lambda * r * r) + 3.0 / (r * r * r)) *
      std::exp(-r / lambda);
  const double prefactor =
      k.hbar * k.hbar / (4.0 * kPi * k.gamma_nv * k.m_e * k.m_N * k.c * k.c);
  return -prefactor * angular * radial;
}

double kernel(PotentialKind kind, const PairContext& ctx, const PhysicalConstants& k) {
  switch (kind) {
    case PotentialKind::V4_5: return kernel_v4_5(ctx, k);
    case PotentialKind::V12_13: return kernel_v12_13(ctx, k);
    case PotentialKind::V6_7: return kernel_v6_7(ctx, k);
    case PotentialKind::V14: return kernel_v14(ctx, k);
    case PotentialKind::V15: return kernel_v15(ctx, k);
  }
  return 0.0;
}

double source_density(PotentialKind kind, const TestMass& mass) {
  if (!requires_polarized_mass(kind)) return mass.nucleon_density;
  if (!mass.spin) {
    throw GeometryMismatch(std::string(kind_name(kind)) +
                           " requires a spin-polarized test mass");
  }
  return mass.spin->polarized_density;
}

}  // namespace exospin
