#pragma once

// Pair kernels. Each kernel is the effective-field integrand for one NV
// electron and one test-mass nucleon (or polarized spin), per unit coupling and
// per unit density, in T m^3:
//
//   B_X / f_X = rho * integral over the mass of kappa_X d^3 r_tm
//
// averaged over the NV layer. r_vec points from the NV electron to the nucleon.

#include <array>
#include <optional>
#include <string_view>

#include "exospin/core_model.hpp"

namespace exospin {

enum class PotentialKind { V4_5, V12_13, V6_7, V14, V15 };

inline constexpr std::array<PotentialKind, 5> kAllKinds = {
    PotentialKind::V4_5, PotentialKind::V12_13, PotentialKind::V6_7, PotentialKind::V14,
    PotentialKind::V15};

bool requires_polarized_mass(PotentialKind kind);

/// Display symbol of the coupling constant, e.g. "f₁₂₊₁₃".
std::string_view coupling_symbol(PotentialKind kind);

/// Lower-case identifier used in configs and file names, e.g. "v12_13".
std::string_view kind_name(PotentialKind kind);
std::optional<PotentialKind> parse_kind(std::string_view name);

struct PairContext {
  Vec3 r_vec;
  Vec3 v_vec;
  Vec3 sigma_nv;
  std::optional<Vec3> sigma_tm;
  double lambda = 0.0;  // may be +infinity
};

double kernel_v12_13(const PairContext& ctx, const PhysicalConstants& k = kConstants);
double kernel_v4_5(const PairContext& ctx, const PhysicalConstants& k = kConstants);
double kernel_v6_7(const PairContext& ctx, const PhysicalConstants& k = kConstants);
double kernel_v14(const PairContext& ctx, const PhysicalConstants& k = kConstants);
double kernel_v15(const PairContext& ctx, const PhysicalConstants& k = kConstants);

double kernel(PotentialKind kind, const PairContext& ctx, const PhysicalConstants& k = kConstants);

/// Density that multiplies the kernel: nucleon density for the spin-velocity
/// potentials, polarized spin density for the spin-spin ones.
/// Throws GeometryMismatch when a polarized mass is required but absent.
double source_density(PotentialKind kind, const TestMass& mass);

}  // namespace exospin
