#include "quadrature_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace oracle {
namespace {

using exospin::Vec3;
constexpr double kPi = std::numbers::pi;

struct Rule {
  std::vector<double> x;  // on [0, 1]
  std::vector<double> w;
};

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    // boost stores the non-negative half
    r.x.push_back(0.5 * (1.0 + a[i]));
    r.w.push_back(0.5 * w[i]);
    if (a[i] != 0.0) {
      r.x.push_back(0.5 * (1.0 - a[i]));
      r.w.push_back(0.5 * w[i]);
    }
  }
  return r;
}

const Rule& rule(int order) {
  static const Rule r6 = make_rule<6>(), r8 = make_rule<8>(), r10 = make_rule<10>(),
                    r12 = make_rule<12>(), r16 = make_rule<16>();
  switch (order) {
    case 6: return r6;
    case 8: return r8;
    case 10: return r10;
    case 12: return r12;
    case 16: return r16;
  }
  throw std::invalid_argument("oracle: unsupported Gauss order");
}

// Breakpoints a = b0 < b1 < ... = b, widths first, first*g, first*g^2, ...
std::vector<double> graded(double a, double b, double first, double g) {
  std::vector<double> out{a};
  double w = first;
  double x = a;
  while (x + w < b) {
    x += w;
    out.push_back(x);
    w *= g;
  }
  // fold a sliver into the previous panel
  if (out.size() > 1 && b - out.back() < 0.25 * w / g) out.pop_back();
  out.push_back(b);
  return out;
}

// Quadrature nodes for a graded partition, as (x, weight).
std::vector<std::pair<double, double>> nodes(const std::vector<double>& breaks, const Rule& r) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p], h = breaks[p + 1] - lo;
    for (std::size_t i = 0; i < r.x.size(); ++i) out.emplace_back(lo + h * r.x[i], h * r.w[i]);
  }
  return out;
}

int prev_order(int n) { return n >= 16 ? 12 : n >= 12 ? 10 : n >= 10 ? 8 : 6; }

}  // namespace

OracleOptions coarsened(const OracleOptions& b) {
  OracleOptions r = b;
  r.order = prev_order(b.order);
  r.n_phi = b.n_phi * 3 / 4;
  r.n_rho = prev_order(b.n_rho);
  r.n_theta = b.n_theta * 3 / 4;
  r.grading = 1.0 + (b.grading - 1.0) * 1.25;
  return r;
}

double static_field(const exospin::ExperimentGeometry& geom, exospin::PotentialKind kind,
                    double lambda, const Vec3& displacement, const Vec3& velocity,
                    const OracleOptions& opts) {
  const auto& nv = geom.sensor;
  const auto& tm = geom.mass;
  const Rule& gr = rule(opts.order);
  const double density = exospin::source_density(kind, tm);

  exospin::PairContext ctx;
  ctx.sigma_nv = nv.sigma_nv;
  if (tm.spin) ctx.sigma_tm = tm.spin->sigma_tm;
  ctx.lambda = lambda;
  ctx.v_vec = velocity;

  const double z_lo = geom.gap, z_hi = geom.gap + tm.thickness;
  const Vec3 center(displacement.x(), displacement.y(), 0.0);

  // NV points: depth graded from the surface, Gauss in rho (weight rho),
  // trapezoid in angle.
  const auto depth = nodes(graded(0.0, nv.thickness, 0.5 * std::min(lambda, nv.thickness),
                                  opts.grading),
                           gr);
  const Rule& rr = rule(opts.n_rho);

  double total = 0.0;
  for (const auto& [t, wt] : depth) {
    const double pz = -t;
    const double h0 = z_lo - pz;
    const auto zs = nodes(graded(z_lo, z_hi, 0.5 * std::min(h0, lambda), opts.grading), gr);
    const double s_first = 0.5 * std::min(h0, lambda);
    for (std::size_t ir = 0; ir < rr.x.size(); ++ir) {
      const double rho = nv.illum_radius * rr.x[ir];
      const double w_rho = nv.illum_radius * rr.w[ir] * rho;
      for (int it = 0; it < opts.n_theta; ++it) {
        const double th = 2.0 * kPi * (it + 0.5) / opts.n_theta;
        const Vec3 foot(rho * std::cos(th), rho * std::sin(th), 0.0);
        const Vec3 c = center - foot;
        const double c2 = c.squaredNorm();
        const double r2 = tm.radius * tm.radius;
        if (c2 >= r2) throw std::invalid_argument("oracle: NV foot outside the mass disk");

        double inner = 0.0;
        for (int ip = 0; ip < opts.n_phi; ++ip) {
          const double phi = 2.0 * kPi * ip / opts.n_phi;
          const Vec3 u(std::cos(phi), std::sin(phi), 0.0);
          const double uc = u.dot(c);
          const double s_max = uc + std::sqrt(uc * uc - c2 + r2);
          const auto ss = nodes(graded(0.0, s_max, s_first, opts.grading), gr);
          double ring = 0.0;
          for (const auto& [s, ws] : ss) {
            double col = 0.0;
            for (const auto& [z, wz] : zs) {
              ctx.r_vec = Vec3(s * u.x(), s * u.y(), z - pz);
              col += wz * exospin::kernel(kind, ctx);
            }
            ring += ws * s * col;
          }
          inner += ring;
        }
        inner *= 2.0 * kPi / opts.n_phi;
        total += wt * w_rho * (2.0 * kPi / opts.n_theta) * inner;
      }
    }
  }
  return density * total / exospin::sensing_volume(nv);
}

double amplitude(const exospin::ExperimentGeometry& geom, exospin::PotentialKind kind,
                 double lambda, int n_phase, const OracleOptions& opts) {
  const auto& traj = geom.trajectory;
  const Vec3 v_peak = exospin::peak_velocity(traj) * traj.direction;
  std::vector<std::pair<Vec3, double>> cache;
  double amp = 0.0;
  for (int i = 0; i < n_phase; ++i) {
    const double p = 2.0 * kPi * i / n_phase;
    const double c = exospin::velocity_phase_factor(p);
    if (c == 0.0) continue;
    const Vec3 d = exospin::displacement_at_phase(traj, p);
    double g = 0.0;
    bool hit = false;
    for (const auto& [dd, gg] : cache) {
      if ((dd - d).norm() <= 1e-15 * (1.0 + d.norm())) {
        g = gg;
        hit = true;
        break;
      }
    }
    if (!hit) {
      g = static_field(geom, kind, lambda, d, v_peak, opts);
      cache.emplace_back(d, g);
    }
    amp += 2.0 / n_phase * c * c * g;
  }
  return amp;
}

CheckedAmplitude amplitude_with_error(const exospin::ExperimentGeometry& geom,
                                      exospin::PotentialKind kind, double lambda, int n_phase,
                                      const OracleOptions& opts) {
  const double a = amplitude(geom, kind, lambda, n_phase, opts);
  // the coarse-fine difference bounds the error of the finer result
  const double b = amplitude(geom, kind, lambda, n_phase, coarsened(opts));
  return {a, std::abs(a - b)};
}

}  // namespace oracle
