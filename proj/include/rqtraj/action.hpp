#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rqtraj/errors.hpp"
#include "rqtraj/kleingordon.hpp"
#include "rqtraj/microstate.hpp"
#include "rqtraj/numeric.hpp"
#include "rqtraj/particle.hpp"
#include "rqtraj/potential.hpp"
#include "rqtraj/units.hpp"

namespace rqtraj {

struct ActionState {
  double x = 0.0;
  double s0 = 0.0;    // reduced action, continuous across branch boundaries
  double p = 0.0;     // dS0/dx, never zero
  double d2s0 = 0.0;
  double d3s0 = 0.0;
};

// Reduced action S0 = hbar * arctan(a*theta/phi + b) and its first three
// spatial derivatives, all in closed form.
//
// Writing N = a*theta + b*phi and G = phi^2 + N^2, the identity
// N'*phi - N*phi' = a*W gives
//
//   P      =  hbar a W / G,
//   S0''   = -hbar a W G' / G^2,
//   S0'''  =  hbar a W (2 G'^2 - G'' G) / G^3,
//
// where G'' = 2(phi'^2 + N'^2) + 2 Lambda G uses psi'' = Lambda psi, so no
// sample differencing ever happens. S0 itself is the unwrapped angle of the
// point (phi, N), which is what makes it continuous across zeros of phi.
class ReducedAction {
 public:
  ReducedAction(const KGBasis& basis, const Microstate& ms, const UnitSystem& u)
      : basis_(basis), ms_(ms), units_(u) {
    ms_.validate();
    u.validate();
    if (basis_.kind() == KGBasis::Kind::Numeric) build_unwrap_table();
  }

  const KGBasis& basis() const { return basis_; }
  const Microstate& microstate() const { return ms_; }
  const UnitSystem& units() const { return units_; }

  double momentum(double x) const {
    const BasisSample s = basis_.eval(x);
    return units_.hbar * ms_.a * basis_.wronskian() / denom(s, x);
  }

  ActionState at(double x) const {
    const BasisSample s = basis_.eval(x);
    const double n = ms_.a * s.theta + ms_.b * s.phi;
    const double np = ms_.a * s.theta_prime + ms_.b * s.phi_prime;
    const double g = s.phi * s.phi + n * n;
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::BasisDegenerate, "theta and phi vanish together at x=" + std::to_string(x));
    }
    const double aw = units_.hbar * ms_.a * basis_.wronskian();
    const double gp = 2.0 * (s.phi * s.phi_prime + n * np);
    const double lambda = basis_.kg_coefficient(x);
    const double gpp = 2.0 * (s.phi_prime * s.phi_prime + np * np) + 2.0 * lambda * g;

    ActionState out;
    out.x = x;
    out.s0 = units_.hbar * angle(x);
    out.p = aw / g;
    out.d2s0 = -aw * gp / (g * g);
    out.d3s0 = aw * (2.0 * gp * gp - gpp * g) / (g * g * g);
    return out;
  }

  // Unwrapped angle of (phi, a*theta + b*phi); S0 = hbar * angle.
  double angle(double x) const {
    switch (basis_.kind()) {
      case KGBasis::Kind::FreeAllowed: {
        const double xi = basis_.wave_number() * (x - basis_.origin());
        // Exact phase reduction keeps the tangent and the branch count on
        // the same side of each boundary.
        const double delta = std::remainder(xi, kPi);
        const double winding = std::round((xi - delta) / kPi);
        const double principal = std::atan(ms_.a * std::tan(delta) + ms_.b);
        const double sign_a = ms_.a > 0.0 ? 1.0 : -1.0;
        return principal + sign_a * kPi * winding;
      }
      case KGBasis::Kind::FreeForbidden: {
        // phi = exp(+kappa xi) never vanishes, so the principal value is
        // already continuous.
        const double xi = x - basis_.origin();
        return std::atan(ms_.a * std::exp(-2.0 * basis_.wave_number() * xi) + ms_.b);
      }
      case KGBasis::Kind::Numeric: {
        const BasisSample s = basis_.eval(x);
        const double raw = std::atan2(ms_.a * s.theta + ms_.b * s.phi, s.phi);
        const double h = basis_.grid_step();
        auto [lo, hi] = basis_.domain();
        (void)hi;
        std::size_t i = static_cast<std::size_t>((x - lo) / h);
        if (i >= grid_angle_.size()) i = grid_angle_.size() - 1;
        return grid_angle_[i] + wrap_pi(raw - grid_raw_[i]);
      }
    }
    return 0.0;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static double wrap_pi(double d) {
    return std::remainder(d, 2.0 * kPi);
  }

  double denom(const BasisSample& s, double x) const {
    const double n = ms_.a * s.theta + ms_.b * s.phi;
    const double g = s.phi * s.phi + n * n;
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::BasisDegenerate, "theta and phi vanish together at x=" + std::to_string(x));
    }
    return g;
  }

  // Phase-unwrap the grid angles once; the step is far below the oscillation
  // scale, so per-cell increments stay well inside (-pi, pi).
  void build_unwrap_table() {
    const std::size_t n = basis_.grid_size();
    grid_raw_.resize(n);
    grid_angle_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = basis_.grid_point(i);
      const BasisSample s = basis_.eval(x);
      grid_raw_[i] = std::atan2(ms_.a * s.theta + ms_.b * s.phi, s.phi);
    }
    grid_angle_[0] = grid_raw_[0];
    for (std::size_t i = 1; i < n; ++i) {
      grid_angle_[i] = grid_angle_[i - 1] + wrap_pi(grid_raw_[i] - grid_raw_[i - 1]);
    }
  }

  KGBasis basis_;
  Microstate ms_;
  UnitSystem units_;
  std::vector<double> grid_raw_, grid_angle_;
};

inline ActionState reduced_action(const KGBasis& basis, const Microstate& ms,
                                  const UnitSystem& u, double x) {
  return ReducedAction(basis, ms, u).at(x);
}

// f = c^2 P^2 / [m0^2 c^4 - (E - V)^2]. With this denominator f is negative
// in allowed regions and positive in forbidden ones; callers that only need
// the magnitude should take |f|. See f_sign_report below.
inline double f_function(const KGBasis& basis, const Microstate& ms, const ParticleSpec& p,
                         const Potential& pot, const UnitSystem& u, double x,
                         double eps_deg = kDefaultDegenerateBand) {
  if (classify_region(p, pot, u, x, eps_deg) == Region::Degenerate) {
    throw Error(ErrorCode::DegenerateEnergy, "f is singular on the degenerate surface");
  }
  const double mom = ReducedAction(basis, ms, u).momentum(x);
  const double ev = p.E - pot.value(x);
  const double mc2 = p.rest_energy(u);
  return u.c * u.c * mom * mom / (mc2 * mc2 - ev * ev);
}

// Audit of the sign convention: returns +1 when sign(f) agrees with the
// region (negative in allowed, positive in forbidden), -1 otherwise.
inline int f_sign_report(const KGBasis& basis, const Microstate& ms, const ParticleSpec& p,
                         const Potential& pot, const UnitSystem& u, double x) {
  const double f = f_function(basis, ms, p, pot, u, x);
  const Region r = classify_region(p, pot, u, x);
  const bool consistent = (r == Region::Allowed && f < 0.0) || (r == Region::Forbidden && f > 0.0);
  return consistent ? 1 : -1;
}

// Relativistic quantum coordinate: integral of c P / sqrt((E-V)^2 - m0^2 c^4)
// from x_ref to x. Defined on paths that stay in the allowed regime; the
// square of its x-derivative equals |f|.
inline double quantum_coordinate(const KGBasis& basis, const Microstate& ms,
                                 const ParticleSpec& p, const Potential& pot,
                                 const UnitSystem& u, double x_ref, double x,
                                 double rel_tol = 1e-12,
                                 double eps_deg = kDefaultDegenerateBand) {
  if (x_ref == x) return 0.0;
  const int n_scan = 65;
  for (int i = 0; i <= n_scan; ++i) {
    const double xx = x_ref + (x - x_ref) * static_cast<double>(i) / n_scan;
    if (classify_region(p, pot, u, xx, eps_deg) != Region::Allowed) {
      throw Error(ErrorCode::DegeneratePath,
                  "integration path leaves the allowed regime at x=" + std::to_string(xx));
    }
  }
  ReducedAction action(basis, ms, u);
  auto integrand = [&](double xx) {
    const double ev = p.E - pot.value(xx);
    const double mc2 = p.rest_energy(u);
    return u.c * action.momentum(xx) / std::sqrt(ev * ev - mc2 * mc2);
  };
  return integrate(integrand, x_ref, x, rel_tol);
}

// {S0; x} = S0'''/S0' - (3/2)(S0''/S0')^2
inline double schwarzian_of_action(const ActionState& s) {
  if (s.p == 0.0) throw Error(ErrorCode::ZeroMomentum, "Schwarzian needs P != 0");
  const double r2 = s.d2s0 / s.p;
  return s.d3s0 / s.p - 1.5 * r2 * r2;
}

// Residual of the relativistic quantum stationary Hamilton-Jacobi equation in
// the m0-cleared form (multiplied through by 2 m0 c^2, which keeps m0 = 0
// regular):
//
//   c^2 P^2 + (hbar^2 c^2 / 2) {S0; x} + m0^2 c^4 - (E - V)^2.
//
// Zero, up to rounding and basis accuracy, for any state built by
// ReducedAction from a valid basis. Units: energy^2; scale by E^2 for a
// dimensionless check.
inline double rqshje_residual(const ActionState& s, const ParticleSpec& p,
                              const Potential& pot, const UnitSystem& u, double x) {
  const double ev = p.E - pot.value(x);
  const double mc2 = p.rest_energy(u);
  const double hc = u.hbar * u.c;
  return u.c * u.c * s.p * s.p + 0.5 * hc * hc * schwarzian_of_action(s) + mc2 * mc2 - ev * ev;
}

}  // namespace rqtraj
