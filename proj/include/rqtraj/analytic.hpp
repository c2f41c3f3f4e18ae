#pragma once

#include <cmath>
#include <vector>

#include "rqtraj/dynamics.hpp"
#include "rqtraj/errors.hpp"
#include "rqtraj/microstate.hpp"
#include "rqtraj/particle.hpp"
#include "rqtraj/units.hpp"

namespace rqtraj {

namespace detail {
inline constexpr double kPi = 3.14159265358979323846;
}

// Spatial wave number k and temporal rate omega of the closed free-particle
// family: k = sqrt(E^2 - m0^2 c^4)/(hbar c), omega = (E^2 - m0^2 c^4)/(hbar E).
// Their ratio omega/k is the classical velocity c sqrt(E^2 - m0^2 c^4)/E.
// Requires the allowed regime; the photon is the m0 = 0 special case.
struct FreeRates {
  double k = 0.0;
  double omega = 0.0;
};

inline FreeRates free_rates(const ParticleSpec& p, const UnitSystem& u,
                            double eps_deg = kDefaultDegenerateBand) {
  p.validate();
  u.validate();
  const double mc2 = p.rest_energy(u);
  const double d = p.E * p.E - mc2 * mc2;
  if (std::abs(d) <= eps_deg * (p.E * p.E + mc2 * mc2)) {
    throw Error(ErrorCode::DegenerateEnergy, "E = m0 c^2 has no free trajectory family");
  }
  if (d < 0.0) {
    throw Error(ErrorCode::WrongRegime, "E < m0 c^2: use the forbidden-region forms");
  }
  return {std::sqrt(d) / (u.hbar * u.c), d / (u.hbar * p.E)};
}

struct ClosedPoint {
  double x = 0.0;
  long branch = 0;
};

// Closed time equation of the free trajectories:
//
//   x(t) = (1/k) arctan[a tan(omega (t - t0)) + b] + sign(a) (pi/k) n + x0,
//
// with the branch n = round(omega (t - t0) / pi), which readjusts the
// additive constant each time the tangent sweeps a full branch and keeps
// x(t) continuous and monotone (increasing for a > 0, decreasing for a < 0).
// a = 1, b = 0 collapses the branch terms and yields the straight classical
// line x = (omega/k)(t - t0) + x0.
inline ClosedPoint free_trajectory_closed(const ParticleSpec& p, const Microstate& ms,
                                          const UnitSystem& u, double t,
                                          double eps_deg = kDefaultDegenerateBand) {
  ms.validate();
  const FreeRates r = free_rates(p, u, eps_deg);
  const double theta = r.omega * (t - ms.t0);
  // Exact reduction keeps the tangent's argument and the branch index on the
  // same side of the boundary even when theta sits right on it.
  const double delta = std::remainder(theta, detail::kPi);
  const long n = std::lround((theta - delta) / detail::kPi);
  const double sign_a = ms.a > 0.0 ? 1.0 : -1.0;
  const double x = std::atan(ms.a * std::tan(delta) + ms.b) / r.k +
                   sign_a * detail::kPi * static_cast<double>(n) / r.k + ms.x0;
  return {x, n};
}

inline ClosedPoint photon_trajectory_closed(double E, const Microstate& ms,
                                            const UnitSystem& u, double t) {
  return free_trajectory_closed(ParticleSpec{0.0, E}, ms, u, t);
}

namespace detail {

// Derivatives of y(theta) = arctan(a tan theta + b) with respect to theta,
// written through N = a sin + b cos and G = cos^2 + N^2 so they stay bounded
// and accurate across the tangent poles:
//   y'   =  a / G
//   y''  = -a G' / G^2
//   y''' =  a (2 G'^2 - G'' G) / G^3
// with G' = 2(cos cos' + N N') and G'' = 2(cos'^2 + N'^2) - 2G.
struct ArctanTanDerivs {
  double y1 = 0.0, y2 = 0.0, y3 = 0.0;
};

inline ArctanTanDerivs arctan_tan_derivs(double a, double b, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double n = a * s + b * c;
  const double np = a * c - b * s;
  const double g = c * c + n * n;
  const double gp = 2.0 * (-c * s + n * np);
  const double gpp = 2.0 * (s * s + np * np) - 2.0 * g;
  ArctanTanDerivs d;
  d.y1 = a / g;
  d.y2 = -a * gp / (g * g);
  d.y3 = a * (2.0 * gp * gp - gpp * g) / (g * g * g);
  return d;
}

}  // namespace detail

// Time derivatives of the closed family, for oracle comparisons and ODE
// initial data: xdot = (omega/k) y', xddot = (omega^2/k) y'',
// jerk = (omega^3/k) y''' with y = arctan(a tan(omega (t - t0)) + b).
inline KinematicState closed_free_kinematics(const ParticleSpec& p, const Microstate& ms,
                                             const UnitSystem& u, double t,
                                             double eps_deg = kDefaultDegenerateBand) {
  ms.validate();
  const FreeRates r = free_rates(p, u, eps_deg);
  const auto d = detail::arctan_tan_derivs(ms.a, ms.b, r.omega * (t - ms.t0));
  KinematicState out;
  out.x = free_trajectory_closed(p, ms, u, t, eps_deg).x;
  out.v = r.omega / r.k * d.y1;
  out.acc = r.omega * r.omega / r.k * d.y2;
  out.jerk = r.omega * r.omega * r.omega / r.k * d.y3;
  return out;
}

// Spacetime lattice of nodes every trajectory of the family passes through,
// regardless of (a, b): times t_n = dt (n + 1/2) + t0 and positions
// x_n = dx (n + 1/2) + x0 with
//   dt = pi hbar E / (E^2 - m0^2 c^4),   dx = pi hbar c / sqrt(E^2 - m0^2 c^4).
// Both spacings are proportional to hbar; for the photon they reduce to
// dt = pi hbar / E and dx = pi hbar c / E.
struct NodeLattice {
  double dt = 0.0;
  double dx = 0.0;
  double t0 = 0.0;
  double x0 = 0.0;

  double node_time(long n) const { return dt * (static_cast<double>(n) + 0.5) + t0; }
  double node_position(long n) const { return dx * (static_cast<double>(n) + 0.5) + x0; }
  double mean_velocity() const { return dx / dt; }
};

inline NodeLattice node_lattice(const ParticleSpec& p, const UnitSystem& u, double x0 = 0.0,
                                double t0 = 0.0, double eps_deg = kDefaultDegenerateBand) {
  const FreeRates r = free_rates(p, u, eps_deg);
  return {detail::kPi / r.omega, detail::kPi / r.k, t0, x0};
}

// Average velocity between adjacent nodes: c sqrt(E^2 - m0^2 c^4) / E, which
// is the classical velocity and stays below c for m0 > 0; exactly c for the
// photon.
inline double mean_velocity(const ParticleSpec& p, const UnitSystem& u,
                            double eps_deg = kDefaultDegenerateBand) {
  const FreeRates r = free_rates(p, u, eps_deg);
  return r.omega / r.k;
}

namespace detail {

inline void require_forbidden(const ParticleSpec& p, const UnitSystem& u, double eps_deg) {
  p.validate();
  u.validate();
  const double mc2 = p.rest_energy(u);
  if (std::abs(p.E * p.E - mc2 * mc2) <= eps_deg * (p.E * p.E + mc2 * mc2)) {
    throw Error(ErrorCode::DegenerateEnergy, "E = m0 c^2 sits on the degenerate surface");
  }
  if (p.E > mc2) {
    throw Error(ErrorCode::WrongRegime, "E > m0 c^2: not in the classically forbidden regime");
  }
}

}  // namespace detail

// Motion in the classically forbidden regime (0 < E < m0 c^2):
//
//   x(t) = [hbar c / (2 sqrt(m0^2 c^4 - E^2))] ln| a tan(omega (t - t0)) + b | + x0,
//
// with omega = (E^2 - m0^2 c^4)/(hbar E) < 0. The trajectory diverges
// logarithmically where a tan + b vanishes and runs to +infinity at tangent
// poles; each open interval between singular times is a separate segment.
inline double forbidden_trajectory_closed(const ParticleSpec& p, const Microstate& ms,
                                          const UnitSystem& u, double t,
                                          double eps_deg = kDefaultDegenerateBand) {
  ms.validate();
  detail::require_forbidden(p, u, eps_deg);
  const double mc2 = p.rest_energy(u);
  const double omega = (p.E * p.E - mc2 * mc2) / (u.hbar * p.E);
  const double g =
      ms.a * std::tan(std::remainder(omega * (t - ms.t0), detail::kPi)) + ms.b;
  const double x =
      u.hbar * u.c / (2.0 * std::sqrt(mc2 * mc2 - p.E * p.E)) * std::log(std::abs(g)) + ms.x0;
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::SingularTime, "t=" + std::to_string(t) + " is a singular time");
  }
  return x;
}

// Velocity of the forbidden-regime motion, the time derivative of the
// trajectory above:
//
//   xdot(t) = -[a c sqrt(m0^2 c^4 - E^2) / (2 E)]
//             (1 + tan^2(omega (t - t0))) / (a tan(omega (t - t0)) + b).
//
// It diverges at the singular times (both families) and its sign is opposite
// to the conjugate momentum's, as the momentum-velocity relation requires in
// this regime.
inline double forbidden_velocity_closed(const ParticleSpec& p, const Microstate& ms,
                                        const UnitSystem& u, double t,
                                        double eps_deg = kDefaultDegenerateBand) {
  ms.validate();
  detail::require_forbidden(p, u, eps_deg);
  const double mc2 = p.rest_energy(u);
  const double omega = (p.E * p.E - mc2 * mc2) / (u.hbar * p.E);
  const double tn = std::tan(std::remainder(omega * (t - ms.t0), detail::kPi));
  const double g = ms.a * tn + ms.b;
  const double v =
      -(ms.a * u.c * std::sqrt(mc2 * mc2 - p.E * p.E) / (2.0 * p.E)) * (1.0 + tn * tn) / g;
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::SingularTime, "t=" + std::to_string(t) + " is a singular time");
  }
  return v;
}

// All singular times of the forbidden motion in [t_from, t_to], sorted:
// zeros of a tan(omega (t - t0)) + b and the tangent poles.
inline std::vector<double> forbidden_singular_times(const ParticleSpec& p, const Microstate& ms,
                                                    const UnitSystem& u, double t_from,
                                                    double t_to,
                                                    double eps_deg = kDefaultDegenerateBand) {
  ms.validate();
  detail::require_forbidden(p, u, eps_deg);
  if (!(t_to >= t_from)) return {};
  const double mc2 = p.rest_energy(u);
  const double omega = (p.E * p.E - mc2 * mc2) / (u.hbar * p.E);

  std::vector<double> out;
  auto collect = [&](double theta_star) {
    // theta = omega (t - t0) = theta_star + n pi
    const double th_a = omega * (t_from - ms.t0);
    const double th_b = omega * (t_to - ms.t0);
    const double lo = std::min(th_a, th_b), hi = std::max(th_a, th_b);
    const long n_lo = static_cast<long>(std::ceil((lo - theta_star) / detail::kPi - 1e-12));
    const long n_hi = static_cast<long>(std::floor((hi - theta_star) / detail::kPi + 1e-12));
    for (long n = n_lo; n <= n_hi; ++n) {
      out.push_back(ms.t0 + (theta_star + static_cast<double>(n) * detail::kPi) / omega);
    }
  };
  collect(std::atan(-ms.b / ms.a));  // zeros of a tan + b
  collect(detail::kPi / 2.0);        // tangent poles
  std::sort(out.begin(), out.end());
  return out;
}

// The generating data of a closed-form free trajectory, expressed for the
// quadrature engine: the same curve labelled (a, b, x0, t0) by the closed
// time equation is produced by the reduced action with the dual constants
// (1/a, -b/a), a basis centered on x0, and start position
// x(t0) = x0 + arctan(b)/k. Lets the two independent routes be compared
// point by point.
struct ActionRun {
  Microstate ms;         // dual constants for the reduced action
  double basis_origin;   // center of the free basis
  double start_x;        // position at time t0
};

inline ActionRun action_run_for_closed(const ParticleSpec& p, const Microstate& ms_closed,
                                       const UnitSystem& u,
                                       double eps_deg = kDefaultDegenerateBand) {
  const FreeRates r = free_rates(p, u, eps_deg);
  Microstate dual = dual_constants(ms_closed);
  const double start_x = ms_closed.x0 + std::atan(ms_closed.b) / r.k;
  dual.x0 = start_x;
  return {dual, ms_closed.x0, start_x};
}

}  // namespace rqtraj
