#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rqtraj/action.hpp"
#include "rqtraj/errors.hpp"
#include "rqtraj/kleingordon.hpp"
#include "rqtraj/microstate.hpp"
#include "rqtraj/numeric.hpp"
#include "rqtraj/particle.hpp"
#include "rqtraj/potential.hpp"
#include "rqtraj/units.hpp"

namespace rqtraj {

struct KinematicState {
  double x = 0.0;
  double v = 0.0;
  double acc = 0.0;
  double jerk = 0.0;
};

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  double p = 0.0;
  long branch = 0;
  double firqnl = 0.0;
};

struct Trajectory {
  ParticleSpec particle;
  Microstate ms;
  UnitSystem units;
  std::vector<TrajectorySample> samples;
  std::vector<double> node_times;  // branch-boundary times found inside the span
};

struct TrajectoryOptions {
  double quad_tol = 1e-12;
  double root_tol = 1e-12;       // tolerance in t for the inversion
  double guard_fraction = 1e-6;  // of the node spacing; samples inside are dropped
  double eps_deg = kDefaultDegenerateBand;
};

// xdot = [(E-V)^2 - m0^2 c^4] / [(E-V) P]. The numerator's sign makes the
// velocity share P's sign in allowed regions and oppose it in forbidden ones.
inline double velocity_from_momentum(double P, const ParticleSpec& p, const Potential& pot,
                                     const UnitSystem& u, double x,
                                     double eps_deg = kDefaultDegenerateBand) {
  if (P == 0.0) throw Error(ErrorCode::ZeroMomentum, "velocity undefined for P = 0");
  if (classify_region(p, pot, u, x, eps_deg) == Region::Degenerate) {
    throw Error(ErrorCode::DegenerateEnergy, "velocity undefined on the degenerate surface");
  }
  const double ev = p.E - pot.value(x);
  const double mc2 = p.rest_energy(u);
  return (ev * ev - mc2 * mc2) / (ev * P);
}

// t = integral of (E-V) P / [(E-V)^2 - m0^2 c^4] dx. Signed and additive.
// Preconditions checked on a scan of the interval: the path must not touch
// the degenerate band and xdot must keep one sign.
inline double time_of_flight(const ReducedAction& action, const ParticleSpec& p,
                             const Potential& pot, const UnitSystem& u, double x_from,
                             double x_to, double rel_tol = 1e-12,
                             double eps_deg = kDefaultDegenerateBand) {
  if (x_from == x_to) return 0.0;
  const int n_scan = 64;
  int sign_seen = 0;
  for (int i = 0; i <= n_scan; ++i) {
    const double x = x_from + (x_to - x_from) * static_cast<double>(i) / n_scan;
    const Region r = classify_region(p, pot, u, x, eps_deg);
    if (r == Region::Degenerate) {
      throw Error(ErrorCode::DegeneratePath,
                  "path touches the degenerate band at x=" + std::to_string(x));
    }
    const double v = velocity_from_momentum(action.momentum(x), p, pot, u, x, eps_deg);
    const int s = v > 0.0 ? 1 : -1;
    if (sign_seen == 0) sign_seen = s;
    if (s != sign_seen) {
      throw Error(ErrorCode::SignChange, "xdot changes sign inside the interval");
    }
  }
  const double mc2 = p.rest_energy(u);
  auto integrand = [&](double x) {
    const double ev = p.E - pot.value(x);
    return ev * action.momentum(x) / (ev * ev - mc2 * mc2);
  };
  return integrate(integrand, x_from, x_to, rel_tol);
}

inline double time_of_flight(const KGBasis& basis, const Microstate& ms, const ParticleSpec& p,
                             const Potential& pot, const UnitSystem& u, double x_from,
                             double x_to, double rel_tol = 1e-12,
                             double eps_deg = kDefaultDegenerateBand) {
  return time_of_flight(ReducedAction(basis, ms, u), p, pot, u, x_from, x_to, rel_tol, eps_deg);
}

// Velocity, acceleration and jerk at a point, obtained by differentiating the
// momentum-velocity relation through the action's closed-form derivatives.
// With N = (E-V)^2 - m0^2 c^4 and M = (E-V) P one has v = N/M, and the
// quotient rule gives dv/dx and d2v/dx2 from (V', V'', S0'', S0'''); then
// acc = v dv/dx and jerk = v d(acc)/dx. No time differencing anywhere.
inline KinematicState kinematics_along(const ReducedAction& action, const ParticleSpec& p,
                                       const Potential& pot, const UnitSystem& u, double x,
                                       double eps_deg = kDefaultDegenerateBand) {
  if (classify_region(p, pot, u, x, eps_deg) == Region::Degenerate) {
    throw Error(ErrorCode::DegenerateEnergy, "kinematics undefined on the degenerate surface");
  }
  const ActionState st = action.at(x);
  if (st.p == 0.0) throw Error(ErrorCode::ZeroMomentum, "kinematics need P != 0");

  const double ev = p.E - pot.value(x);
  const double v1p = pot.slope(x);
  const double v2p = pot.curvature(x);
  const double mc2 = p.rest_energy(u);

  const double n = ev * ev - mc2 * mc2;
  const double n1 = -2.0 * ev * v1p;
  const double n2 = 2.0 * v1p * v1p - 2.0 * ev * v2p;
  const double m = ev * st.p;
  const double m1 = -v1p * st.p + ev * st.d2s0;
  const double m2 = -v2p * st.p - 2.0 * v1p * st.d2s0 + ev * st.d3s0;

  const double v = n / m;
  const double dv = (n1 * m - n * m1) / (m * m);
  const double d2v = (n2 * m - n * m2) / (m * m) - 2.0 * m1 * (n1 * m - n * m1) / (m * m * m);

  KinematicState out;
  out.x = x;
  out.v = v;
  out.acc = v * dv;
  out.jerk = v * (dv * dv + v * d2v);
  return out;
}

inline KinematicState kinematics_along(const KGBasis& basis, const Microstate& ms,
                                       const ParticleSpec& p, const Potential& pot,
                                       const UnitSystem& u, double x,
                                       double eps_deg = kDefaultDegenerateBand) {
  return kinematics_along(ReducedAction(basis, ms, u), p, pot, u, x, eps_deg);
}

// First integral of the relativistic quantum Newton's law, evaluated on
// kinematic data. With u = E - V, D = u^2 - m0^2 c^4, S = u^2 + m0^2 c^4:
//
//   D^2 - (v^2/c^2) u^2 D
//   + (hbar^2/2) [ (3/2)(acc/v)^2 - jerk/v ] u^2
//   - (hbar^2/2) (acc V' + v^2 V'') (S/D) u
//   - (3 hbar^2/4) (v V')^2 (S/D)^2
//   -  hbar^2     (v V')^2 m0^2 c^4 / D.
//
// Dropping the hbar^2 terms factors this into D * (D - u^2 v^2 / c^2), whose
// vanishing is the classical relativistic conservation law; taking c to
// infinity at fixed kinetic energy recovers the nonrelativistic first
// integral below. Units: energy^4.
inline double firqnl_residual(const KinematicState& kin, const ParticleSpec& p,
                              const Potential& pot, const UnitSystem& u, double x,
                              double eps_deg = kDefaultDegenerateBand) {
  if (kin.v == 0.0) throw Error(ErrorCode::ZeroVelocity, "residual undefined for xdot = 0");
  if (classify_region(p, pot, u, x, eps_deg) == Region::Degenerate) {
    throw Error(ErrorCode::DegenerateEnergy, "residual undefined on the degenerate surface");
  }
  const double ev = p.E - pot.value(x);
  const double v1p = pot.slope(x);
  const double v2p = pot.curvature(x);
  const double mc2 = p.rest_energy(u);
  const double d = ev * ev - mc2 * mc2;
  const double sig = ev * ev + mc2 * mc2;
  const double c2 = u.c * u.c;
  const double h2 = u.hbar * u.hbar;
  const double v = kin.v;
  const double bracket = 1.5 * (kin.acc / v) * (kin.acc / v) - kin.jerk / v;
  const double vv1 = v * v1p;
  return d * d - (v * v / c2) * ev * ev * d + 0.5 * h2 * bracket * ev * ev -
         0.5 * h2 * (kin.acc * v1p + v * v * v2p) * (sig / d) * ev -
         0.75 * h2 * vv1 * vv1 * (sig / d) * (sig / d) - h2 * vv1 * vv1 * mc2 * mc2 / d;
}

// The hbar-free part of the residual above, exposed for the sign-audit
// checks against purely classical relativistic motion.
inline double firqnl_residual_classical_part(const KinematicState& kin, const ParticleSpec& p,
                                             const Potential& pot, const UnitSystem& u,
                                             double x) {
  const double ev = p.E - pot.value(x);
  const double mc2 = p.rest_energy(u);
  const double d = ev * ev - mc2 * mc2;
  return d * d - (kin.v * kin.v / (u.c * u.c)) * ev * ev * d;
}

// Kinematic expressions for S0'' and S0''' (the inverse direction of
// kinematics_along); on valid trajectories they reproduce the action
// module's derivatives.
inline std::pair<double, double> action_derivatives_from_kinematics(
    const KinematicState& kin, const ParticleSpec& p, const Potential& pot,
    const UnitSystem& u, double x, double eps_deg = kDefaultDegenerateBand) {
  if (kin.v == 0.0) throw Error(ErrorCode::ZeroVelocity, "derivatives undefined for xdot = 0");
  if (classify_region(p, pot, u, x, eps_deg) == Region::Degenerate) {
    throw Error(ErrorCode::DegenerateEnergy, "derivatives undefined on the degenerate surface");
  }
  const double ev = p.E - pot.value(x);
  const double v1p = pot.slope(x);
  const double v2p = pot.curvature(x);
  const double mc2 = p.rest_energy(u);
  const double d = ev * ev - mc2 * mc2;
  const double a = 1.0 + mc2 * mc2 / (ev * ev);
  const double v = kin.v;
  const double v3 = v * v * v;
  const double d2 = -(v1p / v) * a - (kin.acc / v3) * (d / ev);
  const double d3 = -(v2p / v) * a +
                    (3.0 * kin.acc * kin.acc / (v3 * v * v) - kin.jerk / (v3 * v)) * (d / ev) +
                    2.0 * (kin.acc / v3) * v1p * (ev * ev + mc2 * mc2) / (ev * ev) -
                    (2.0 / v) * v1p * v1p * mc2 * mc2 / (ev * ev * ev);
  return {d2, d3};
}

// Nonrelativistic first integral of the quantum Newton's law; E_nr is the
// total nonrelativistic energy (rest energy excluded). Units: energy^4.
inline double fiqnl_residual(const KinematicState& kin, double E_nr, const Potential& pot_nr,
                             double m, const UnitSystem& u, double x) {
  if (kin.v == 0.0) throw Error(ErrorCode::ZeroVelocity, "residual undefined for xdot = 0");
  const double ev = E_nr - pot_nr.value(x);
  const double v1p = pot_nr.slope(x);
  const double v2p = pot_nr.curvature(x);
  const double h2 = u.hbar * u.hbar;
  const double v = kin.v;
  const double bracket = 1.5 * (kin.acc / v) * (kin.acc / v) - kin.jerk / v;
  const double vv1 = v * v1p;
  return ev * ev * ev * ev - 0.5 * m * v * v * ev * ev * ev + (h2 / 8.0) * bracket * ev * ev -
         (h2 / 8.0) * (v * v * v2p + kin.acc * v1p) * ev - (3.0 * h2 / 16.0) * vv1 * vv1;
}

namespace detail {

// March from a known (x, t) anchor in the travel direction until the target
// time is bracketed, then polish with the bracketed root finder.
class TimeInverter {
 public:
  TimeInverter(const ReducedAction& action, const ParticleSpec& p, const Potential& pot,
               const UnitSystem& u, double x_start, double t_start,
               const TrajectoryOptions& opt)
      : action_(action), particle_(p), potential_(pot), units_(u), opt_(opt) {
    anchor_x_ = x_start;
    anchor_t_ = t_start;
    const auto& basis = action.basis();
    if (!basis.in_domain(x_start)) {
      throw Error(ErrorCode::OutOfDomain, "start position outside basis domain");
    }
    if (basis.kind() == KGBasis::Kind::Numeric) {
      const auto dom = basis.domain();
      lo_limit_ = dom.first;
      hi_limit_ = dom.second;
      base_step_ = (hi_limit_ - lo_limit_) / 64.0;
    } else {
      lo_limit_ = -std::numeric_limits<double>::infinity();
      hi_limit_ = std::numeric_limits<double>::infinity();
      const double k = basis.wave_number();
      base_step_ = k > 0.0 ? 3.14159265358979323846 / (8.0 * k) : 1.0;
    }
  }

  double invert(double t_target) {
    if (t_target == anchor_t_) return anchor_x_;
    const double v_anchor =
        velocity_from_momentum(action_.momentum(anchor_x_), particle_, potential_, units_,
                               anchor_x_, opt_.eps_deg);
    const double dir = (t_target > anchor_t_) ? (v_anchor > 0.0 ? 1.0 : -1.0)
                                              : (v_anchor > 0.0 ? -1.0 : 1.0);
    double lo_x = anchor_x_;
    double lo_t = anchor_t_;
    double step = std::max(base_step_, std::abs(t_target - anchor_t_) * std::abs(v_anchor));
    double hi_x = lo_x, hi_t = lo_t;
    bool bracketed = false;
    for (int i = 0; i < 64; ++i) {
      hi_x = lo_x + dir * step;
      if (hi_x < lo_limit_ || hi_x > hi_limit_) {
        hi_x = dir > 0.0 ? hi_limit_ : lo_limit_;
      }
      hi_t = lo_t + time_of_flight(action_, particle_, potential_, units_, lo_x, hi_x,
                                   opt_.quad_tol, opt_.eps_deg);
      if ((hi_t - t_target) * (lo_t - t_target) <= 0.0) {
        bracketed = true;
        break;
      }
      if (hi_x == lo_limit_ || hi_x == hi_limit_) break;
      lo_x = hi_x;
      lo_t = hi_t;
      step *= 2.0;
    }
    if (!bracketed) {
      throw Error(ErrorCode::RootBracketFailure,
                  "target time not reachable inside the basis domain");
    }
    const double ref_x = lo_x, ref_t = lo_t;
    auto g = [&](double x) {
      return ref_t +
             time_of_flight(action_, particle_, potential_, units_, ref_x, x, opt_.quad_tol,
                            opt_.eps_deg) -
             t_target;
    };
    const double y_tol = opt_.root_tol * std::max(1.0, std::abs(t_target));
    double root;
    if (lo_x == hi_x) {
      root = lo_x;
    } else {
      const double a = std::min(lo_x, hi_x), b = std::max(lo_x, hi_x);
      root = find_root(g, a, b, g(a), g(b), y_tol);
    }
    anchor_x_ = root;
    anchor_t_ = t_target;
    return root;
  }

 private:
  const ReducedAction& action_;
  const ParticleSpec& particle_;
  const Potential& potential_;
  const UnitSystem& units_;
  TrajectoryOptions opt_;
  double anchor_x_, anchor_t_;
  double lo_limit_, hi_limit_, base_step_;
};

}  // namespace detail

// Positions x(t) on a uniform time grid by bracketed inversion of
// time_of_flight, anchored at x(ms.t0) = ms.x0. Samples falling inside the
// guard band around a branch-boundary time are dropped from the output;
// the boundary times found inside the span are reported on the trajectory.
inline Trajectory trajectory_by_quadrature(const KGBasis& basis, const Microstate& ms,
                                           const ParticleSpec& p, const Potential& pot,
                                           const UnitSystem& u, double t_begin, double t_end,
                                           std::size_t n_samples,
                                           TrajectoryOptions opt = {}) {
  if (!(t_end > t_begin) || n_samples < 2) {
    throw Error(ErrorCode::InvalidConstants, "need t_end > t_begin and at least two samples");
  }
  ms.validate();
  ReducedAction action(basis, ms, u);

  Trajectory traj;
  traj.particle = p;
  traj.ms = ms;
  traj.units = u;

  detail::TimeInverter inverter(action, p, pot, u, ms.x0, ms.t0, opt);
  const double angle0 = action.angle(ms.x0);
  constexpr double kPi = 3.14159265358979323846;

  const double dt = (t_end - t_begin) / static_cast<double>(n_samples - 1);
  std::vector<TrajectorySample> raw;
  raw.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = t_begin + static_cast<double>(i) * dt;
    const double x = inverter.invert(t);
    TrajectorySample s;
    s.t = t;
    s.x = x;
    s.p = action.momentum(x);
    s.v = velocity_from_momentum(s.p, p, pot, u, x, opt.eps_deg);
    s.branch = std::lround((action.angle(x) - angle0) / kPi);
    s.firqnl = firqnl_residual(kinematics_along(action, p, pot, u, x, opt.eps_deg), p, pot, u,
                               x, opt.eps_deg);
    raw.push_back(s);
  }

  // Branch-boundary times inside the span: explicit for the free allowed
  // basis (the angle advances at the constant rate D/(hbar E) along the
  // motion); otherwise recovered by locating the angle crossings between
  // consecutive samples and converting the positions back to times.
  std::vector<double> node_times;
  if (basis.kind() == KGBasis::Kind::FreeAllowed) {
    const double mc2 = p.rest_energy(u);
    const double rate = (p.E * p.E - mc2 * mc2) / (u.hbar * p.E);
    const long n_lo = static_cast<long>(std::floor((t_begin - ms.t0) * rate / kPi - 0.5));
    const long n_hi = static_cast<long>(std::ceil((t_end - ms.t0) * rate / kPi + 0.5));
    for (long n = n_lo; n <= n_hi; ++n) {
      const double tn = ms.t0 + (kPi / 2.0 + static_cast<double>(n) * kPi - angle0) / rate;
      if (tn >= t_begin && tn <= t_end) node_times.push_back(tn);
    }
  } else {
    for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
      const double a_lo = action.angle(raw[i].x);
      const double a_hi = action.angle(raw[i + 1].x);
      const long c_lo = static_cast<long>(std::ceil((std::min(a_lo, a_hi) - kPi / 2.0) / kPi));
      const long c_hi = static_cast<long>(std::floor((std::max(a_lo, a_hi) - kPi / 2.0) / kPi));
      for (long n = c_lo; n <= c_hi; ++n) {
        const double level = kPi / 2.0 + static_cast<double>(n) * kPi;
        auto g = [&](double x) { return action.angle(x) - level; };
        const double lo = std::min(raw[i].x, raw[i + 1].x);
        const double hi = std::max(raw[i].x, raw[i + 1].x);
        const double x_star = find_root(g, lo, hi, g(lo), g(hi), 1e-13);
        node_times.push_back(raw[i].t + time_of_flight(action, p, pot, u, raw[i].x, x_star,
                                                       opt.quad_tol, opt.eps_deg));
      }
    }
    std::sort(node_times.begin(), node_times.end());
  }

  // Drop samples inside the guard band around each boundary time.
  for (std::size_t i = 0; i < raw.size(); ++i) {
    bool guarded = false;
    for (std::size_t j = 0; j < node_times.size(); ++j) {
      double spacing = t_end - t_begin;
      if (node_times.size() > 1) {
        if (j + 1 < node_times.size()) spacing = node_times[j + 1] - node_times[j];
        else spacing = node_times[j] - node_times[j - 1];
      }
      if (std::abs(raw[i].t - node_times[j]) < opt.guard_fraction * spacing) {
        guarded = true;
        break;
      }
    }
    if (!guarded) traj.samples.push_back(raw[i]);
  }
  traj.node_times = std::move(node_times);
  return traj;
}

}  // namespace rqtraj
