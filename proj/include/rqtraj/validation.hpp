#pragma once

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rqtraj/action.hpp"
#include "rqtraj/analytic.hpp"
#include "rqtraj/dynamics.hpp"
#include "rqtraj/errors.hpp"
#include "rqtraj/kleingordon.hpp"
#include "rqtraj/microstate.hpp"
#include "rqtraj/particle.hpp"
#include "rqtraj/units.hpp"

namespace rqtraj {

// One verification suite's outcome: the parameter ladder it walked, the
// per-rung deviation metric, named side metrics, and the fitted convergence
// order compared against the expected one.
struct LimitReport {
  std::string name;
  std::vector<double> ladder;
  std::vector<double> deviations;
  std::vector<std::pair<std::string, double>> metrics;
  double fitted_order = 0.0;
  double expected_order = 0.0;
  double order_tolerance = 0.0;
  bool pass = false;
};

namespace detail {

inline void require_strictly_monotone(const std::vector<double>& ladder) {
  if (ladder.empty()) throw Error(ErrorCode::InvalidConstants, "empty parameter ladder");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    const bool up = ladder[1] > ladder[0];
    if (ladder[i] == ladder[i - 1] || (ladder[i] > ladder[i - 1]) != up) {
      throw Error(ErrorCode::InvalidConstants, "parameter ladder must be strictly monotone");
    }
  }
  for (const double v : ladder) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidConstants, "ladder entries must be positive");
  }
}

// Least-squares slope of log(dev) against log(param).
inline double fitted_log_slope(const std::vector<double>& param, const std::vector<double>& dev) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(param.size());
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double lx = std::log(param[i]);
    const double ly = std::log(dev[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// Classical limit: as hbar shrinks, every free closed-form trajectory
// collapses onto the straight classical line at order one in hbar (the node
// spacing itself is proportional to hbar). Also checks the relativistic
// conservation law with the mean velocity substituted.
inline LimitReport classical_limit_suite(const ParticleSpec& p, const Microstate& ms,
                                         const UnitSystem& u, std::vector<double> ladder) {
  ms.validate();
  LimitReport rep;
  rep.name = "classical-limit";
  rep.expected_order = 1.0;
  rep.order_tolerance = 0.1;
  rep.ladder = std::move(ladder);
  detail::require_strictly_monotone(rep.ladder);

  // One time window for every rung, set by the coarsest hbar.
  const UnitSystem u_ref{*std::max_element(rep.ladder.begin(), rep.ladder.end()), u.c};
  const double window = 3.0 * node_lattice(p, u_ref).dt;
  const double v_cl = mean_velocity(p, u_ref);
  const int n_t = 400;

  for (const double hb : rep.ladder) {
    const UnitSystem uh{hb, u.c};
    double dev = 0.0;
    for (int i = 0; i <= n_t; ++i) {
      const double t = ms.t0 + window * static_cast<double>(i) / n_t;
      const double x = free_trajectory_closed(p, ms, uh, t).x;
      const double x_line = ms.x0 + v_cl * (t - ms.t0);
      dev = std::max(dev, std::abs(x - x_line));
    }
    rep.deviations.push_back(dev);
  }

  double conservation = 0.0;
  if (p.m0 > 0.0) {
    const double beta = v_cl / u.c;
    conservation = std::abs(p.m0 * u.c * u.c / std::sqrt(1.0 - beta * beta) - p.E);
  }
  rep.metrics.emplace_back("conservation_residual", conservation);

  const double scale = window * v_cl;
  bool exact = true;
  for (const double d : rep.deviations) exact = exact && d <= 1e-13 * scale;
  if (exact) {
    // The classical microstate deviates by exactly zero on every rung; there
    // is no order to fit.
    rep.fitted_order = rep.expected_order;
  } else {
    rep.fitted_order = detail::fitted_log_slope(rep.ladder, rep.deviations);
  }
  rep.pass = std::abs(rep.fitted_order - rep.expected_order) <= rep.order_tolerance &&
             conservation <= 1e-12 * p.E;
  return rep;
}

namespace detail {

// Nonrelativistic free closed family: same arctan-tan shape with
// k = sqrt(2 m T)/hbar and omega = 2 T / hbar.
inline KinematicState nonrel_closed_kinematics(double m, double T, const Microstate& ms,
                                               const UnitSystem& u, double t) {
  const double k = std::sqrt(2.0 * m * T) / u.hbar;
  const double omega = 2.0 * T / u.hbar;
  const double theta = omega * (t - ms.t0);
  const auto d = arctan_tan_derivs(ms.a, ms.b, theta);
  KinematicState out;
  out.x = std::atan(ms.a * std::tan(theta) + ms.b) / k + ms.x0;
  out.v = omega / k * d.y1;
  out.acc = omega * omega / k * d.y2;
  out.jerk = omega * omega * omega / k * d.y3;
  return out;
}

}  // namespace detail

// Nonrelativistic limit: holding the kinetic energy T = E - m0 c^2 fixed
// while c grows, the momentum-velocity relation collapses onto P = 2T/xdot
// with relative error T/(2 m0 c^2 + T), i.e. second order in 1/c. The exact
// identity xdot P = T + m0 c^2 - m0^2 c^4/(T + m0 c^2) is checked on every
// rung, and the nonrelativistic first integral is evaluated on the limiting
// closed family for the given microstate.
inline LimitReport nonrelativistic_limit_suite(const ParticleSpec& p, const Microstate& ms,
                                               const UnitSystem& u,
                                               std::vector<double> ladder_c) {
  ms.validate();
  if (!(p.m0 > 0.0)) {
    throw Error(ErrorCode::InvalidConstants, "the nonrelativistic ladder needs m0 > 0");
  }
  const double T = p.E - p.rest_energy(u);
  if (!(T > 0.0)) {
    throw Error(ErrorCode::InvalidConstants, "kinetic energy must be positive at the input c");
  }
  LimitReport rep;
  rep.name = "nonrel-limit";
  rep.expected_order = 2.0;
  rep.order_tolerance = 0.1;
  rep.ladder = std::move(ladder_c);
  detail::require_strictly_monotone(rep.ladder);

  double identity_worst = 0.0;
  for (const double c : rep.ladder) {
    const UnitSystem uc{u.hbar, c};
    const ParticleSpec pc{p.m0, T + p.m0 * c * c};
    const double mc2 = pc.rest_energy(uc);
    // E^2 - m0^2 c^4 in the cancellation-free factored form T (T + 2 m0 c^2)
    const double d = T * (T + 2.0 * mc2);
    const double v = uc.c * std::sqrt(d) / pc.E;
    const double mom = d / (pc.E * v);
    rep.deviations.push_back(std::abs(mom - 2.0 * T / v) / mom);
    const double rhs = T + mc2 - mc2 * mc2 / (T + mc2);
    identity_worst = std::max(identity_worst, std::abs(v * mom - rhs) / pc.E);
  }
  rep.metrics.emplace_back("momentum_energy_identity", identity_worst);

  // Nonrelativistic first integral on the c -> infinity data.
  double fiqnl_worst = 0.0;
  const Potential free_pot = Potential::free();
  for (int i = 1; i <= 7; ++i) {
    const double theta = 0.38 * static_cast<double>(i);  // stays off the tangent poles
    const double t = ms.t0 + theta * u.hbar / (2.0 * T);
    const KinematicState kin = detail::nonrel_closed_kinematics(p.m0, T, ms, u, t);
    const double res = fiqnl_residual(kin, T, free_pot, p.m0, u, kin.x);
    fiqnl_worst = std::max(fiqnl_worst, std::abs(res) / (T * T * T * T));
  }
  rep.metrics.emplace_back("fiqnl_scaled_residual", fiqnl_worst);

  // Relative error shrinks like 1/c^2; report the order in c with its sign
  // flipped so the expected value is +2.
  rep.fitted_order = -detail::fitted_log_slope(rep.ladder, rep.deviations);
  rep.pass = std::abs(rep.fitted_order - rep.expected_order) <= rep.order_tolerance &&
             identity_worst <= 1e-12 && fiqnl_worst <= 1e-8;
  return rep;
}

// Redundant oracle: integrates the free first integral as a third-order ODE,
//
//   jerk = (3/2) xddot^2 / xdot + (2 D xdot / (hbar^2 E^2)) (D - E^2 xdot^2 / c^2),
//
// with D = E^2 - m0^2 c^4, from closed-form initial data at t_begin, and
// returns the maximum |x_ode - x_closed| over the window. The one place an
// adaptive integrator is allowed: its output is only compared, never
// consumed.
inline double firqnl_ode_crosscheck(const ParticleSpec& p, const Microstate& ms,
                                    const UnitSystem& u, double t_begin, double t_end,
                                    double tol = 1e-10) {
  ms.validate();
  if (!(t_end > t_begin)) {
    throw Error(ErrorCode::InvalidConstants, "need t_end > t_begin");
  }
  const double mc2 = p.rest_energy(u);
  const double d = p.E * p.E - mc2 * mc2;
  const double h2e2 = u.hbar * u.hbar * p.E * p.E;
  const double c2 = u.c * u.c;

  using State = std::array<double, 3>;
  auto rhs = [&](const State& y, State& dydt, double t) {
    const double v = y[1], w = y[2];
    if (v == 0.0 || !std::isfinite(v) || !std::isfinite(w)) {
      throw Error(ErrorCode::IntegrationFailure,
                  "xdot degenerated near a node at t=" + std::to_string(t));
    }
    dydt[0] = v;
    dydt[1] = w;
    dydt[2] = 1.5 * w * w / v + (2.0 * d * v / h2e2) * (d - p.E * p.E * v * v / c2);
  };

  const KinematicState init = closed_free_kinematics(p, ms, u, t_begin);
  State y{init.x, init.v, init.acc};

  const int n_obs = 200;
  std::vector<double> times(n_obs + 1);
  for (int i = 0; i <= n_obs; ++i) {
    times[i] = t_begin + (t_end - t_begin) * static_cast<double>(i) / n_obs;
  }

  double max_dev = 0.0;
  auto observer = [&](const State& y_obs, double t) {
    const double x_closed = free_trajectory_closed(p, ms, u, t).x;
    max_dev = std::max(max_dev, std::abs(y_obs[0] - x_closed));
  };

  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>());
  ode::integrate_times(stepper, rhs, y, times.begin(), times.end(),
                       (t_end - t_begin) / 1000.0, observer);
  return max_dev;
}

// The hbar-free part of the relativistic first integral must vanish on
// purely classical relativistic motion. Random states are drawn consistent
// with the conservation law (E fixed from the speed) and the classical force
// law (xddot fixed from the potential slope); the worst scaled residual over
// n draws is returned. Seeded and deterministic.
inline double classical_factorization_check(double m0, const UnitSystem& u, std::size_t n,
                                            std::uint64_t seed) {
  if (!(m0 > 0.0)) {
    throw Error(ErrorCode::InvalidConstants, "classical motion needs m0 > 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> beta_draw(-0.95, 0.95);
  std::uniform_real_distribution<double> pot_draw(-1.0, 1.0);
  const double mc2 = m0 * u.c * u.c;

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double beta = beta_draw(rng);
    if (std::abs(beta) < 1e-3) beta = beta < 0.0 ? -1e-3 : 1e-3;
    const double v0 = 0.25 * mc2 * pot_draw(rng);
    const double v1 = pot_draw(rng);
    const double gamma = 1.0 / std::sqrt(1.0 - beta * beta);
    const ParticleSpec pc{m0, mc2 * gamma + v0};
    const Potential pot = Potential::linear(v1, v0);
    KinematicState kin;
    kin.x = 0.0;
    kin.v = beta * u.c;
    kin.acc = -v1 * std::pow(1.0 - beta * beta, 1.5) / m0;
    kin.jerk = 0.0;
    const double res = firqnl_residual_classical_part(kin, pc, pot, u, 0.0);
    const double ev = mc2 * gamma;
    worst = std::max(worst, std::abs(res) / (ev * ev * ev * ev));
  }
  return worst;
}

// Closure of the Hamilton-Jacobi residual on the free analytic basis over a
// grid of microstates; the scaled residual must sit at rounding level.
inline LimitReport rqshje_closure_suite(const ParticleSpec& p, const UnitSystem& u,
                                        std::size_t n_grid = 1000,
                                        double tolerance = 1e-9) {
  LimitReport rep;
  rep.name = "rqshje";
  rep.expected_order = 0.0;
  rep.order_tolerance = 0.0;

  const KGBasis basis = kg_basis_free_allowed(p, u);
  const Potential free_pot = Potential::free();
  const double x_max = 2.0 * detail::kPi / basis.wave_number();

  const double a_values[] = {0.5, 1.0, 2.0, 3.0, -1.0};
  const double b_values[] = {-1.0, 0.0, 0.5, 1.0};
  double worst = 0.0;
  for (const double a : a_values) {
    for (const double b : b_values) {
      const ReducedAction action(basis, Microstate{a, b, 0.0, 0.0}, u);
      for (std::size_t i = 0; i < n_grid; ++i) {
        const double x = x_max * static_cast<double>(i) / static_cast<double>(n_grid - 1);
        const double res = rqshje_residual(action.at(x), p, free_pot, u, x);
        worst = std::max(worst, std::abs(res) / (p.E * p.E));
      }
    }
  }
  rep.deviations.push_back(worst);
  rep.metrics.emplace_back("max_scaled_residual", worst);
  rep.pass = worst <= tolerance;
  return rep;
}

}  // namespace rqtraj
