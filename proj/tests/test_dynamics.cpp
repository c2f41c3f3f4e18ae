#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rqtraj/rqtraj.hpp"
#include "support.hpp"

using namespace rqtraj;
using Catch::Approx;
using testsupport::rel_diff;

namespace {
const UnitSystem kNatural{};
const Potential kFree = Potential::free();
const double kSqrt2 = std::sqrt(2.0);
constexpr double kPi = 3.14159265358979323846;
}  // namespace

TEST_CASE("velocity from momentum: reference values and sign rules") {
  CHECK(velocity_from_momentum(1.0, {1.0, kSqrt2}, kFree, kNatural, 0.0) ==
        Approx(1.0 / kSqrt2).epsilon(1e-14));
  CHECK(velocity_from_momentum(2.0, {0.0, 2.0}, kFree, kNatural, 0.0) ==
        Approx(1.0).epsilon(1e-14));
  // forbidden regime: opposite signs
  CHECK(velocity_from_momentum(-0.6, {1.0, 0.8}, kFree, kNatural, 0.0) ==
        Approx(0.75).epsilon(1e-14));

  CHECK_THROWS_AS(velocity_from_momentum(0.0, {1.0, kSqrt2}, kFree, kNatural, 0.0), Error);
  try {
    velocity_from_momentum(1.0, {1.0, 1.0}, kFree, kNatural, 0.0);
    FAIL("expected DegenerateEnergy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateEnergy);
  }
}

TEST_CASE("time of flight: uniform motion, node spacing, empty path") {
  const ParticleSpec p{1.0, kSqrt2};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);

  CHECK(time_of_flight(basis, Microstate{1.0, 0.0, 0.0, 0.0}, p, kFree, kNatural, 0.0, 1.0) ==
        Approx(kSqrt2).epsilon(1e-12));
  // one half-oscillation of the a=2 microstate equals the node time spacing
  CHECK(time_of_flight(basis, Microstate{2.0, 0.0, 0.0, 0.0}, p, kFree, kNatural, 0.0, kPi) ==
        Approx(kPi * kSqrt2).epsilon(1e-11));
  CHECK(time_of_flight(basis, Microstate{2.0, 0.0, 0.0, 0.0}, p, kFree, kNatural, 0.4, 0.4) ==
        0.0);
}

TEST_CASE("time of flight is additive") {
  const ParticleSpec p{1.0, kSqrt2};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> draw(-2.0, 2.0);
  const ReducedAction act(basis, Microstate{2.0, 0.5, 0.0, 0.0}, kNatural);
  for (int i = 0; i < 30; ++i) {
    const double a = draw(rng), b = draw(rng), c = draw(rng);
    const double direct = time_of_flight(act, p, kFree, kNatural, a, c);
    const double split = time_of_flight(act, p, kFree, kNatural, a, b) +
                         time_of_flight(act, p, kFree, kNatural, b, c);
    CHECK(std::abs(direct - split) <= 1e-11);
  }
}

TEST_CASE("time of flight detects a velocity sign change") {
  // Photon under a linear ramp: E - V crosses zero between grid points, so
  // the regime stays allowed while xdot flips sign.
  const ParticleSpec p{0.0, 1.0};
  const Potential pot = Potential::linear(2.0, -0.0003);
  const KGBasis basis = kg_basis_numeric(p, pot, kNatural, 0.0, 1.0, 1e-3);
  try {
    time_of_flight(basis, Microstate{1.0, 0.0, 0.0, 0.0}, p, pot, kNatural, 0.4, 0.6);
    FAIL("expected SignChange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SignChange);
  }
}

TEST_CASE("quadrature trajectory: classical microstate is a straight line") {
  const ParticleSpec p{1.0, kSqrt2};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);
  const Microstate ms{1.0, 0.0, 0.25, 0.0};
  const Trajectory traj =
      trajectory_by_quadrature(basis, ms, p, kFree, kNatural, 0.0, 5.0, 26);
  for (const auto& s : traj.samples) {
    CHECK(std::abs(s.x - (s.t / kSqrt2 + ms.x0)) <= 1e-9);
  }
}

TEST_CASE("quadrature trajectory matches the closed form through dual constants") {
  const ParticleSpec p{1.0, kSqrt2};
  const Microstate closed{2.0, 0.0, 0.0, 0.0};
  const ActionRun run = action_run_for_closed(p, closed, kNatural);
  const KGBasis basis = kg_basis_free_allowed(p, kNatural, run.basis_origin);
  const double dt_node = node_lattice(p, kNatural).dt;
  const Trajectory traj = trajectory_by_quadrature(basis, run.ms, p, kFree, kNatural, 0.0,
                                                   3.0 * kPi * kSqrt2, 120);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    bool near_node = false;
    for (double tn : traj.node_times) {
      if (std::abs(s.t - tn) < 1e-6 * dt_node) near_node = true;
    }
    if (near_node) continue;
    worst = std::max(worst, std::abs(s.x - free_trajectory_closed(p, closed, kNatural, s.t).x));
  }
  CHECK(worst <= 1e-7);
  CHECK(traj.node_times.size() == 3);  // three node spacings in the span
}

TEST_CASE("photon trajectory is x = c t + x0 exactly") {
  const ParticleSpec p{0.0, 2.0};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);
  const Trajectory traj = trajectory_by_quadrature(basis, Microstate{1.0, 0.0, 0.4, 0.0}, p,
                                                   kFree, kNatural, 0.0, 3.0, 13);
  for (const auto& s : traj.samples) {
    CHECK(std::abs(s.x - (s.t + 0.4)) <= 1e-10);
    CHECK(s.v == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("momentum-velocity closure holds on every sample") {
  const ParticleSpec p{1.0, kSqrt2};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);
  const double mc2 = 1.0;
  for (double a : {0.5, 2.0, -1.0}) {
    const Trajectory traj = trajectory_by_quadrature(basis, Microstate{a, 0.5, 0.0, 0.0}, p,
                                                     kFree, kNatural, 0.0, 8.0, 33);
    for (const auto& s : traj.samples) {
      CHECK(std::abs(s.v * s.p * p.E - (p.E * p.E - mc2 * mc2)) <= 1e-8 * p.E * p.E);
    }
  }
}

TEST_CASE("sampled velocity agrees with differenced positions") {
  const ParticleSpec p{1.0, kSqrt2};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);
  const Microstate ms{2.0, 0.5, 0.0, 0.0};
  const double h = 1e-4;
  for (double t : {0.8, 2.0, 3.9}) {
    const Trajectory tri =
        trajectory_by_quadrature(basis, ms, p, kFree, kNatural, t - h, t + h, 3);
    REQUIRE(tri.samples.size() == 3);
    const double v_fd = (tri.samples[2].x - tri.samples[0].x) / (2.0 * h);
    CHECK(rel_diff(tri.samples[1].v, v_fd) <= 1e-6);
  }
}

TEST_CASE("reduced action grows linearly in time along free trajectories") {
  SECTION("allowed") {
    const ParticleSpec p{1.0, kSqrt2};
    const KGBasis basis = kg_basis_free_allowed(p, kNatural);
    const Microstate ms{2.0, 0.5, 0.0, 0.0};
    const ReducedAction act(basis, ms, kNatural);
    const Trajectory traj =
        trajectory_by_quadrature(basis, ms, p, kFree, kNatural, 0.0, 6.0, 25);
    const double rate = p.E - 1.0 / p.E;  // E - m0^2 c^4 / E
    const double s0_ref = act.at(traj.samples.front().x).s0;
    for (const auto& s : traj.samples) {
      CHECK(std::abs(act.at(s.x).s0 - s0_ref - rate * s.t) <= 1e-10);
    }
  }
  SECTION("forbidden") {
    const ParticleSpec p{1.0, 0.8};
    const KGBasis basis = kg_basis_free_forbidden(p, kNatural);
    const Microstate ms{1.0, 0.0, 0.0, 0.0};
    const ReducedAction act(basis, ms, kNatural);
    const Trajectory traj =
        trajectory_by_quadrature(basis, ms, p, kFree, kNatural, 0.0, 1.5, 16);
    const double rate = p.E - 1.0 / p.E;  // negative here
    const double s0_ref = act.at(traj.samples.front().x).s0;
    for (const auto& s : traj.samples) {
      CHECK(std::abs(act.at(s.x).s0 - s0_ref - rate * s.t) <= 1e-10);
      CHECK(s.v > 0.0);
      CHECK(s.p < 0.0);  // opposite signs in the forbidden regime
    }
  }
}

TEST_CASE("kinematics: uniform motion and photon") {
  const ParticleSpec p{1.0, kSqrt2};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);
  const KinematicState kin =
      kinematics_along(basis, Microstate{1.0, 0.0, 0.0, 0.0}, p, kFree, kNatural, 0.7);
  CHECK(kin.v == Approx(1.0 / kSqrt2).epsilon(1e-13));
  CHECK(kin.acc == Approx(0.0).margin(1e-13));
  CHECK(kin.jerk == Approx(0.0).margin(1e-13));

  const ParticleSpec ph{0.0, 2.0};
  const KinematicState kph = kinematics_along(kg_basis_free_allowed(ph, kNatural),
                                              Microstate{1.0, 0.0, 0.0, 0.0}, ph, kFree,
                                              kNatural, 0.3);
  CHECK(kph.v == Approx(1.0).epsilon(1e-13));
  CHECK(kph.acc == Approx(0.0).margin(1e-13));
}

TEST_CASE("acceleration agrees with differenced velocity along the motion") {
  const ParticleSpec p{1.0, kSqrt2};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);
  const Microstate ms{2.0, 0.0, 0.0, 0.0};
  const double h = 1e-4;
  for (double t : {0.5, 1.3, 2.6}) {
    const Trajectory tri =
        trajectory_by_quadrature(basis, ms, p, kFree, kNatural, t - h, t + h, 3);
    REQUIRE(tri.samples.size() == 3);
    const double acc_fd = (tri.samples[2].v - tri.samples[0].v) / (2.0 * h);
    const KinematicState kin = kinematics_along(basis, ms, p, kFree, kNatural,
                                                tri.samples[1].x);
    CHECK(rel_diff(kin.acc, acc_fd) <= 1e-5);
  }
}

TEST_CASE("first-integral residual: classical case closes by hand") {
  // D = 1, v^2 = 1/2, E^2 = 2: 1 - (1/2)*2*1 = 0, all hbar^2 terms vanish.
  KinematicState kin;
  kin.v = 1.0 / kSqrt2;
  kin.acc = 0.0;
  kin.jerk = 0.0;
  CHECK(firqnl_residual(kin, {1.0, kSqrt2}, kFree, kNatural, 0.0) ==
        Approx(0.0).margin(1e-14));

  KinematicState photon;
  photon.v = 1.0;
  CHECK(firqnl_residual(photon, {0.0, 2.0}, kFree, kNatural, 0.0) ==
        Approx(0.0).margin(1e-14));
}

TEST_CASE("first-integral residual vanishes along quadrature trajectories") {
  const ParticleSpec p{1.0, kSqrt2};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);
  const double e4 = p.E * p.E * p.E * p.E;
  const Trajectory traj = trajectory_by_quadrature(basis, Microstate{2.0, 0.0, 0.0, 0.0}, p,
                                                   kFree, kNatural, 0.0, 10.0, 100);
  for (const auto& s : traj.samples) {
    CHECK(std::abs(s.firqnl) <= 1e-8 * e4);
  }
}

TEST_CASE("first-integral residual with a linear potential and numeric basis") {
  const ParticleSpec p{1.0, 2.0};
  const Potential pot = Potential::linear(0.1);
  const KGBasis basis = kg_basis_numeric(p, pot, kNatural, 0.0, 1.0, 1e-3);
  const Microstate ms{1.0, 0.0, 0.5, 0.0};
  const ReducedAction act(basis, ms, kNatural);
  const double span = time_of_flight(act, p, pot, kNatural, 0.5, 0.8);
  const Trajectory traj = trajectory_by_quadrature(basis, ms, p, pot, kNatural,
                                                   std::min(0.0, span), std::max(0.0, span),
                                                   17);
  const double e4 = p.E * p.E * p.E * p.E;
  for (const auto& s : traj.samples) {
    CHECK(std::abs(s.firqnl) <= 1e-5 * e4);
  }
}

TEST_CASE("kinematic action derivatives invert the analytic ones") {
  SECTION("free, classical") {
    KinematicState kin;
    kin.v = 1.0 / kSqrt2;
    const auto [d2, d3] =
        action_derivatives_from_kinematics(kin, {1.0, kSqrt2}, kFree, kNatural, 0.0);
    CHECK(d2 == Approx(0.0).margin(1e-14));
    CHECK(d3 == Approx(0.0).margin(1e-14));
  }
  SECTION("free, a=2") {
    const ParticleSpec p{1.0, kSqrt2};
    const KGBasis basis = kg_basis_free_allowed(p, kNatural);
    const Microstate ms{2.0, 0.0, 0.0, 0.0};
    const ReducedAction act(basis, ms, kNatural);
    const double x = 0.3;
    const KinematicState kin = kinematics_along(act, p, kFree, kNatural, x);
    const auto [d2, d3] = action_derivatives_from_kinematics(kin, p, kFree, kNatural, x);
    const ActionState st = act.at(x);
    CHECK(rel_diff(d2, st.d2s0) <= 1e-6);
    CHECK(rel_diff(d3, st.d3s0) <= 1e-6);
  }
  SECTION("linear potential, numeric basis") {
    const ParticleSpec p{1.0, 2.0};
    const Potential pot = Potential::linear(0.1);
    const KGBasis basis = kg_basis_numeric(p, pot, kNatural, 0.0, 1.0, 1e-3);
    const Microstate ms{1.0, 0.0, 0.0, 0.0};
    const ReducedAction act(basis, ms, kNatural);
    const double x = 0.5;
    const KinematicState kin = kinematics_along(act, p, pot, kNatural, x);
    const auto [d2, d3] = action_derivatives_from_kinematics(kin, p, pot, kNatural, x);
    const ActionState st = act.at(x);
    CHECK(rel_diff(d2, st.d2s0) <= 1e-5);
    CHECK(rel_diff(d3, st.d3s0) <= 1e-5);
  }
}

TEST_CASE("without the hbar terms the first integral is the classical factorization") {
  // Scaling hbar toward zero, the full residual collapses onto
  // D * (D - u^2 v^2 / c^2) for any kinematic data.
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  const Potential pot = Potential::linear(0.3, 0.1);
  for (int i = 0; i < 100; ++i) {
    KinematicState kin;
    kin.v = 0.2 + 0.7 * std::abs(draw(rng));
    kin.acc = draw(rng);
    kin.jerk = draw(rng);
    const ParticleSpec p{1.0, 2.0 + std::abs(draw(rng))};
    const double x = 0.5 * draw(rng);
    const UnitSystem tiny_hbar{1e-8, 1.0};
    const double full = firqnl_residual(kin, p, pot, tiny_hbar, x);
    const double classical = firqnl_residual_classical_part(kin, p, pot, tiny_hbar, x);
    CHECK(std::abs(full - classical) <= 1e-12 * std::pow(p.E, 4));
  }
}

TEST_CASE("nonrelativistic first integral: conservation and violation detection") {
  // Free classical motion: E_nr - V = m v^2 / 2 makes the residual vanish.
  KinematicState kin;
  kin.v = 0.9;
  const double m = 1.0;
  const double e_match = 0.5 * m * kin.v * kin.v;
  CHECK(fiqnl_residual(kin, e_match, kFree, m, kNatural, 0.0) == Approx(0.0).margin(1e-15));

  // With derivative terms zeroed the residual factors exactly.
  const double e_nr = 0.35;
  const double expected = std::pow(e_nr, 3) * (e_nr - 0.5 * m * kin.v * kin.v);
  CHECK(fiqnl_residual(kin, e_nr, kFree, m, kNatural, 0.0) ==
        Approx(expected).epsilon(1e-14));
  CHECK(fiqnl_residual(kin, e_nr, kFree, m, kNatural, 0.0) != 0.0);
}

TEST_CASE("trajectory preconditions") {
  const ParticleSpec p{1.0, kSqrt2};
  const KGBasis basis = kg_basis_free_allowed(p, kNatural);
  CHECK_THROWS_AS(trajectory_by_quadrature(basis, Microstate{1.0, 0.0, 0.0, 0.0}, p, kFree,
                                           kNatural, 1.0, 1.0, 10),
                  Error);
  CHECK_THROWS_AS(trajectory_by_quadrature(basis, Microstate{1.0, 0.0, 0.0, 0.0}, p, kFree,
                                           kNatural, 0.0, 1.0, 1),
                  Error);
  // target time beyond a numeric domain cannot be bracketed
  const ParticleSpec pn{1.0, 2.0};
  const Potential pot = Potential::linear(0.1);
  const KGBasis nb = kg_basis_numeric(pn, pot, kNatural, 0.0, 1.0, 1e-3);
  try {
    trajectory_by_quadrature(nb, Microstate{1.0, 0.0, 0.5, 0.0}, pn, pot, kNatural, 0.0,
                             100.0, 5);
    FAIL("expected RootBracketFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RootBracketFailure);
  }
}
