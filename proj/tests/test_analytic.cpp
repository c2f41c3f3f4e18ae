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
const double kSqrt2 = std::sqrt(2.0);
constexpr double kPi = 3.14159265358979323846;
}  // namespace

TEST_CASE("classical microstate reproduces the straight relativistic line") {
  const ParticleSpec p{1.0, kSqrt2};
  const Microstate ms{1.0, 0.0, 0.3, -0.2};
  for (int i = 0; i <= 500; ++i) {
    const double t = -5.0 + 10.0 * i / 500.0;
    const double x = free_trajectory_closed(p, ms, kNatural, t).x;
    CHECK(std::abs(x - (ms.x0 + (t - ms.t0) / kSqrt2)) <= 1e-9);
  }
}

TEST_CASE("photon closed form: x = c t + x0 and node lattice") {
  const Microstate ms{1.0, 0.0, 0.1, 0.0};
  for (double t : {-1.0, 0.4, 2.7}) {
    CHECK(photon_trajectory_closed(2.0, ms, kNatural, t).x == Approx(0.1 + t).margin(1e-12));
  }
  const NodeLattice lat = node_lattice({0.0, kPi}, kNatural);
  CHECK(lat.dt == Approx(1.0).epsilon(1e-15));
  CHECK(lat.dx == Approx(1.0).epsilon(1e-15));
  CHECK(lat.node_time(0) == Approx(0.5).epsilon(1e-15));
  CHECK(lat.node_position(3) == Approx(3.5).epsilon(1e-15));
}

TEST_CASE("node positions do not depend on the microstate") {
  const ParticleSpec p{1.0, kSqrt2};
  const NodeLattice lat = node_lattice(p, kNatural);
  // twenty forward-moving microstates
  for (long n = 0; n < 4; ++n) {
    const double t_n = lat.node_time(n);
    for (double a : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      for (double b : {-1.0, 0.0, 0.5, 1.0}) {
        const double x = free_trajectory_closed(p, {a, b, 0.0, 0.0}, kNatural, t_n).x;
        CHECK(std::abs(x - lat.node_position(n)) <= 1e-9);
      }
    }
  }
  // photon: same invariance, spec pair (a, b) = (5, -2) against (1, 0)
  const NodeLattice ph = node_lattice({0.0, kPi}, kNatural);
  for (long n = 0; n < 4; ++n) {
    const double x1 =
        photon_trajectory_closed(kPi, {1.0, 0.0, 0.0, 0.0}, kNatural, ph.node_time(n)).x;
    const double x2 =
        photon_trajectory_closed(kPi, {5.0, -2.0, 0.0, 0.0}, kNatural, ph.node_time(n)).x;
    CHECK(std::abs(x1 - x2) <= 1e-9);
  }
}

TEST_CASE("x(t) is continuous across branch boundaries") {
  const ParticleSpec p{1.0, kSqrt2};
  const Microstate ms{3.0, 1.0, 0.0, 0.0};
  const NodeLattice lat = node_lattice(p, kNatural);
  const double eps = 1e-8;
  for (long n = -2; n <= 2; ++n) {
    const double tn = lat.node_time(n);
    const double left = free_trajectory_closed(p, ms, kNatural, tn - eps).x;
    const double right = free_trajectory_closed(p, ms, kNatural, tn + eps).x;
    CHECK(std::abs(left - right) <= 1e-6 * lat.dx);
  }
  // decreasing branch rule for a < 0
  const Microstate neg{-2.0, 0.5, 0.0, 0.0};
  double prev = free_trajectory_closed(p, neg, kNatural, 0.0).x;
  for (int i = 1; i <= 200; ++i) {
    const double t = 12.0 * i / 200.0;
    const double x = free_trajectory_closed(p, neg, kNatural, t).x;
    CHECK(x < prev);
    prev = x;
  }
}

TEST_CASE("node lattice reference values and hbar scaling") {
  const ParticleSpec p{1.0, kSqrt2};
  const NodeLattice lat = node_lattice(p, kNatural);
  CHECK(lat.dt == Approx(4.442882938158366).epsilon(1e-12));
  CHECK(lat.dx == Approx(kPi).epsilon(1e-12));

  const NodeLattice half = node_lattice(p, UnitSystem{0.5, 1.0});
  CHECK(half.dt == Approx(0.5 * lat.dt).epsilon(1e-15));
  CHECK(half.dx == Approx(0.5 * lat.dx).epsilon(1e-15));

  try {
    node_lattice({1.0, 0.8}, kNatural);
    FAIL("expected WrongRegime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongRegime);
  }
}

TEST_CASE("mean velocity: subluminal massive value, photon, rest limit") {
  CHECK(mean_velocity({1.0, kSqrt2}, kNatural) == Approx(1.0 / kSqrt2).epsilon(1e-13));
  CHECK(mean_velocity({1.0, kSqrt2}, kNatural) < 1.0);
  CHECK(mean_velocity({0.0, 17.0}, kNatural) == Approx(1.0).epsilon(1e-15));
  CHECK(mean_velocity({1.0, 1.0 + 1e-6}, kNatural) < 2e-3);
  const NodeLattice lat = node_lattice({1.0, kSqrt2}, kNatural);
  CHECK(lat.mean_velocity() == Approx(mean_velocity({1.0, kSqrt2}, kNatural)).epsilon(1e-15));
}

TEST_CASE("average over any whole number of node gaps equals the mean velocity") {
  const ParticleSpec p{1.0, kSqrt2};
  const NodeLattice lat = node_lattice(p, kNatural);
  const double vbar = mean_velocity(p, kNatural);
  for (double a : {0.5, 2.0, 3.0}) {
    for (double b : {-1.0, 0.0, 1.0}) {
      const Microstate ms{a, b, 0.0, 0.0};
      for (long k = 1; k <= 4; ++k) {
        const double x0 = free_trajectory_closed(p, ms, kNatural, lat.node_time(0)).x;
        const double xk = free_trajectory_closed(p, ms, kNatural, lat.node_time(k)).x;
        const double avg = (xk - x0) / (lat.node_time(k) - lat.node_time(0));
        CHECK(std::abs(avg - vbar) <= 1e-9);
      }
    }
  }
}

TEST_CASE("trajectories stay within half a node spacing of the classical line") {
  const ParticleSpec p{1.0, kSqrt2};
  const double vbar = mean_velocity(p, kNatural);
  for (double hbar : {1.0, 0.5, 0.25, 0.125}) {
    const UnitSystem u{hbar, 1.0};
    const NodeLattice lat = node_lattice(p, u);
    const double window = 3.0 * node_lattice(p, kNatural).dt;
    for (double a : {0.5, 2.0, 3.0}) {
      for (double b : {-1.0, 0.0, 1.0}) {
        double sup = 0.0;
        for (int i = 0; i <= 300; ++i) {
          const double t = window * i / 300.0;
          const double x = free_trajectory_closed(p, {a, b, 0.0, 0.0}, u, t).x;
          sup = std::max(sup, std::abs(x - vbar * t));
        }
        CHECK(sup <= 0.5 * lat.dx);
      }
    }
  }
}

TEST_CASE("deviation from the classical line is linear in hbar") {
  const ParticleSpec p{1.0, kSqrt2};
  const double vbar = mean_velocity(p, kNatural);
  const Microstate ms{2.0, 0.5, 0.0, 0.0};
  const double window = 3.0 * node_lattice(p, kNatural).dt;
  std::vector<double> sups;
  for (double hbar : {1.0, 0.5, 0.25, 0.125}) {
    const UnitSystem u{hbar, 1.0};
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double t = window * i / 400.0;
      sup = std::max(sup, std::abs(free_trajectory_closed(p, ms, u, t).x - vbar * t));
    }
    sups.push_back(sup);
  }
  for (std::size_t j = 1; j < sups.size(); ++j) {
    CHECK(sups[j] / sups[j - 1] == Approx(0.5).margin(0.02));
  }
}

TEST_CASE("closed kinematics match finite differences of the closed position") {
  const ParticleSpec p{1.0, kSqrt2};
  const Microstate ms{2.0, 0.5, 0.0, 0.0};
  auto x_of_t = [&](double t) { return free_trajectory_closed(p, ms, kNatural, t).x; };
  for (double t : {0.3, 1.1, 2.9}) {
    const KinematicState kin = closed_free_kinematics(p, ms, kNatural, t);
    CHECK(rel_diff(kin.v, testsupport::fd1(x_of_t, t, 1e-3)) <= 1e-8);
    CHECK(rel_diff(kin.acc, testsupport::fd2(x_of_t, t, 1e-3)) <= 1e-6);
    CHECK(rel_diff(kin.jerk, testsupport::fd3(x_of_t, t, 1e-2)) <= 1e-5);
  }
}

TEST_CASE("forbidden trajectory: anchor point and logarithmic blowup") {
  const ParticleSpec p{1.0, 0.8};
  const Microstate ms{1.0, 0.0, 0.7, 0.0};
  // omega = -0.45; at t = -pi/(4 omega)... omega t = pi/4 gives tan = 1, ln 1 = 0
  const double t1 = (kPi / 4.0) / ((p.E * p.E - 1.0) / p.E);
  CHECK(forbidden_trajectory_closed(p, ms, kNatural, t1) == Approx(ms.x0).margin(1e-12));
  // t -> 0+ with b = 0: x -> -infinity
  CHECK(forbidden_trajectory_closed(p, ms, kNatural, 1e-12) < ms.x0 - 10.0);
}

TEST_CASE("forbidden velocity: corrected value and differencing oracle") {
  const ParticleSpec p{1.0, 0.8};
  const Microstate ms{1.0, 0.0, 0.0, 0.0};
  const double omega = (p.E * p.E - 1.0) / p.E;  // -0.45
  // omega t = -pi/4: the time derivative of the trajectory gives
  // -(a c sqrt(m0^2 c^4 - E^2)/2E) * 2 / (-1) = 0.6/1.6 * 2 = 0.75,
  // consistent with P = -0.6 at x = 0 through the momentum-velocity relation.
  const double t_ref = (-kPi / 4.0) / omega;
  CHECK(forbidden_velocity_closed(p, ms, kNatural, t_ref) == Approx(0.75).epsilon(1e-13));

  auto x_of_t = [&](double t) { return forbidden_trajectory_closed(p, ms, kNatural, t); };
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> draw(0.05, 0.95);
  const double period = kPi / std::abs(omega);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 100; ++i) {
    const double t = draw(rng) * period;
    const double v = forbidden_velocity_closed(p, ms, kNatural, t);
    if (std::abs(v) > 50.0) continue;  // too close to a singular time for differencing
    CHECK(rel_diff(v, testsupport::fd1(x_of_t, t, 1e-6)) <= 1e-6);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("forbidden singular times: zeros and poles, diverging speed") {
  const ParticleSpec p{1.0, 0.8};
  const Microstate ms{1.0, 0.0, 0.0, 0.0};
  const double omega = (p.E * p.E - 1.0) / p.E;
  const double period = kPi / std::abs(omega);
  const auto times = forbidden_singular_times(p, ms, kNatural, -period, period);
  REQUIRE(!times.empty());
  // b = 0: zeros of tan at omega t = n pi, poles at omega t = pi/2 + n pi
  bool saw_zero = false, saw_pole = false;
  for (const double t : times) {
    const double theta = omega * t / kPi;
    const double frac = std::abs(theta - std::round(theta));
    if (frac < 1e-9) saw_zero = true;
    if (std::abs(frac - 0.5) < 1e-9) saw_pole = true;
    const double v_near = forbidden_velocity_closed(p, ms, kNatural, t + 1e-10);
    CHECK(std::abs(v_near) > 1e5);
  }
  CHECK(saw_zero);
  CHECK(saw_pole);

  // with b != 0 the zeros sit where tan = -b/a
  const Microstate ms2{2.0, 1.0, 0.0, 0.0};
  const auto times2 = forbidden_singular_times(p, ms2, kNatural, -period, period);
  bool found_offset_zero = false;
  for (const double t : times2) {
    const double g = ms2.a * std::tan(omega * t) + ms2.b;
    if (std::abs(g) < 1e-9) found_offset_zero = true;
  }
  CHECK(found_offset_zero);
}

TEST_CASE("forbidden forms reject the allowed regime") {
  try {
    forbidden_trajectory_closed({1.0, 1.2}, Microstate{1.0, 0.0, 0.0, 0.0}, kNatural, 0.3);
    FAIL("expected WrongRegime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongRegime);
  }
}

TEST_CASE("dual-constants run hits the closed curve for every microstate") {
  const ParticleSpec p{1.0, kSqrt2};
  const Potential free_pot = Potential::free();
  for (double a : {0.5, 3.0, -1.0}) {
    for (double b : {-1.0, 0.5}) {
      const Microstate closed{a, b, 0.2, 0.1};
      const ActionRun run = action_run_for_closed(p, closed, kNatural);
      const KGBasis basis = kg_basis_free_allowed(p, kNatural, run.basis_origin);
      const Trajectory traj = trajectory_by_quadrature(basis, run.ms, p, free_pot, kNatural,
                                                       0.1 + 0.013, 0.1 + 9.0, 25);
      for (const auto& s : traj.samples) {
        CHECK(std::abs(s.x - free_trajectory_closed(p, closed, kNatural, s.t).x) <= 1e-8);
      }
    }
  }
}
