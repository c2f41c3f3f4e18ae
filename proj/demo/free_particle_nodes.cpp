// Minimal library walk-through: build the free basis, follow one microstate
// by quadrature inversion, and show that the sampled positions hit the node
// lattice no matter which (a, b) generated them.

#include <cstdio>

#include "rqtraj/rqtraj.hpp"

int main() {
  using namespace rqtraj;

  const UnitSystem units;                       // hbar = c = 1
  const ParticleSpec electron{1.0, 1.4142135623730951};
  const Potential none = Potential::free();

  const NodeLattice lattice = node_lattice(electron, units);
  std::printf("node spacing: dt = %.6f, dx = %.6f, mean velocity = %.6f\n", lattice.dt,
              lattice.dx, lattice.mean_velocity());

  for (const double a : {1.0, 2.0, 3.0}) {
    const Microstate ms{a, 0.0, 0.0, 0.0};
    const ActionRun run = action_run_for_closed(electron, ms, units);
    const KGBasis basis = kg_basis_free_allowed(electron, units, run.basis_origin);
    const Trajectory traj =
        trajectory_by_quadrature(basis, run.ms, electron, none, units, 0.0, 2.0 * lattice.dt, 9);
    std::printf("a = %.0f:", a);
    for (const auto& s : traj.samples) std::printf("  x(%.2f)=%.4f", s.t, s.x);
    std::printf("\n");
    const double t_node = lattice.node_time(0);
    const double x_node = free_trajectory_closed(electron, ms, units, t_node).x;
    std::printf("        first node: x(%.6f) = %.6f (lattice says %.6f)\n", t_node, x_node,
                lattice.node_position(0));
  }
  return 0;
}
