#pragma once

#include <cmath>

#include "rqtraj/errors.hpp"
#include "rqtraj/potential.hpp"
#include "rqtraj/units.hpp"

namespace rqtraj {

// Rest mass and total energy (rest energy included). m0 = 0 selects the
// photon case.
struct ParticleSpec {
  double m0 = 1.0;
  double E = 1.0;

  void validate() const {
    if (!(m0 >= 0.0) || !std::isfinite(m0)) {
      throw Error(ErrorCode::InvalidConstants, "rest mass must be finite and >= 0");
    }
    if (!(E > 0.0) || !std::isfinite(E)) {
      throw Error(ErrorCode::InvalidConstants, "total energy must be finite and > 0");
    }
  }

  double rest_energy(const UnitSystem& u) const { return m0 * u.c * u.c; }
};

enum class Region { Allowed, Forbidden, Degenerate };

inline const char* region_name(Region r) {
  switch (r) {
    case Region::Allowed: return "Allowed";
    case Region::Forbidden: return "Forbidden";
    case Region::Degenerate: return "Degenerate";
  }
  return "Degenerate";
}

inline constexpr double kDefaultDegenerateBand = 1e-12;

// (E - V)^2 - m0^2 c^4: positive in classically allowed regions, negative in
// forbidden ones. Everything downstream branches on this sign.
inline double regime_discriminant(const ParticleSpec& p, const Potential& pot,
                                  const UnitSystem& u, double x) {
  const double ev = p.E - pot.value(x);
  const double mc2 = p.rest_energy(u);
  return ev * ev - mc2 * mc2;
}

// The surface (E - V)^2 = m0^2 c^4 makes the momentum-velocity relation and
// the f-function singular, so it is excluded by a relative band eps_deg.
inline Region classify_region(const ParticleSpec& p, const Potential& pot,
                              const UnitSystem& u, double x,
                              double eps_deg = kDefaultDegenerateBand) {
  const double ev = p.E - pot.value(x);
  const double mc2 = p.rest_energy(u);
  const double d = ev * ev - mc2 * mc2;
  const double band = eps_deg * (ev * ev + mc2 * mc2);
  if (d > band) return Region::Allowed;
  if (d < -band) return Region::Forbidden;
  return Region::Degenerate;
}

// T = E - V - m0 c^2
inline double kinetic_energy(const ParticleSpec& p, const Potential& pot,
                             const UnitSystem& u, double x) {
  return p.E - pot.value(x) - p.rest_energy(u);
}

}  // namespace rqtraj
