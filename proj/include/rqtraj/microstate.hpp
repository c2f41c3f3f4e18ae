#pragma once

#include <cmath>

#include "rqtraj/errors.hpp"

namespace rqtraj {

// Hidden-parameter constants (a, b) selecting one trajectory among all that
// share the same energy, plus the trajectory offsets (x0, t0). a = 0 would
// collapse the reduced action to a constant and is rejected; (1, 0) is the
// distinguished classical microstate.
struct Microstate {
  double a = 1.0;
  double b = 0.0;
  double x0 = 0.0;
  double t0 = 0.0;

  static Microstate classical() { return {}; }

  void validate() const {
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
      throw Error(ErrorCode::InvalidConstants, "microstate requires finite a != 0 and finite b");
    }
    if (!std::isfinite(x0) || !std::isfinite(t0)) {
      throw Error(ErrorCode::InvalidConstants, "microstate offsets must be finite");
    }
  }
};

// The one-energy trajectory family carries two equivalent (a, b) labellings:
// one through the reduced action S0 = hbar*arctan(a*theta/phi + b), one
// through the closed time equations x(t). A single curve labelled (a, b) in
// one description is labelled (1/a, -b/a) in the other; the map is an
// involution and fixes the classical microstate (1, 0).
inline Microstate dual_constants(const Microstate& ms) {
  ms.validate();
  return Microstate{1.0 / ms.a, -ms.b / ms.a, ms.x0, ms.t0};
}

}  // namespace rqtraj
