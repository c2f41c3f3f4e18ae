#pragma once

#include <cmath>

#include "rqtraj/errors.hpp"

namespace rqtraj {

// hbar and c are carried explicitly through every formula so the same code
// runs in natural units (the default) or in rescaled ones; the limit suites
// rely on rescaling hbar and c.
struct UnitSystem {
  double hbar = 1.0;
  double c = 1.0;

  static UnitSystem natural() { return {}; }

  void validate() const {
    if (!(hbar > 0.0) || !(c > 0.0) || !std::isfinite(hbar) || !std::isfinite(c)) {
      throw Error(ErrorCode::InvalidConstants, "hbar and c must be finite and positive");
    }
  }
};

}  // namespace rqtraj
