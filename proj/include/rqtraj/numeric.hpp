#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>

#include "rqtraj/errors.hpp"

namespace rqtraj {

// Adaptive Gauss-Kronrod quadrature. Deterministic for fixed inputs.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double q = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, 12, rel_tol, &error);
  if (!std::isfinite(q)) {
    throw Error(ErrorCode::IntegrationFailure, "quadrature produced a non-finite value");
  }
  return q;
}

// Bracketed root finding on a monotone-enough g: bisection with secant
// refinement. The bracket [lo, hi] must straddle the root; convergence is on
// |g| <= y_tol, with the interval width as a floor.
inline double find_root(const std::function<double(double)>& g, double lo, double hi,
                        double g_lo, double g_hi, double y_tol, int max_iter = 200) {
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    throw Error(ErrorCode::RootBracketFailure, "bracket does not straddle the root");
  }
  double x = lo, gx = g_lo;
  for (int i = 0; i < max_iter; ++i) {
    // Secant proposal, falling back to bisection when it leaves the bracket
    // or stalls.
    double mid;
    const double denom = g_hi - g_lo;
    if (denom != 0.0) {
      mid = lo - g_lo * (hi - lo) / denom;
      const double span = hi - lo;
      if (!(mid > lo + 1e-3 * std::abs(span)) || !(mid < hi - 1e-3 * std::abs(span))) {
        mid = 0.5 * (lo + hi);
      }
    } else {
      mid = 0.5 * (lo + hi);
    }
    gx = g(mid);
    x = mid;
    if (!std::isfinite(gx)) {
      throw Error(ErrorCode::RootBracketFailure, "root function is not finite inside bracket");
    }
    if (std::abs(gx) <= y_tol) return x;
    if ((gx > 0.0) == (g_hi > 0.0)) {
      hi = mid;
      g_hi = gx;
    } else {
      lo = mid;
      g_lo = gx;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(lo) + std::abs(hi))) {
      return 0.5 * (lo + hi);
    }
  }
  return x;
}

}  // namespace rqtraj
