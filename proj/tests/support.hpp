#pragma once

// Shared finite-difference oracles. These stay independent of the library's
// analytic derivative paths on purpose: they are what the closed forms are
// checked against.

#include <cmath>

namespace testsupport {

// O(h^4) central first derivative.
template <typename F>
double fd1(F&& f, double x, double h) {
  return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

// O(h^4) central second derivative.
template <typename F>
double fd2(F&& f, double x, double h) {
  return (-f(x - 2 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2 * h)) /
         (12.0 * h * h);
}

// Five-point central third derivative, Richardson-extrapolated to O(h^4).
template <typename F>
double fd3(F&& f, double x, double h) {
  auto base = [&](double hh) {
    return (-f(x - 2 * hh) + 2.0 * f(x - hh) - 2.0 * f(x + hh) + f(x + 2 * hh)) /
           (2.0 * hh * hh * hh);
  };
  return (4.0 * base(0.5 * h) - base(h)) / 3.0;
}

inline double rel_diff(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-30);
  return std::abs(got - want) / scale;
}

}  // namespace testsupport
