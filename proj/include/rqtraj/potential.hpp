#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "rqtraj/errors.hpp"

namespace rqtraj {

// Static 1-D potential with analytic first and second derivatives. The
// built-in shapes have exact derivatives; a custom potential must supply its
// own. No time dependence, no vector part.
class Potential {
 public:
  enum class Tag { Free, Constant, Linear, Custom };

  using Fn = std::function<double(double)>;

  static Potential free() {
    return Potential(Tag::Free, [](double) { return 0.0; }, zero(), zero());
  }

  static Potential constant(double v0) {
    return Potential(Tag::Constant, [v0](double) { return v0; }, zero(), zero());
  }

  // V(x) = slope * x + v0
  static Potential linear(double slope, double v0 = 0.0) {
    return Potential(
        Tag::Linear, [slope, v0](double x) { return slope * x + v0; },
        [slope](double) { return slope; }, zero());
  }

  static Potential custom(Fn v, Fn dv, Fn d2v) {
    return Potential(Tag::Custom, std::move(v), std::move(dv), std::move(d2v));
  }

  double value(double x) const { return check(v_(x), x); }
  double slope(double x) const { return check(dv_(x), x); }
  double curvature(double x) const { return check(d2v_(x), x); }

  Tag tag() const { return tag_; }

  std::string tag_name() const {
    switch (tag_) {
      case Tag::Free: return "free";
      case Tag::Constant: return "constant";
      case Tag::Linear: return "linear";
      case Tag::Custom: return "custom";
    }
    return "custom";
  }

 private:
  Potential(Tag tag, Fn v, Fn dv, Fn d2v)
      : tag_(tag), v_(std::move(v)), dv_(std::move(dv)), d2v_(std::move(d2v)) {}

  static Fn zero() {
    return [](double) { return 0.0; };
  }

  static double check(double value, double x) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::InvalidConstants,
                  "potential evaluation is not finite at x=" + std::to_string(x));
    }
    return value;
  }

  Tag tag_;
  Fn v_, dv_, d2v_;
};

}  // namespace rqtraj
