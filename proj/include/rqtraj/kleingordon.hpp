#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rqtraj/errors.hpp"
#include "rqtraj/particle.hpp"
#include "rqtraj/potential.hpp"
#include "rqtraj/units.hpp"

namespace rqtraj {

struct BasisSample {
  double theta = 0.0;
  double theta_prime = 0.0;
  double phi = 0.0;
  double phi_prime = 0.0;

  double local_wronskian() const { return theta_prime * phi - theta * phi_prime; }
};

// Two real independent solutions (theta, phi) of the stationary equation
//
//   -c^2 hbar^2 psi'' + [m0^2 c^4 - (E - V)^2] psi = 0,
//
// together with their first derivatives, the constant Wronskian
// W = theta'*phi - theta*phi', and the coefficient Lambda(x) such that
// psi'' = Lambda * psi. Downstream modules differentiate through the basis
// using Lambda instead of differencing samples.
//
// Three constructions are provided: closed-form free bases for the allowed
// (sin/cos) and forbidden (decaying/growing exponential) regimes, optionally
// centered on an origin, and a numerically integrated basis for arbitrary
// smooth potentials on a finite domain.
class KGBasis {
 public:
  enum class Kind { FreeAllowed, FreeForbidden, Numeric };

  BasisSample eval(double x) const {
    switch (kind_) {
      case Kind::FreeAllowed: {
        const double xi = k_ * (x - origin_);
        return {std::sin(xi), k_ * std::cos(xi), std::cos(xi), -k_ * std::sin(xi)};
      }
      case Kind::FreeForbidden: {
        const double xi = x - origin_;
        const double d = std::exp(-k_ * xi);
        const double g = std::exp(k_ * xi);
        return {d, -k_ * d, g, k_ * g};
      }
      case Kind::Numeric:
        return eval_numeric(x);
    }
    return {};
  }

  double wronskian() const { return wronskian_; }
  Region regime() const { return regime_; }
  Kind kind() const { return kind_; }
  double origin() const { return origin_; }

  // k in the allowed regime, kappa in the forbidden one; 0 for numeric bases
  // (no single wave number exists under a varying potential).
  double wave_number() const { return kind_ == Kind::Numeric ? 0.0 : k_; }

  // Lambda(x) = [m0^2 c^4 - (E - V(x))^2] / (hbar c)^2
  double kg_coefficient(double x) const {
    const double ev = particle_.E - potential_.value(x);
    const double mc2 = particle_.rest_energy(units_);
    const double hc = units_.hbar * units_.c;
    return (mc2 * mc2 - ev * ev) / (hc * hc);
  }

  // Scaled residual |psi'' - Lambda psi| / (1 + |Lambda psi|) of the basis as
  // evaluated (for numeric bases: of the interpolant). Closed-form bases
  // satisfy the equation exactly up to rounding.
  double kg_residual(double x, bool phi_component = false) const {
    const double lambda = kg_coefficient(x);
    double psi, d2psi;
    if (kind_ == Kind::Numeric) {
      const auto cell = locate(x);
      d2psi = hermite_second(cell.first, cell.second, phi_component);
      const BasisSample s = eval_numeric(x);
      psi = phi_component ? s.phi : s.theta;
    } else {
      const BasisSample s = eval(x);
      psi = phi_component ? s.phi : s.theta;
      d2psi = lambda * psi;
    }
    return std::abs(d2psi - lambda * psi) / (1.0 + std::abs(lambda * psi));
  }

  const ParticleSpec& particle() const { return particle_; }
  const Potential& potential() const { return potential_; }
  const UnitSystem& units() const { return units_; }

  // Numeric-basis metadata.
  std::pair<double, double> domain() const { return {x_min_, x_max_}; }
  double grid_step() const { return h_; }
  std::size_t grid_size() const { return theta_grid_.size(); }
  double grid_point(std::size_t i) const { return x_min_ + static_cast<double>(i) * h_; }
  double richardson_error() const { return richardson_error_; }
  double wronskian_drift() const { return wronskian_drift_; }

  bool in_domain(double x) const {
    if (kind_ != Kind::Numeric) return true;
    return x >= x_min_ && x <= x_max_;
  }

  friend KGBasis kg_basis_free_allowed(const ParticleSpec&, const UnitSystem&, double, double);
  friend KGBasis kg_basis_free_forbidden(const ParticleSpec&, const UnitSystem&, double, double);
  friend KGBasis kg_basis_numeric(const ParticleSpec&, const Potential&, const UnitSystem&,
                                  double, double, double, double, double);

 private:
  KGBasis(Kind kind, ParticleSpec p, Potential pot, UnitSystem u)
      : kind_(kind), particle_(p), potential_(std::move(pot)), units_(u) {}

  struct State {
    double theta, dtheta, phi, dphi;
  };

  // One RK4 step of (psi, psi')' = (psi', Lambda psi) for both solutions.
  State rk4_step(const State& s, double x, double h) const {
    auto deriv = [this](double xx, const State& y) -> State {
      const double lam = kg_coefficient(xx);
      return {y.dtheta, lam * y.theta, y.dphi, lam * y.phi};
    };
    auto axpy = [](const State& y, const State& d, double f) -> State {
      return {y.theta + f * d.theta, y.dtheta + f * d.dtheta, y.phi + f * d.phi,
              y.dphi + f * d.dphi};
    };
    const State k1 = deriv(x, s);
    const State k2 = deriv(x + 0.5 * h, axpy(s, k1, 0.5 * h));
    const State k3 = deriv(x + 0.5 * h, axpy(s, k2, 0.5 * h));
    const State k4 = deriv(x + h, axpy(s, k3, h));
    return {s.theta + h / 6.0 * (k1.theta + 2.0 * (k2.theta + k3.theta) + k4.theta),
            s.dtheta + h / 6.0 * (k1.dtheta + 2.0 * (k2.dtheta + k3.dtheta) + k4.dtheta),
            s.phi + h / 6.0 * (k1.phi + 2.0 * (k2.phi + k3.phi) + k4.phi),
            s.dphi + h / 6.0 * (k1.dphi + 2.0 * (k2.dphi + k3.dphi) + k4.dphi)};
  }

  std::vector<State> integrate_grid(double h, std::size_t n_steps) const {
    std::vector<State> grid;
    grid.reserve(n_steps + 1);
    State s{0.0, 1.0, 1.0, 0.0};
    grid.push_back(s);
    for (std::size_t i = 0; i < n_steps; ++i) {
      const double x = x_min_ + static_cast<double>(i) * h;
      s = rk4_step(s, x, h);
      if (!std::isfinite(s.theta) || !std::isfinite(s.dtheta) || !std::isfinite(s.phi) ||
          !std::isfinite(s.dphi)) {
        throw Error(ErrorCode::IntegrationFailure,
                    "non-finite basis value at x=" + std::to_string(x + h));
      }
      grid.push_back(s);
    }
    return grid;
  }

  std::pair<std::size_t, double> locate(double x) const {
    if (!in_domain(x)) {
      throw Error(ErrorCode::OutOfDomain, "x=" + std::to_string(x) + " outside basis domain");
    }
    const std::size_t cells = theta_grid_.size() - 1;
    double u = (x - x_min_) / h_;
    std::size_t i = static_cast<std::size_t>(u);
    if (i >= cells) i = cells - 1;
    return {i, u - static_cast<double>(i)};
  }

  // Cubic Hermite on (psi, psi') per cell; psi' gets its own Hermite cubic
  // with slopes from psi'' = Lambda psi, which keeps both C^1.
  BasisSample eval_numeric(double x) const {
    const auto [i, s] = locate(x);
    const double h = h_;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    const double lam0 = lambda_grid_[i];
    const double lam1 = lambda_grid_[i + 1];

    auto value = [&](const std::vector<double>& v, const std::vector<double>& dv) {
      return h00 * v[i] + h10 * h * dv[i] + h01 * v[i + 1] + h11 * h * dv[i + 1];
    };
    auto slope = [&](const std::vector<double>& v, const std::vector<double>& dv) {
      return h00 * dv[i] + h10 * h * lam0 * v[i] + h01 * dv[i + 1] + h11 * h * lam1 * v[i + 1];
    };
    return {value(theta_grid_, dtheta_grid_), slope(theta_grid_, dtheta_grid_),
            value(phi_grid_, dphi_grid_), slope(phi_grid_, dphi_grid_)};
  }

  // Second derivative of the psi' Hermite cubic (used only for residual
  // diagnostics).
  double hermite_second(std::size_t i, double s, bool phi_component) const {
    const double h = h_;
    const double d00 = 6.0 * s * s - 6.0 * s;
    const double d10 = 3.0 * s * s - 4.0 * s + 1.0;
    const double d01 = -6.0 * s * s + 6.0 * s;
    const double d11 = 3.0 * s * s - 2.0 * s;
    const std::vector<double>& v = phi_component ? phi_grid_ : theta_grid_;
    const std::vector<double>& dv = phi_component ? dphi_grid_ : dtheta_grid_;
    return (d00 / h) * dv[i] + d10 * lambda_grid_[i] * v[i] + (d01 / h) * dv[i + 1] +
           d11 * lambda_grid_[i + 1] * v[i + 1];
  }

  Kind kind_;
  ParticleSpec particle_;
  Potential potential_;
  UnitSystem units_;
  Region regime_ = Region::Allowed;
  double k_ = 0.0;
  double origin_ = 0.0;
  double wronskian_ = 0.0;

  double x_min_ = 0.0, x_max_ = 0.0, h_ = 0.0;
  double richardson_error_ = 0.0;
  double wronskian_drift_ = 0.0;
  std::vector<double> theta_grid_, dtheta_grid_, phi_grid_, dphi_grid_, lambda_grid_;
};

namespace detail {

inline void require_nondegenerate(const ParticleSpec& p, const UnitSystem& u, double eps_deg) {
  const double mc2 = p.rest_energy(u);
  if (std::abs(p.E * p.E - mc2 * mc2) <= eps_deg * (p.E * p.E + mc2 * mc2)) {
    throw Error(ErrorCode::DegenerateEnergy,
                "E is inside the degenerate band around m0 c^2");
  }
}

}  // namespace detail

// theta = sin(k (x - origin)), phi = cos(k (x - origin)) with
// k = sqrt(E^2 - m0^2 c^4) / (hbar c); W = theta'*phi - theta*phi' = k.
inline KGBasis kg_basis_free_allowed(const ParticleSpec& p, const UnitSystem& u,
                                     double origin = 0.0,
                                     double eps_deg = kDefaultDegenerateBand) {
  p.validate();
  u.validate();
  detail::require_nondegenerate(p, u, eps_deg);
  const double mc2 = p.rest_energy(u);
  if (p.E < mc2) {
    throw Error(ErrorCode::WrongRegime, "E < m0 c^2: no oscillatory free basis");
  }
  KGBasis basis(KGBasis::Kind::FreeAllowed, p, Potential::free(), u);
  basis.k_ = std::sqrt(p.E * p.E - mc2 * mc2) / (u.hbar * u.c);
  basis.origin_ = origin;
  basis.regime_ = Region::Allowed;
  basis.wronskian_ = basis.k_;
  return basis;
}

// theta = exp(-kappa (x - origin)), phi = exp(+kappa (x - origin)) with
// kappa = sqrt(m0^2 c^4 - E^2) / (hbar c); W = -2 kappa.
inline KGBasis kg_basis_free_forbidden(const ParticleSpec& p, const UnitSystem& u,
                                       double origin = 0.0,
                                       double eps_deg = kDefaultDegenerateBand) {
  p.validate();
  u.validate();
  detail::require_nondegenerate(p, u, eps_deg);
  const double mc2 = p.rest_energy(u);
  if (p.E > mc2) {
    throw Error(ErrorCode::WrongRegime, "E > m0 c^2: forbidden basis needs 0 < E < m0 c^2");
  }
  KGBasis basis(KGBasis::Kind::FreeForbidden, p, Potential::free(), u);
  basis.k_ = std::sqrt(mc2 * mc2 - p.E * p.E) / (u.hbar * u.c);
  basis.origin_ = origin;
  basis.regime_ = Region::Forbidden;
  basis.wronskian_ = -2.0 * basis.k_;
  return basis;
}

// Numerical basis on [x_min, x_max] from initial data
// (theta, theta')(x_min) = (0, 1), (phi, phi')(x_min) = (1, 0), which gives
// W = +1. A fixed-step RK4 run at the requested step is checked against a
// step-halved run (Richardson), and the halved grid is kept. Adaptive schemes
// are deliberately avoided: the sampling must be reproducible bit-for-bit.
inline KGBasis kg_basis_numeric(const ParticleSpec& p, const Potential& pot,
                                const UnitSystem& u, double x_min, double x_max,
                                double step, double wronskian_tol = 1e-8,
                                double eps_deg = kDefaultDegenerateBand) {
  p.validate();
  u.validate();
  if (!(step > 0.0) || !(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorCode::InvalidConstants, "numeric basis needs a finite domain and step > 0");
  }

  KGBasis basis(KGBasis::Kind::Numeric, p, pot, u);
  basis.x_min_ = x_min;
  basis.x_max_ = x_max;

  const auto n_coarse =
      static_cast<std::size_t>(std::ceil((x_max - x_min) / step - 1e-9));
  const std::size_t n_fine = 2 * std::max<std::size_t>(n_coarse, 1);
  const double h_fine = (x_max - x_min) / static_cast<double>(n_fine);
  basis.h_ = h_fine;

  // The regime must be uniform on the domain; trajectories cannot cross the
  // degenerate band.
  Region regime = classify_region(p, pot, u, x_min, eps_deg);
  for (std::size_t i = 0; i <= n_fine; ++i) {
    const double x = x_min + static_cast<double>(i) * h_fine;
    const Region r = classify_region(p, pot, u, x, eps_deg);
    if (r == Region::Degenerate || r != regime) {
      throw Error(ErrorCode::DegeneratePath,
                  "potential crosses the degenerate band inside the domain");
    }
  }
  basis.regime_ = regime;

  const auto coarse = basis.integrate_grid(2.0 * h_fine, n_fine / 2);
  const auto fine = basis.integrate_grid(h_fine, n_fine);

  double rich = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const auto& a = coarse[i];
    const auto& b = fine[2 * i];
    const double scale = 1.0 + std::abs(b.theta) + std::abs(b.phi);
    rich = std::max(rich, (std::abs(a.theta - b.theta) + std::abs(a.phi - b.phi)) / scale);
  }
  basis.richardson_error_ = rich / 15.0;

  basis.theta_grid_.resize(fine.size());
  basis.dtheta_grid_.resize(fine.size());
  basis.phi_grid_.resize(fine.size());
  basis.dphi_grid_.resize(fine.size());
  basis.lambda_grid_.resize(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    basis.theta_grid_[i] = fine[i].theta;
    basis.dtheta_grid_[i] = fine[i].dtheta;
    basis.phi_grid_[i] = fine[i].phi;
    basis.dphi_grid_[i] = fine[i].dphi;
    basis.lambda_grid_[i] = basis.kg_coefficient(x_min + static_cast<double>(i) * h_fine);
  }

  const double w0 = fine.front().dtheta * fine.front().phi - fine.front().theta * fine.front().dphi;
  double drift = 0.0;
  for (const auto& s : fine) {
    const double w = s.dtheta * s.phi - s.theta * s.dphi;
    drift = std::max(drift, std::abs(w - w0) / std::abs(w0));
  }
  basis.wronskian_drift_ = drift;
  if (drift > wronskian_tol) {
    throw Error(ErrorCode::WronskianDrift,
                "Wronskian drift " + std::to_string(drift) + " exceeds tolerance");
  }
  basis.wronskian_ = w0;
  return basis;
}

}  // namespace rqtraj
