#pragma once

#include "bianchi/metric.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace bianchi {

/// Point-symmetry candidate X = mu d/ds + tau d/dt + xi d/dx + eta d/dy
/// + phi d/dz with gauge f. Components are functions of (s,t,x,y,z) only.
struct Generator {
  std::string name;
  Expr mu, tau, xi, eta, phi;
  Expr gauge;

  /// Spacetime components indexed like kCoordOf: 0..3 -> tau, xi, eta, phi.
  const Expr &spacetime_component(int a) const {
    switch (a) {
    case 0:
      return tau;
    case 1:
      return xi;
    case 2:
      return eta;
    case 3:
      return phi;
    }
    throw std::out_of_range("Generator: spacetime component index");
  }

  /// All six scalar functions: 0..5 -> mu, tau, xi, eta, phi, gauge. The
  /// index matches the unknown-function atom numbering.
  const Expr &component(int which) const {
    switch (which) {
    case 0:
      return mu;
    case 5:
      return gauge;
    default:
      return spacetime_component(which - 1);
    }
  }
};

inline void require_point_generator(const Generator &g) {
  for (int which = 0; which < 6; ++which) {
    std::set<Atom> atoms;
    collect_atoms(g.component(which), atoms);
    for (Atom a : atoms)
      if (a.is_velocity() || a.is_acceleration())
        throw std::invalid_argument("Generator" +
                                    (g.name.empty() ? "" : " " + g.name) +
                                    ": jet atom " + a.name() +
                                    " in a point-symmetry component");
  }
}

/// First prolongation: the coefficient picked up by d/dxd^a, namely
/// D_s(component) - xd^a D_s(mu).
struct ProlongedCoefficients {
  std::array<Expr, kDim> coeff;
};

inline ProlongedCoefficients prolong(const Generator &g) {
  require_point_generator(g);
  const Expr dmu = total_derivative(g.mu);
  ProlongedCoefficients p;
  for (int a = 0; a < kDim; ++a)
    p.coeff[a] = total_derivative(g.spacetime_component(a)) -
                 Expr(Atom::velocity(kCoordOf[a])) * dmu;
  return p;
}

/// X^1 L + L D_s(mu) - D_s(f), normalized under the metric's rewrite rules.
/// Zero iff X is a Noether symmetry of the metric's Lagrangian with gauge f.
/// Velocity degree <= 3.
inline Expr noether_residual(const Generator &g, const MetricSpec &spec) {
  const Expr L = lagrangian(spec);
  const ProlongedCoefficients p = prolong(g);
  Expr r = g.mu * partial_diff(L, Atom::coordinate(kS));
  for (int a = 0; a < kDim; ++a)
    r = r +
        g.spacetime_component(a) *
            partial_diff(L, Atom::coordinate(kCoordOf[a])) +
        p.coeff[a] * partial_diff(L, Atom::velocity(kCoordOf[a]));
  r = r + L * total_derivative(g.mu) - total_derivative(g.gauge);
  return to_expr(normalize(r, spec.rules));
}

} // namespace bianchi
