#pragma once

#include "bianchi/metric.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace bianchi {

struct GeodesicState {
  double s = 0;
  std::array<double, kDim> pos{}; // t x y z
  std::array<double, kDim> vel{}; // td xd yd zd
};

struct Trajectory {
  std::vector<GeodesicState> states;
  double step = 0;
  MetricSpec spec;
};

/// Numeric value of an expression tree under an atom valuation.
inline double eval_expr(const Expr &e, const std::map<Atom, double> &val) {
  switch (e.kind()) {
  case Expr::Kind::Number:
    return e.value().convert_to<double>();
  case Expr::Kind::Symbol: {
    const auto it = val.find(e.atom());
    if (it == val.end())
      throw std::invalid_argument("eval_expr: no value bound for " +
                                  e.atom().name());
    return it->second;
  }
  case Expr::Kind::Sum: {
    double s = 0;
    for (const Expr &k : e.operands())
      s += eval_expr(k, val);
    return s;
  }
  case Expr::Kind::Product: {
    double p = 1;
    for (const Expr &k : e.operands())
      p *= eval_expr(k, val);
    return p;
  }
  case Expr::Kind::Power:
    return std::pow(eval_expr(e.base(), val), e.exponent());
  }
  return 0;
}

/// Valuation at a state: coordinates, velocities, and the metric functions
/// with their first two derivatives at the state's t.
inline std::map<Atom, double> state_bindings(const MetricSpec &spec,
                                             const GeodesicState &st) {
  if (!spec.numeric())
    throw std::invalid_argument("state_bindings: numeric metric required");
  std::map<Atom, double> val;
  val[Atom::coordinate(kS)] = st.s;
  for (int a = 0; a < kDim; ++a) {
    val[Atom::coordinate(kCoordOf[a])] = st.pos[a];
    val[Atom::velocity(kCoordOf[a])] = st.vel[a];
  }
  const double t = st.pos[0];
  for (int w = 0; w < 3; ++w) {
    ScalarFn f = (*spec.closed_forms)[w];
    for (int k = 0; k <= 2; ++k) {
      val[Atom::metric_fn(w, k)] = f(t);
      f = f.derivative();
    }
  }
  return val;
}

/// Classical fixed-step RK4 on the 8-dimensional first-order system
/// (pos, vel) -> (vel, -Gamma vel vel). Returns n+1 states unless the
/// trajectory leaves the domain (non-finite value or a metric function
/// dropping to zero), in which case it stops at the last good state.
inline Trajectory integrate_geodesic(const MetricSpec &spec,
                                     const GeodesicState &ics, double h,
                                     int n) {
  if (!spec.numeric())
    throw std::invalid_argument("integrate_geodesic: numeric metric required");
  if (!(h > 0))
    throw std::invalid_argument("integrate_geodesic: step must be positive");
  const std::array<Expr, kDim> acc =
      geodesic_accelerations(MetricSpec::generic());

  struct Deriv {
    std::array<double, kDim> dpos{}, dvel{};
  };
  auto rhs = [&](const GeodesicState &st, Deriv &out) -> bool {
    const double t = st.pos[0];
    for (int w = 0; w < 3; ++w) {
      const double v = (*spec.closed_forms)[w](t);
      if (!std::isfinite(v) || v <= 0)
        return false;
    }
    const std::map<Atom, double> val = state_bindings(spec, st);
    out.dpos = st.vel;
    for (int a = 0; a < kDim; ++a) {
      out.dvel[a] = eval_expr(acc[a], val);
      if (!std::isfinite(out.dvel[a]))
        return false;
    }
    return true;
  };
  auto shifted = [&](const GeodesicState &base, const Deriv &d, double frac) {
    GeodesicState st = base;
    st.s += frac * h;
    for (int a = 0; a < kDim; ++a) {
      st.pos[a] += frac * h * d.dpos[a];
      st.vel[a] += frac * h * d.dvel[a];
    }
    return st;
  };

  Trajectory traj{{ics}, h, spec};
  GeodesicState cur = ics;
  for (int i = 0; i < n; ++i) {
    Deriv k1, k2, k3, k4;
    if (!rhs(cur, k1) || !rhs(shifted(cur, k1, 0.5), k2) ||
        !rhs(shifted(cur, k2, 0.5), k3) || !rhs(shifted(cur, k3, 1.0), k4))
      break;
    GeodesicState next = cur;
    next.s = ics.s + (i + 1) * h; // avoids accumulating step roundoff in s
    bool finite = true;
    for (int a = 0; a < kDim; ++a) {
      next.pos[a] = cur.pos[a] + h / 6 *
                                     (k1.dpos[a] + 2 * k2.dpos[a] +
                                      2 * k3.dpos[a] + k4.dpos[a]);
      next.vel[a] = cur.vel[a] + h / 6 *
                                     (k1.dvel[a] + 2 * k2.dvel[a] +
                                      2 * k3.dvel[a] + k4.dvel[a]);
      finite = finite && std::isfinite(next.pos[a]) && std::isfinite(next.vel[a]);
    }
    if (!finite)
      break;
    traj.states.push_back(next);
    cur = next;
  }
  return traj;
}

} // namespace bianchi
