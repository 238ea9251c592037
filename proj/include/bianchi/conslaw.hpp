#pragma once

#include "bianchi/cases.hpp"
#include "bianchi/geodesic.hpp"

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace bianchi {

/// Conserved quantity attached to a point symmetry: the expression, the
/// generator it came from, whether the symbolic on-shell proof succeeded,
/// and a physical label.
struct FirstIntegral {
  Expr expr;
  std::string generator;
  bool proved = false;
  std::string physics; // energy | momentum-y | momentum-z | scaling/other
};

/// Labels translations whose integrals have textbook names; everything else
/// (rotations, boosts, s-dependent generators) is lumped together.
inline std::string classify_physics(const Generator &g) {
  const auto is_const = [](const Expr &e, const Rational &v) {
    return is_zero(e - Expr(v));
  };
  const bool plain_gauge = is_zero(g.gauge);
  for (int sign : {1, -1}) {
    const Rational v(sign);
    if (plain_gauge && is_zero(g.mu) && is_const(g.tau, v) && is_zero(g.xi) &&
        is_zero(g.eta) && is_zero(g.phi))
      return "energy";
    if (plain_gauge && is_zero(g.mu) && is_zero(g.tau) && is_zero(g.xi) &&
        is_const(g.eta, v) && is_zero(g.phi))
      return "momentum-y";
    if (plain_gauge && is_zero(g.mu) && is_zero(g.tau) && is_zero(g.xi) &&
        is_zero(g.eta) && is_const(g.phi, v))
      return "momentum-z";
  }
  return "scaling/other";
}

/// D_s I with each acceleration replaced by its geodesic value
/// -Gamma^a_bc xd^b xd^c; true iff the substituted derivative vanishes
/// under the metric's rewrite rules, i.e. I is conserved along every
/// geodesic of the family.
inline bool on_shell_check(const Expr &integral, const MetricSpec &spec) {
  const std::array<Expr, kDim> acc = geodesic_accelerations(spec);
  std::map<Atom, Expr> on_shell;
  for (int a = 0; a < kDim; ++a)
    on_shell[Atom::acceleration(kCoordOf[a])] = acc[a];
  return is_zero(substitute(total_derivative(integral), on_shell), spec.rules);
}

/// I = mu L + sum_a (component_a - mu xd^a) dL/dxd^a - f. The sign is fixed
/// so that d/ds yields I = -L. Unverified generators are accepted; their
/// record simply comes back with proved = false.
inline FirstIntegral first_integral(const Generator &g,
                                    const MetricSpec &spec) {
  require_point_generator(g);
  const Expr L = lagrangian(spec);
  Expr I = g.mu * L;
  for (int a = 0; a < kDim; ++a) {
    const Expr xd{Atom::velocity(kCoordOf[a])};
    I = I + (g.spacetime_component(a) - g.mu * xd) *
                partial_diff(L, Atom::velocity(kCoordOf[a]));
  }
  I = I - g.gauge;
  FirstIntegral out;
  out.expr = to_expr(normalize(I, spec.rules));
  out.generator = g.name;
  out.physics = classify_physics(g);
  out.proved = on_shell_check(out.expr, spec);
  return out;
}

/// Worst deviation of an integral from its initial value along a computed
/// trajectory. The relative figure divides by max(1, |I(initial)|) so that
/// integrals starting near zero are judged on an absolute scale.
struct DriftReport {
  std::string integral;
  std::string generator;
  double max_abs_drift = 0;
  double max_rel_drift = 0;
  double step = 0;
  double smax = 0;
  bool proved_on_shell = false;
};

inline DriftReport numeric_drift(const FirstIntegral &I,
                                 const Trajectory &traj) {
  if (traj.states.empty())
    throw std::invalid_argument("numeric_drift: empty trajectory");
  DriftReport r;
  r.integral = normalize(I.expr).str();
  r.generator = I.generator;
  r.step = traj.step;
  r.smax = traj.states.back().s;
  r.proved_on_shell = I.proved;
  const double initial =
      eval_expr(I.expr, state_bindings(traj.spec, traj.states.front()));
  const double denom = std::max(1.0, std::fabs(initial));
  for (const GeodesicState &st : traj.states) {
    const double v = eval_expr(I.expr, state_bindings(traj.spec, st));
    r.max_abs_drift = std::max(r.max_abs_drift, std::fabs(v - initial));
  }
  r.max_rel_drift = r.max_abs_drift / denom;
  return r;
}

inline nlohmann::ordered_json drift_json(const DriftReport &r) {
  nlohmann::ordered_json j;
  j["integral"] = r.integral;
  j["generator"] = r.generator;
  j["max_abs_drift"] = r.max_abs_drift;
  j["max_rel_drift"] = r.max_rel_drift;
  j["step"] = r.step;
  j["smax"] = r.smax;
  j["proved_on_shell"] = r.proved_on_shell;
  return j;
}

namespace detail {

/// Collapses the degenerate spellings of a closed form so that functional
/// equality is plain field equality: 0*t + d and c*t^0 are constants,
/// c*t^1 is linear.
inline ScalarFn scalar_canonical(const ScalarFn &f) {
  switch (f.form()) {
  case ScalarFn::Form::Constant:
    return f;
  case ScalarFn::Form::Linear:
    return f.a() == 0 ? ScalarFn::constant(f.b()) : f;
  case ScalarFn::Form::Power:
    if (f.a() == 0 || f.b() == 0)
      return ScalarFn::constant(f.a() == 0 ? 0.0 : f.a());
    if (f.b() == 1)
      return ScalarFn::linear(f.a(), 0);
    return f;
  }
  return f;
}

inline bool scalar_equal(const ScalarFn &lhs, const ScalarFn &rhs) {
  const ScalarFn f = scalar_canonical(lhs), g = scalar_canonical(rhs);
  return f.form() == g.form() && f.a() == g.a() &&
         (f.form() == ScalarFn::Form::Constant || f.b() == g.b());
}

inline bool scalar_is_zero(const ScalarFn &f) {
  return scalar_equal(f, ScalarFn::constant(0));
}

inline ScalarFn scalar_scale(const ScalarFn &f, double c) {
  switch (f.form()) {
  case ScalarFn::Form::Constant:
    return ScalarFn::constant(c * f.a());
  case ScalarFn::Form::Linear:
    return ScalarFn::linear(c * f.a(), c * f.b());
  case ScalarFn::Form::Power:
    return ScalarFn::power(c * f.a(), f.b());
  }
  return f;
}

inline ScalarFn nth_derivative(ScalarFn f, int order) {
  for (int k = 0; k < order; ++k)
    f = f.derivative();
  return f;
}

/// The closed form a rule side denotes: 0, or a rational multiple of one
/// metric-function derivative. Anything else is outside the constraint
/// shapes the catalog uses.
inline ScalarFn rule_side_fn(const Expr &side,
                             const std::array<ScalarFn, 3> &forms) {
  const CanonicalExpr c = normalize(side);
  if (c.terms().empty())
    return ScalarFn::constant(0);
  if (c.terms().size() == 1) {
    const auto &t = c.terms().front();
    if (t.mono.factors.size() == 1 && t.mono.factors.front().second == 1) {
      const Atom a = t.mono.factors.front().first;
      if (a.is_metric_fn())
        return scalar_scale(nth_derivative(forms[a.index()], a.order()),
                            t.coeff.convert_to<double>());
    }
  }
  throw std::invalid_argument("metric admissibility: constraint side '" +
                              c.str() + "' is not a metric-function multiple");
}

/// "A'' != 0" -> the second derivative of A as a closed form.
inline ScalarFn inequality_fn(const std::string &text,
                              const std::array<ScalarFn, 3> &forms) {
  size_t i = 0;
  if (i >= text.size() || text[i] < 'A' || text[i] > 'C')
    throw std::invalid_argument("metric admissibility: cannot read '" + text +
                                "'");
  const int which = text[i++] - 'A';
  int order = 0;
  while (i < text.size() && text[i] == '\'') {
    ++order;
    ++i;
  }
  if (text.substr(i) != " != 0")
    throw std::invalid_argument("metric admissibility: cannot read '" + text +
                                "'");
  return nth_derivative(forms[which], order);
}

} // namespace detail

/// Checks a closed-form metric triple against a case's constraints. Every
/// equality rule must hold as a function of t and every stated inequality
/// must be non-degenerate (the quantity must not vanish identically).
/// Returns human-readable violations; empty means the metric belongs to
/// the case.
inline std::vector<std::string> metric_case_violations(
    const CaseSpec &c, const MetricSpec &numeric) {
  if (!numeric.numeric())
    throw std::invalid_argument(
        "metric_case_violations: numeric metric required");
  const std::array<ScalarFn, 3> &forms = *numeric.closed_forms;
  std::vector<std::string> out;
  for (const auto &[atom, rhs] : c.constraints.rules()) {
    const ScalarFn lhs_fn =
        detail::nth_derivative(forms[atom.index()], atom.order());
    const ScalarFn rhs_fn = detail::rule_side_fn(rhs, forms);
    if (!detail::scalar_equal(lhs_fn, rhs_fn))
      out.push_back("constraint " + atom.name() + " = " +
                    normalize(rhs).str() + " fails: " + lhs_fn.str() +
                    " != " + rhs_fn.str());
  }
  for (const std::string &ineq : c.inequality_text)
    if (detail::scalar_is_zero(detail::inequality_fn(ineq, forms)))
      out.push_back("side condition " + ineq +
                    " degenerates: the left side vanishes identically");
  return out;
}

} // namespace bianchi
