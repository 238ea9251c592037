#pragma once

#include "bianchi/generator.hpp"
#include "bianchi/parse.hpp"
#include "bianchi/split.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bianchi {

/// Claimed commutation relation [X_i, X_j] = sum_k rhs[k] X_k over the
/// claimed generator list (1-based indices, as printed).
struct ClaimedBracket {
  int i, j;
  std::map<int, Rational> rhs;
};

/// One classification case: constraint rules on A, B, C, the parameterized
/// component solution, and the claimed generator list with its bracket
/// table. Claims are data to be recomputed, not assumed facts.
struct CaseSpec {
  std::string label;
  std::vector<std::string> constraint_text; // equalities, imposed as rules
  std::vector<std::string> inequality_text; // side conditions, not rules
  RewriteRules constraints;
  Generator component_solution; // parameterized by a1..a9
  std::vector<Generator> claimed;
  bool brackets_claimed = true; // false when no table is printed at all
  std::vector<ClaimedBracket> claimed_brackets; // unlisted pairs: claimed 0
  std::vector<int> levi_candidate; // 1-based indices; empty if none claimed
  std::vector<std::string> notes;  // catalog-level caveats
};

struct Verdict {
  bool verified = false;
  CanonicalExpr residual;              // zero iff verified
  std::vector<std::string> offending;  // velocity monomials of the residual
};

inline Verdict verify_generator(const Generator &g, const CaseSpec &c) {
  Verdict v;
  v.residual =
      normalize(noether_residual(g, MetricSpec::with_rules(c.constraints)));
  v.verified = v.residual.is_zero();
  if (!v.verified)
    for (const auto &[mono, coeff] : velocity_split(v.residual))
      v.offending.push_back(monomial_str(mono));
  return v;
}

namespace detail {

inline void set_component(Generator &g, int which, Expr e) {
  switch (which) {
  case 0:
    g.mu = std::move(e);
    return;
  case 1:
    g.tau = std::move(e);
    return;
  case 2:
    g.xi = std::move(e);
    return;
  case 3:
    g.eta = std::move(e);
    return;
  case 4:
    g.phi = std::move(e);
    return;
  case 5:
    g.gauge = std::move(e);
    return;
  }
  throw std::out_of_range("set_component");
}

inline Generator make_generator(std::string name, const std::string &mu,
                                const std::string &tau, const std::string &xi,
                                const std::string &eta, const std::string &phi,
                                const std::string &gauge = "0") {
  Generator g;
  g.name = std::move(name);
  g.mu = parse_expr(mu);
  g.tau = parse_expr(tau);
  g.xi = parse_expr(xi);
  g.eta = parse_expr(eta);
  g.phi = parse_expr(phi);
  g.gauge = parse_expr(gauge);
  require_point_generator(g);
  return g;
}

} // namespace detail

/// One generator per parameter direction a_i of the component solution
/// (zero directions dropped). Requires the solution to be linear
/// homogeneous in a1..a9.
inline std::vector<Generator> basis_from_solution(const CaseSpec &c) {
  std::vector<Generator> basis;
  Generator reconstructed;
  for (int i = 0; i < 9; ++i) {
    const Atom alpha = Atom::parameter(i);
    Generator g;
    g.name = alpha.name();
    bool nonzero = false;
    for (int which = 0; which < 6; ++which) {
      const Expr d = to_expr(normalize(
          partial_diff(c.component_solution.component(which), alpha)));
      std::set<Atom> atoms;
      collect_atoms(d, atoms);
      for (Atom a : atoms)
        if (a.is_parameter())
          throw std::invalid_argument("case " + c.label +
                                      ": component solution is nonlinear in " +
                                      alpha.name());
      nonzero = nonzero || !is_zero(d);
      detail::set_component(g, which, d);
      detail::set_component(reconstructed, which,
                            reconstructed.component(which) + Expr(alpha) * d);
    }
    if (nonzero)
      basis.push_back(std::move(g));
  }
  for (int which = 0; which < 6; ++which)
    if (!is_zero(c.component_solution.component(which) -
                 reconstructed.component(which)))
      throw std::invalid_argument(
          "case " + c.label +
          ": component solution has a parameter-free part");
  return basis;
}

/// The nine classification cases, transcribed as claimed. Constraint rule
/// sets contain the printed equalities plus, for the second case, one
/// equality the printed generator list itself forces (see the note).
inline const std::vector<CaseSpec> &case_catalog() {
  using detail::make_generator;
  static const std::vector<CaseSpec> catalog = [] {
    std::vector<CaseSpec> cases;

    {
      CaseSpec c;
      c.label = "I";
      c.constraint_text = {"A'' = 0", "A = B = C"};
      c.constraints.add(Atom::metric_fn(0, 2), Expr(0));
      c.constraints.add(Atom::metric_fn(1), parse_expr("A(t)"));
      c.constraints.add(Atom::metric_fn(2), parse_expr("A(t)"));
      c.component_solution = make_generator(
          "solution", "a1/2*s^2 + a2*s + a3",
          "a1/2*s*t + a2/2*t + a4*s + a6", "a7", "a7*z + a8", "-a9",
          "-a1/2*t^2 - 2*a4*t");
      c.claimed = {
          make_generator("X1", "s^2/2", "t*s/2", "0", "0", "0", "-t^2/2"),
          make_generator("X2", "s", "t/2", "0", "0", "0"),
          make_generator("X3", "0", "1", "0", "0", "0"),
          make_generator("X4", "0", "0", "1", "0", "0"),
          make_generator("X5", "0", "s", "0", "0", "0", "-2*t"),
          make_generator("X6", "0", "0", "1", "z", "0"),
          make_generator("X7", "0", "0", "0", "1", "0"),
          make_generator("X8", "0", "0", "0", "0", "-1"),
      };
      c.claimed_brackets = {
          {1, 2, {{1, Rational(-1)}}},    {1, 3, {{5, Rational(1, 2)}}},
          {1, 4, {{2, Rational(-1)}}},    {2, 3, {{1, Rational(-1, 2)}}},
          {2, 4, {{4, Rational(-1)}}},    {2, 5, {{5, Rational(1)}}},
          {4, 5, {{3, Rational(1)}}},     {6, 8, {{7, Rational(1)}}},
      };
      c.levi_candidate = {1, 2, 4};
      cases.push_back(std::move(c));
    }

    {
      CaseSpec c;
      c.label = "II";
      c.constraint_text = {"A' = 0", "B' = 0", "C' = 0", "A = C"};
      c.constraints.add(Atom::metric_fn(0, 1), Expr(0));
      c.constraints.add(Atom::metric_fn(1, 1), Expr(0));
      c.constraints.add(Atom::metric_fn(2, 1), Expr(0));
      c.constraints.add(Atom::metric_fn(2), parse_expr("A(t)"));
      c.notes = {"constraint A = C added: the generator z d/dx + "
                 "((z^2 - x^2)/2) d/dy - x d/dz listed for this case has "
                 "residual 2*(A^2 - C^2)*xd*zd, so it is a symmetry only "
                 "when the x and z scale factors agree"};
      c.component_solution = make_generator(
          "solution", "a1", "a2*s + a3", "a4*z + a5",
          "a4*(z^2 - x^2)/2 + a5*z + a6", "-a4*x - a7", "-2*a2*t");
      c.claimed = {
          make_generator("X1", "1", "0", "0", "0", "0"),
          make_generator("X2", "0", "s", "0", "0", "0", "-2*t"),
          make_generator("X3", "0", "0", "z", "(z^2 - x^2)/2", "-x"),
          make_generator("X4", "0", "1", "0", "0", "0"),
          make_generator("X5", "0", "0", "1", "z", "0"),
          make_generator("X6", "0", "0", "0", "1", "0"),
          make_generator("X7", "0", "0", "0", "0", "-1"),
      };
      c.claimed_brackets = {
          {1, 2, {{4, Rational(1)}}},
          {5, 3, {{7, Rational(1)}}},
          {3, 7, {{5, Rational(1)}}},
          {5, 7, {{6, Rational(1)}}},
      };
      cases.push_back(std::move(c));
    }

    {
      CaseSpec c;
      c.label = "III";
      c.constraint_text = {"A' = 0", "B' = 0", "C'' = 0"};
      c.constraints.add(Atom::metric_fn(0, 1), Expr(0));
      c.constraints.add(Atom::metric_fn(1, 1), Expr(0));
      c.constraints.add(Atom::metric_fn(2, 2), Expr(0));
      c.component_solution = make_generator(
          "solution", "a1*s + a2", "a1/2*t + a3", "a1/2*x + a4",
          "a1/2*y + a4*z + a5", "-a6");
      c.claimed = {
          make_generator("X1", "s", "t/2", "x/2", "y/2", "0"),
          make_generator("X2", "1", "0", "0", "0", "0"),
          make_generator("X3", "0", "1", "0", "0", "0"),
          make_generator("X4", "0", "0", "1", "z", "0"),
          make_generator("X5", "0", "0", "0", "1", "0"),
          make_generator("X6", "0", "0", "0", "0", "-1"),
      };
      c.brackets_claimed = false; // no commutator table is printed
      cases.push_back(std::move(c));
    }

    {
      CaseSpec c;
      c.label = "IV";
      c.constraint_text = {"A' = 0", "C' = 0"};
      c.inequality_text = {"B' != 0"};
      c.constraints.add(Atom::metric_fn(0, 1), Expr(0));
      c.constraints.add(Atom::metric_fn(2, 1), Expr(0));
      c.component_solution = make_generator(
          "solution", "a1", "0", "a2*z + a3", "a2*(z^2 - x^2)/2 + a3*z + a4",
          "-a3*x - a5");
      c.claimed = {
          make_generator("X1", "1", "0", "0", "0", "0"),
          make_generator("X2", "0", "0", "z", "-x^2/2 + z^2/2", "-x"),
          make_generator("X3", "0", "0", "1", "z", "0"),
          make_generator("X4", "0", "0", "0", "1", "0"),
          make_generator("X5", "0", "0", "0", "0", "-1"),
      };
      c.claimed_brackets = {
          {2, 5, {{3, Rational(1)}}},
          {3, 2, {{5, Rational(1)}}},
          {3, 5, {{4, Rational(1)}}},
      };
      cases.push_back(std::move(c));
    }

    {
      CaseSpec c;
      c.label = "V";
      c.constraint_text = {"B'' = 0", "C'' = 0"};
      c.inequality_text = {"A'' != 0"};
      c.constraints.add(Atom::metric_fn(1, 2), Expr(0));
      c.constraints.add(Atom::metric_fn(2, 2), Expr(0));
      c.component_solution = make_generator(
          "solution", "a1*s + a2", "a4/2*t + a3", "0", "a4", "-a5");
      c.claimed = {
          make_generator("X1", "s", "t/2", "0", "0", "0"),
          make_generator("X2", "1", "0", "0", "0", "0"),
          make_generator("X3", "0", "1", "0", "0", "0"),
          make_generator("X4", "0", "0", "0", "1", "0"),
          make_generator("X5", "0", "0", "0", "0", "-1"),
      };
      c.claimed_brackets = {
          {2, 1, {{2, Rational(1)}}},
          {3, 1, {{3, Rational(-1, 2)}}},
      };
      cases.push_back(std::move(c));
    }

    {
      CaseSpec c;
      c.label = "VI";
      c.constraint_text = {"A'' = 0", "B' = 0"};
      c.constraints.add(Atom::metric_fn(0, 2), Expr(0));
      c.constraints.add(Atom::metric_fn(1, 1), Expr(0));
      c.component_solution = make_generator(
          "solution", "a1*s + a2", "a1*(t/2 + 1)", "0", "a3*y + a4",
          "a3*z - a5");
      c.claimed = {
          make_generator("X1", "s", "t/2 + 1", "0", "0", "0"),
          make_generator("X2", "1", "0", "0", "0", "0"),
          make_generator("X3", "0", "0", "0", "y", "z"),
          make_generator("X4", "0", "0", "0", "1", "0"),
          make_generator("X5", "0", "0", "0", "0", "-1"),
      };
      c.claimed_brackets = {
          {2, 1, {{2, Rational(1)}}},
          {4, 3, {{4, Rational(1)}}},
          {5, 3, {{5, Rational(1)}}},
      };
      cases.push_back(std::move(c));
    }

    {
      CaseSpec c;
      c.label = "VII";
      c.constraint_text = {"A' = 0", "B' = 0"};
      c.inequality_text = {"C'' != 0"};
      c.constraints.add(Atom::metric_fn(0, 1), Expr(0));
      c.constraints.add(Atom::metric_fn(1, 1), Expr(0));
      c.component_solution = make_generator("solution", "a1", "0", "a2",
                                            "a2*z + a3", "-a4");
      c.claimed = {
          make_generator("X1", "1", "0", "0", "0", "0"),
          make_generator("X2", "0", "0", "1", "z", "0"),
          make_generator("X3", "0", "0", "0", "1", "0"),
          make_generator("X4", "0", "0", "0", "0", "-1"),
      };
      c.claimed_brackets = {
          {2, 4, {{3, Rational(1)}}},
      };
      cases.push_back(std::move(c));
    }

    {
      CaseSpec c;
      c.label = "VIII";
      c.constraint_text = {"B' = 0", "C'' = 0"};
      c.inequality_text = {"A'' != 0"};
      c.constraints.add(Atom::metric_fn(1, 1), Expr(0));
      c.constraints.add(Atom::metric_fn(2, 2), Expr(0));
      c.component_solution =
          make_generator("solution", "a1", "a2", "0", "a3", "-a4");
      c.claimed = {
          make_generator("X1", "1", "0", "0", "0", "0"),
          make_generator("X2", "0", "1", "0", "0", "0"),
          make_generator("X3", "0", "0", "0", "1", "0"),
          make_generator("X4", "0", "0", "0", "0", "-1"),
      };
      cases.push_back(std::move(c));
    }

    {
      CaseSpec c;
      c.label = "IX";
      c.constraint_text = {"C'' = 0"};
      c.inequality_text = {"A'' != 0"};
      c.constraints.add(Atom::metric_fn(2, 2), Expr(0));
      c.component_solution =
          make_generator("solution", "a1", "0", "0", "a2", "-a3");
      c.claimed = {
          make_generator("X1", "1", "0", "0", "0", "0"),
          make_generator("X2", "0", "0", "0", "1", "0"),
          make_generator("X3", "0", "0", "0", "0", "1"),
      };
      cases.push_back(std::move(c));
    }

    return cases;
  }();
  return catalog;
}

/// Catalog lookup by printed label.
inline const CaseSpec &case_by_label(const std::string &label) {
  for (const CaseSpec &c : case_catalog())
    if (c.label == label)
      return c;
  throw std::invalid_argument("unknown case label '" + label + "'");
}

} // namespace bianchi
