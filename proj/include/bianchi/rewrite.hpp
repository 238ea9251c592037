#pragma once

#include "bianchi/canonical.hpp"
#include "bianchi/expr.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bianchi {

namespace detail {

/// Expansion of a bare tree into the canonical Laurent form, with no rules.
inline CanonicalExpr expand_tree(const Expr &e) {
  switch (e.kind()) {
  case Expr::Kind::Number:
    return CanonicalExpr::constant(e.value());
  case Expr::Kind::Symbol:
    return CanonicalExpr::from_atom(e.atom());
  case Expr::Kind::Sum: {
    CanonicalExpr acc;
    for (const Expr &k : e.operands())
      acc = acc + expand_tree(k);
    return acc;
  }
  case Expr::Kind::Product: {
    CanonicalExpr acc = CanonicalExpr::constant(1);
    for (const Expr &k : e.operands())
      acc = acc * expand_tree(k);
    return acc;
  }
  case Expr::Kind::Power:
    return expand_tree(e.base()).pow(e.exponent());
  }
  return {};
}

} // namespace detail

/// Atom-to-expression rewrite rules, applied to a fixed point during
/// normalization. The rule graph must be acyclic. A rule on a metric
/// function atom is a statement about a function of t, so it implies rules
/// for all its derivatives (A' -> 0 forces A'' -> 0, C -> A forces
/// C' -> A'); that closure is generated eagerly when the set is built.
class RewriteRules {
public:
  RewriteRules() = default;

  RewriteRules(std::initializer_list<std::pair<Atom, Expr>> rules) {
    for (const auto &[a, e] : rules)
      add(a, e);
  }

  void add(Atom a, const Expr &replacement) {
    if (a.is_velocity() || a.is_acceleration())
      throw std::invalid_argument(
          "RewriteRules: velocity and acceleration atoms cannot be rewritten");
    if (rules_.count(a))
      throw std::invalid_argument("RewriteRules: duplicate rule for " +
                                  a.name());
    rules_.emplace(a, replacement);
    if (a.is_metric_fn()) {
      Expr rhs = replacement;
      for (int j = 1; j <= kDerivativeClosureOrders; ++j) {
        rhs = partial_diff(rhs, Atom::coordinate(kT));
        rules_.emplace(Atom::metric_fn(a.index(), a.order() + j), rhs);
      }
    }
    check_acyclic();
  }

  bool empty() const { return rules_.empty(); }
  const std::map<Atom, Expr> &rules() const { return rules_; }

  const Expr *find(Atom a) const {
    auto it = rules_.find(a);
    return it == rules_.end() ? nullptr : &it->second;
  }

private:
  // Enough headroom over the derivative orders that can appear in residuals,
  // integrals and geodesic right-hand sides.
  static constexpr int kDerivativeClosureOrders = 8;

  void check_acyclic() const {
    std::map<Atom, int> state;
    auto dfs = [&](auto &&self, Atom a) -> void {
      state[a] = 1;
      auto it = rules_.find(a);
      if (it != rules_.end()) {
        std::set<Atom> mentioned;
        collect_atoms(it->second, mentioned);
        for (Atom m : mentioned) {
          if (!rules_.count(m))
            continue;
          const int st = state.count(m) ? state[m] : 0;
          if (st == 1)
            throw std::invalid_argument("RewriteRules: cyclic rules through " +
                                        m.name());
          if (st == 0)
            self(self, m);
        }
      }
      state[a] = 2;
    };
    for (const auto &[a, e] : rules_)
      if ((state.count(a) ? state[a] : 0) == 0)
        dfs(dfs, a);
  }

  std::map<Atom, Expr> rules_;
};

/// Canonical form of a tree under a rule set: expand, then rewrite ruled
/// atoms until none remain. Terminates because the rule graph is acyclic.
inline CanonicalExpr normalize(const Expr &e,
                               const RewriteRules &rules = RewriteRules()) {
  CanonicalExpr cur = detail::expand_tree(e);
  if (rules.empty())
    return cur;
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    std::vector<Term> out;
    CanonicalExpr rewritten;
    for (const Term &t : cur.terms()) {
      Monomial plain;
      std::vector<std::pair<const Expr *, int>> ruled;
      for (const auto &[a, exp] : t.mono.factors) {
        if (const Expr *rep = rules.find(a))
          ruled.emplace_back(rep, exp);
        else
          plain.factors.emplace_back(a, exp);
      }
      if (ruled.empty()) {
        out.push_back(t);
        continue;
      }
      changed = true;
      CanonicalExpr piece = CanonicalExpr::from_term(t.coeff, plain);
      for (const auto &[rep, exp] : ruled)
        piece = piece * detail::expand_tree(*rep).pow(exp);
      rewritten = rewritten + piece;
    }
    if (!changed)
      return cur;
    cur = CanonicalExpr::collect(std::move(out)) + rewritten;
  }
  throw std::logic_error("normalize: rewriting did not reach a fixed point");
}

inline CanonicalExpr normalize(const CanonicalExpr &c,
                               const RewriteRules &rules) {
  if (rules.empty())
    return c;
  std::vector<Expr> parts;
  for (const Term &t : c.terms()) {
    std::vector<Expr> factors;
    factors.emplace_back(t.coeff);
    for (const auto &[a, exp] : t.mono.factors)
      factors.push_back(Expr::pow(Expr(a), exp));
    parts.push_back(Expr::product(std::move(factors)));
  }
  return normalize(Expr::sum(std::move(parts)), rules);
}

inline bool is_zero(const Expr &e,
                    const RewriteRules &rules = RewriteRules()) {
  return normalize(e, rules).is_zero();
}

/// Tree rebuilt from a canonical form (for re-entering tree-level
/// operations such as substitution).
inline Expr to_expr(const CanonicalExpr &c) {
  std::vector<Expr> parts;
  for (const Term &t : c.terms()) {
    std::vector<Expr> factors;
    if (t.coeff != 1 || t.mono.is_unit())
      factors.emplace_back(t.coeff);
    for (const auto &[a, exp] : t.mono.factors)
      factors.push_back(exp == 1 ? Expr(a) : Expr::pow(Expr(a), exp));
    parts.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(parts));
}

} // namespace bianchi
