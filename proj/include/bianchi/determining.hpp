#pragma once

#include "bianchi/generator.hpp"
#include "bianchi/split.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace bianchi {

/// One split equation: the velocity monomial it came from and its
/// coefficient, content- and sign-normalized. `independent` is false when
/// the equation is a coefficient-field combination of equations listed
/// before it (the listing is ordered by SplitKeyOrder, so pure powers are
/// considered first within a degree).
struct DeterminingEquation {
  Monomial key;
  CanonicalExpr equation;
  bool independent = true;
};

struct DeterminingSystem {
  std::vector<DeterminingEquation> equations; // SplitKeyOrder

  std::vector<DeterminingEquation> independent() const {
    std::vector<DeterminingEquation> out;
    for (const DeterminingEquation &e : equations)
      if (e.independent)
        out.push_back(e);
    return out;
  }
};

/// The Noether residual with all six scalar functions left opaque
/// (mu, tau, xi, eta, phi, f as unknown-function atoms).
inline Expr residual_template(const MetricSpec &spec) {
  Generator tmpl;
  tmpl.name = "template";
  tmpl.mu = Expr(Atom::unknown_fn(0));
  tmpl.tau = Expr(Atom::unknown_fn(1));
  tmpl.xi = Expr(Atom::unknown_fn(2));
  tmpl.eta = Expr(Atom::unknown_fn(3));
  tmpl.phi = Expr(Atom::unknown_fn(4));
  tmpl.gauge = Expr(Atom::unknown_fn(5));
  return noether_residual(tmpl, spec);
}

/// Second, prolongation-free route to the residual of a concrete
/// generator: substitute its components (and their derivatives) for the
/// opaque atoms of the template.
inline Expr residual_via_template(const Generator &g, const MetricSpec &spec) {
  require_point_generator(g);
  const Expr tmpl = residual_template(spec);
  std::set<Atom> atoms;
  collect_atoms(tmpl, atoms);
  std::map<Atom, Expr> sub;
  for (Atom a : atoms) {
    if (!a.is_unknown_fn())
      continue;
    Expr comp = g.component(a.index());
    const std::array<uint8_t, 5> parts = a.partials();
    for (int c = 0; c < kNumCoords; ++c)
      for (int k = 0; k < parts[static_cast<size_t>(c)]; ++k)
        comp = partial_diff(comp, Atom::coordinate(c));
    sub.emplace(a, comp);
  }
  return to_expr(normalize(substitute(tmpl, sub), spec.rules));
}

namespace detail {

/// Rational function of the non-unknown atoms, kept as an unreduced
/// numerator/denominator pair; only ring operations and exact zero tests
/// are needed, so no gcd is required.
struct PolyFraction {
  CanonicalExpr num;
  CanonicalExpr den = CanonicalExpr::constant(1);

  bool is_zero() const { return num.is_zero(); }
};

inline PolyFraction operator*(const PolyFraction &a, const PolyFraction &b) {
  return {a.num * b.num, a.den * b.den};
}
inline PolyFraction operator-(const PolyFraction &a, const PolyFraction &b) {
  return {a.num * b.den - b.num * a.den, a.den * b.den};
}
inline PolyFraction divide(const PolyFraction &a, const PolyFraction &b) {
  if (b.is_zero())
    throw std::domain_error("PolyFraction: division by zero");
  return {a.num * b.den, a.den * b.num};
}

/// A split equation as a sparse vector over the unknown-function atoms it
/// is linear in.
using UnknownVector = std::map<Atom, PolyFraction>;

inline UnknownVector linear_unknown_decomposition(const CanonicalExpr &e) {
  UnknownVector out;
  for (const Term &t : e.terms()) {
    std::optional<Atom> unknown;
    Monomial rest;
    int unknown_degree = 0;
    for (const auto &[a, exp] : t.mono.factors) {
      if (a.is_unknown_fn()) {
        unknown = a;
        unknown_degree += exp;
      } else {
        rest.factors.emplace_back(a, exp);
      }
    }
    if (!unknown || unknown_degree != 1)
      throw std::logic_error(
          "determining equation is not linear in the unknown functions");
    PolyFraction &slot = out[*unknown]; // accumulates with den = 1
    slot.num = slot.num + CanonicalExpr::from_term(t.coeff, rest);
  }
  return out;
}

/// Incremental row reduction over the fraction field of the coefficient
/// ring. insert() returns false when the vector already lies in the span.
class UnknownSpan {
public:
  bool insert(UnknownVector row) {
    for (const auto &pivot_row : rows_) {
      const auto hit = row.find(pivot_row.first);
      if (hit == row.end() || hit->second.is_zero())
        continue;
      const PolyFraction factor =
          divide(hit->second, pivot_row.second.at(pivot_row.first));
      for (const auto &[a, c] : pivot_row.second) {
        PolyFraction &slot = row[a];
        slot = slot - factor * c;
      }
    }
    std::optional<Atom> pivot;
    for (const auto &[a, c] : row)
      if (!c.is_zero()) {
        pivot = a;
        break;
      }
    if (!pivot)
      return false;
    rows_.emplace_back(*pivot, std::move(row));
    return true;
  }

private:
  std::vector<std::pair<Atom, UnknownVector>> rows_;
};

} // namespace detail

/// Splits the residual template by velocity monomials. Every nonzero key
/// is kept; the `independent` flag prunes the listing down to a spanning
/// set, which for the generic metric is the classical system of 19.
inline DeterminingSystem derive_determining_system(const MetricSpec &spec) {
  const CanonicalExpr res = normalize(residual_template(spec), spec.rules);
  DeterminingSystem sys;
  detail::UnknownSpan span;
  for (const auto &[key, coeff] : velocity_split(res)) {
    DeterminingEquation eq;
    eq.key = key;
    eq.equation = coeff.content_normalized();
    eq.independent =
        span.insert(detail::linear_unknown_decomposition(eq.equation));
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

} // namespace bianchi
