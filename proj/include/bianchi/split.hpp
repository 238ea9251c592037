#pragma once

#include "bianchi/canonical.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace bianchi {

/// Orders velocity monomials the way determining systems are listed: higher
/// total degree first, pure powers before mixed products of the same degree,
/// then grlex-descending.
struct SplitKeyOrder {
  bool operator()(const Monomial &a, const Monomial &b) const {
    const int da = a.degree(), db = b.degree();
    if (da != db)
      return da > db;
    const size_t na = a.factors.size(), nb = b.factors.size();
    if (na != nb)
      return na < nb;
    return grlex_less(b, a);
  }
};

using VelocitySplit = std::map<Monomial, CanonicalExpr, SplitKeyOrder>;

/// Groups the terms of a polynomial by their velocity content. Keys are the
/// velocity monomials (the unit monomial collects the velocity-free part);
/// values are the cofactor polynomials. Velocity degree above 3 indicates a
/// broken residual and is rejected.
inline VelocitySplit velocity_split(const CanonicalExpr &e) {
  VelocitySplit out;
  for (const Term &t : e.terms()) {
    Monomial vel, rest;
    for (const auto &[a, exp] : t.mono.factors) {
      if (a.is_velocity())
        vel.factors.emplace_back(a, exp);
      else
        rest.factors.emplace_back(a, exp);
    }
    if (vel.degree() > 3)
      throw std::invalid_argument(
          "velocity_split: velocity degree exceeds 3 in term with key " +
          monomial_str(vel));
    out[vel] = out[vel] + CanonicalExpr::from_term(t.coeff, rest);
  }
  // Drop keys whose cofactor cancelled to zero.
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

} // namespace bianchi
