#pragma once

#include "bianchi/parse.hpp"
#include "bianchi/rewrite.hpp"

#include <random>
#include <string>
#include <vector>

namespace bianchi::testutil {

inline Expr P(const std::string &s) { return parse_expr(s); }

inline CanonicalExpr N(const std::string &s,
                       const RewriteRules &rules = RewriteRules()) {
  return normalize(parse_expr(s), rules);
}

inline std::string NS(const std::string &s,
                      const RewriteRules &rules = RewriteRules()) {
  return N(s, rules).str();
}

/// Small random expression trees over a fixed symbol pool, for property
/// tests. Deterministic for a given seed.
class RandomExprGen {
public:
  explicit RandomExprGen(uint64_t seed) : rng_(seed) {
    pool_ = {
        Atom::coordinate(kS), Atom::coordinate(kT), Atom::coordinate(kX),
        Atom::coordinate(kY), Atom::coordinate(kZ), Atom::velocity(kT),
        Atom::velocity(kX),   Atom::velocity(kY),   Atom::velocity(kZ),
        Atom::metric_fn(0),   Atom::metric_fn(0, 1), Atom::metric_fn(1),
        Atom::metric_fn(2),   Atom::parameter(0),    Atom::parameter(9),
    };
  }

  Expr gen(int depth = 3) {
    const int pick = depth <= 0 ? std::uniform_int_distribution<int>(0, 1)(rng_)
                                : std::uniform_int_distribution<int>(0, 4)(rng_);
    switch (pick) {
    case 0:
      return Expr(Rational(std::uniform_int_distribution<int>(-4, 4)(rng_)));
    case 1:
      return Expr(pool_[std::uniform_int_distribution<size_t>(
          0, pool_.size() - 1)(rng_)]);
    case 2:
      return gen(depth - 1) + gen(depth - 1);
    case 3:
      return gen(depth - 1) * gen(depth - 1);
    default:
      return Expr::pow(gen(depth - 1),
                       std::uniform_int_distribution<int>(0, 3)(rng_));
    }
  }

  /// Polynomial in the coordinates only (a valid symmetry-generator
  /// coefficient), with the given degree bound.
  Expr gen_coordinate_poly(int max_terms = 4, int max_degree = 2) {
    static const Atom coords[] = {Atom::coordinate(kS), Atom::coordinate(kT),
                                  Atom::coordinate(kX), Atom::coordinate(kY),
                                  Atom::coordinate(kZ)};
    std::vector<Expr> terms;
    const int nterms = std::uniform_int_distribution<int>(1, max_terms)(rng_);
    for (int i = 0; i < nterms; ++i) {
      std::vector<Expr> factors;
      int num = std::uniform_int_distribution<int>(-3, 3)(rng_);
      int den = std::uniform_int_distribution<int>(1, 2)(rng_);
      factors.push_back(Expr(Rational(num, den)));
      const int deg = std::uniform_int_distribution<int>(0, max_degree)(rng_);
      for (int d = 0; d < deg; ++d)
        factors.push_back(
            Expr(coords[std::uniform_int_distribution<int>(0, 4)(rng_)]));
      terms.push_back(Expr::product(std::move(factors)));
    }
    return Expr::sum(std::move(terms));
  }

  std::mt19937_64 &rng() { return rng_; }

private:
  std::mt19937_64 rng_;
  std::vector<Atom> pool_;
};

} // namespace bianchi::testutil
