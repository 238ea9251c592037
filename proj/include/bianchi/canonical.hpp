#pragma once

#include "bianchi/atom.hpp"
#include "bianchi/rational.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bianchi {

/// Product of atom powers; factors sorted by atom, exponents nonzero.
/// Negative exponents are only ever created for metric-function atoms, which
/// are nonvanishing by assumption.
struct Monomial {
  std::vector<std::pair<Atom, int>> factors;

  bool is_unit() const { return factors.empty(); }

  int degree() const {
    int d = 0;
    for (const auto &[a, e] : factors)
      d += e;
    return d;
  }

  int exponent_of(Atom a) const {
    for (const auto &[b, e] : factors)
      if (b == a)
        return e;
    return 0;
  }

  friend bool operator==(const Monomial &a, const Monomial &b) {
    return a.factors == b.factors;
  }
};

inline Monomial operator*(const Monomial &a, const Monomial &b) {
  Monomial r;
  r.factors.reserve(a.factors.size() + b.factors.size());
  size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() ||
        (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
      r.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size() ||
               b.factors[j].first < a.factors[i].first) {
      r.factors.push_back(b.factors[j++]);
    } else {
      const int e = a.factors[i].second + b.factors[j].second;
      if (e != 0)
        r.factors.emplace_back(a.factors[i].first, e);
      ++i, ++j;
    }
  }
  return r;
}

/// Graded order: total degree decides first; on ties the monomial with the
/// larger exponent at the earliest differing atom is the larger one.
inline bool grlex_less(const Monomial &a, const Monomial &b) {
  const int da = a.degree(), db = b.degree();
  if (da != db)
    return da < db;
  size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    int ea = 0, eb = 0;
    if (j == b.factors.size() ||
        (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
      ea = a.factors[i++].second;
    } else if (i == a.factors.size() ||
               b.factors[j].first < a.factors[i].first) {
      eb = b.factors[j++].second;
    } else {
      ea = a.factors[i++].second;
      eb = b.factors[j++].second;
    }
    if (ea != eb)
      return ea < eb;
  }
  return false;
}

struct Term {
  Rational coeff;
  Monomial mono;
};

/// Laurent-polynomial normal form: term list sorted grlex-descending, no zero
/// coefficients, equal monomials merged. Equality of canonical forms is
/// structural equality.
class CanonicalExpr {
public:
  CanonicalExpr() = default;

  static CanonicalExpr constant(const Rational &c) {
    CanonicalExpr r;
    if (c != 0)
      r.terms_.push_back({c, {}});
    return r;
  }

  static CanonicalExpr from_atom(Atom a) {
    CanonicalExpr r;
    r.terms_.push_back({Rational(1), Monomial{{{a, 1}}}});
    return r;
  }

  static CanonicalExpr from_term(const Rational &c, Monomial m) {
    CanonicalExpr r;
    if (c != 0)
      r.terms_.push_back({c, std::move(m)});
    return r;
  }

  /// Builds directly from an unsorted term list.
  static CanonicalExpr collect(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term &a, const Term &b) {
      return grlex_less(b.mono, a.mono); // descending
    });
    CanonicalExpr r;
    for (auto &t : terms) {
      if (t.coeff == 0)
        continue;
      if (!r.terms_.empty() && r.terms_.back().mono == t.mono) {
        r.terms_.back().coeff += t.coeff;
        if (r.terms_.back().coeff == 0)
          r.terms_.pop_back();
      } else {
        r.terms_.push_back(std::move(t));
      }
    }
    return r;
  }

  const std::vector<Term> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_unit());
  }
  /// Constant value; only meaningful when is_constant().
  Rational constant_value() const {
    return terms_.empty() ? Rational(0) : terms_[0].coeff;
  }

  friend bool operator==(const CanonicalExpr &a, const CanonicalExpr &b) {
    if (a.terms_.size() != b.terms_.size())
      return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].coeff != b.terms_[i].coeff ||
          !(a.terms_[i].mono == b.terms_[i].mono))
        return false;
    return true;
  }

  friend CanonicalExpr operator+(const CanonicalExpr &a,
                                 const CanonicalExpr &b) {
    std::vector<Term> ts = a.terms_;
    ts.insert(ts.end(), b.terms_.begin(), b.terms_.end());
    return collect(std::move(ts));
  }

  friend CanonicalExpr operator-(const CanonicalExpr &a) {
    CanonicalExpr r = a;
    for (auto &t : r.terms_)
      t.coeff = -t.coeff;
    return r;
  }

  friend CanonicalExpr operator-(const CanonicalExpr &a,
                                 const CanonicalExpr &b) {
    return a + (-b);
  }

  friend CanonicalExpr operator*(const CanonicalExpr &a,
                                 const CanonicalExpr &b) {
    std::vector<Term> ts;
    ts.reserve(a.terms_.size() * b.terms_.size());
    for (const auto &ta : a.terms_)
      for (const auto &tb : b.terms_)
        ts.push_back({ta.coeff * tb.coeff, ta.mono * tb.mono});
    return collect(std::move(ts));
  }

  CanonicalExpr scaled(const Rational &c) const {
    if (c == 0)
      return {};
    CanonicalExpr r = *this;
    for (auto &t : r.terms_)
      t.coeff *= c;
    return r;
  }

  /// Integer power. Negative exponents require a single term whose atoms are
  /// all metric functions (the only symbols assumed nonvanishing).
  CanonicalExpr pow(int n) const {
    if (n == 0)
      return constant(1);
    if (n < 0) {
      if (is_zero())
        throw std::domain_error("CanonicalExpr: division by zero");
      if (terms_.size() != 1)
        throw std::domain_error(
            "CanonicalExpr: cannot invert a sum; negative powers are only "
            "supported for products of metric-function atoms");
      Term inv;
      inv.coeff = Rational(1) / terms_[0].coeff;
      for (const auto &[a, e] : terms_[0].mono.factors) {
        if (!a.is_metric_fn())
          throw std::domain_error("CanonicalExpr: negative power of symbol '" +
                                  a.name() + "' is not supported");
        inv.mono.factors.emplace_back(a, -e);
      }
      CanonicalExpr base;
      base.terms_.push_back(std::move(inv));
      return base.pow(-n);
    }
    CanonicalExpr result = constant(1);
    CanonicalExpr base = *this;
    int k = n;
    while (k > 0) {
      if (k & 1)
        result = result * base;
      base = base * base;
      k >>= 1;
    }
    return result;
  }

  /// Scales so that all coefficients are coprime integers and the leading
  /// (grlex-largest) coefficient is positive. Used to compare equations up to
  /// a nonzero rational multiple.
  CanonicalExpr content_normalized() const {
    if (terms_.empty())
      return {};
    Integer den_lcm = 1, num_gcd = 0;
    for (const auto &t : terms_)
      den_lcm = lcm(den_lcm, denominator(t.coeff));
    for (const auto &t : terms_)
      num_gcd = gcd(num_gcd, numerator(t.coeff) *
                                 (den_lcm / denominator(t.coeff)));
    Rational scale(den_lcm, num_gcd);
    if (terms_[0].coeff < 0)
      scale = -scale;
    return scaled(scale);
  }

  void collect_atoms(std::set<Atom> &out) const {
    for (const auto &t : terms_)
      for (const auto &[a, e] : t.mono.factors)
        out.insert(a);
  }

  /// Largest total degree over velocity atoms appearing in any term.
  int velocity_degree() const {
    int d = 0;
    for (const auto &t : terms_) {
      int td = 0;
      for (const auto &[a, e] : t.mono.factors)
        if (a.is_velocity())
          td += e;
      d = std::max(d, td);
    }
    return d;
  }

  std::string str() const {
    if (terms_.empty())
      return "0";
    std::string out;
    for (size_t i = 0; i < terms_.size(); ++i) {
      const Term &t = terms_[i];
      Rational c = t.coeff;
      if (i == 0) {
        if (c < 0) {
          out += "-";
          c = -c;
        }
      } else {
        out += c < 0 ? " - " : " + ";
        if (c < 0)
          c = -c;
      }
      std::string factors;
      for (const auto &[a, e] : t.mono.factors) {
        if (!factors.empty())
          factors += "*";
        factors += a.name();
        if (e != 1)
          factors += "^" + std::to_string(e);
      }
      if (factors.empty()) {
        out += to_string(c);
      } else {
        if (c != 1)
          out += to_string(c) + "*";
        out += factors;
      }
    }
    return out;
  }

private:
  std::vector<Term> terms_;
};

/// Monomial rendered in the same syntax the expression parser accepts.
inline std::string monomial_str(const Monomial &m) {
  if (m.is_unit())
    return "1";
  std::string out;
  for (const auto &[a, e] : m.factors) {
    if (!out.empty())
      out += "*";
    out += a.name();
    if (e != 1)
      out += "^" + std::to_string(e);
  }
  return out;
}

} // namespace bianchi
