#pragma once

#include "bianchi/atom.hpp"
#include "bianchi/rational.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bianchi {

/// Immutable expression tree over atoms and rationals. Trees are cheap to
/// copy (shared nodes) and carry no normal form; see normalize() for the
/// canonical Laurent-polynomial view.
class Expr {
public:
  enum class Kind : uint8_t { Number, Symbol, Sum, Product, Power };

  Expr() : Expr(Rational(0)) {}
  Expr(int n) : Expr(Rational(n)) {}
  Expr(const Rational &v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->value = v;
    node_ = std::move(n);
  }
  Expr(Atom a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Symbol;
    n->atom = a;
    node_ = std::move(n);
  }

  static Expr sum(std::vector<Expr> ops) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    for (Expr &e : ops) {
      if (e.kind() == Kind::Sum) {
        for (const Expr &k : e.operands())
          n->kids.push_back(k);
      } else {
        n->kids.push_back(std::move(e));
      }
    }
    if (n->kids.empty())
      return Expr(0);
    if (n->kids.size() == 1)
      return n->kids[0];
    Expr r;
    r.node_ = std::move(n);
    return r;
  }

  static Expr product(std::vector<Expr> ops) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    for (Expr &e : ops) {
      if (e.kind() == Kind::Product) {
        for (const Expr &k : e.operands())
          n->kids.push_back(k);
      } else {
        n->kids.push_back(std::move(e));
      }
    }
    if (n->kids.empty())
      return Expr(1);
    if (n->kids.size() == 1)
      return n->kids[0];
    Expr r;
    r.node_ = std::move(n);
    return r;
  }

  static Expr pow(Expr base, int exponent) {
    if (exponent == 1)
      return base;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Power;
    n->kids.push_back(std::move(base));
    n->exponent = exponent;
    Expr r;
    r.node_ = std::move(n);
    return r;
  }

  Kind kind() const { return node_->kind; }
  const Rational &value() const { return node_->value; }
  Atom atom() const { return node_->atom; }
  const std::vector<Expr> &operands() const { return node_->kids; }
  const Expr &base() const { return node_->kids[0]; }
  int exponent() const { return node_->exponent; }

  bool is_number(int v) const {
    return kind() == Kind::Number && value() == v;
  }

  /// Structural rendering that round-trips through the parser.
  std::string str() const {
    switch (kind()) {
    case Kind::Number:
      return to_string(value());
    case Kind::Symbol:
      return atom().name();
    case Kind::Sum: {
      std::string out;
      for (size_t i = 0; i < operands().size(); ++i) {
        std::string piece = operands()[i].str();
        if (i == 0) {
          out = piece;
        } else if (!piece.empty() && piece[0] == '-') {
          out += " - " + piece.substr(1);
        } else {
          out += " + " + piece;
        }
      }
      return out;
    }
    case Kind::Product: {
      std::string out;
      for (size_t i = 0; i < operands().size(); ++i) {
        const Expr &k = operands()[i];
        std::string piece = k.str();
        const bool parens =
            k.kind() == Kind::Sum ||
            (i > 0 && !piece.empty() && piece[0] == '-');
        if (i > 0)
          out += "*";
        out += parens ? "(" + piece + ")" : piece;
      }
      return out;
    }
    case Kind::Power: {
      std::string b = base().str();
      const bool parens = base().kind() == Kind::Sum ||
                          base().kind() == Kind::Product ||
                          base().kind() == Kind::Power ||
                          (!b.empty() && b[0] == '-') ||
                          base().kind() == Kind::Number;
      return (parens ? "(" + b + ")" : b) + "^" + std::to_string(exponent());
    }
    }
    return "?";
  }

private:
  struct Node {
    Kind kind = Kind::Number;
    Rational value;
    Atom atom = Atom::coordinate(kS);
    std::vector<Expr> kids;
    int exponent = 1;
  };
  std::shared_ptr<const Node> node_;
};

inline Expr operator+(Expr a, Expr b) {
  return Expr::sum({std::move(a), std::move(b)});
}
inline Expr operator*(Expr a, Expr b) {
  return Expr::product({std::move(a), std::move(b)});
}
inline Expr operator-(Expr a) { return Expr(-1) * std::move(a); }
inline Expr operator-(Expr a, Expr b) {
  return std::move(a) + (-std::move(b));
}

inline void collect_atoms(const Expr &e, std::set<Atom> &out) {
  switch (e.kind()) {
  case Expr::Kind::Number:
    return;
  case Expr::Kind::Symbol:
    out.insert(e.atom());
    return;
  case Expr::Kind::Power:
    collect_atoms(e.base(), out);
    return;
  default:
    for (const Expr &k : e.operands())
      collect_atoms(k, out);
  }
}

inline bool contains_kind(const Expr &e, Atom::Kind k) {
  std::set<Atom> atoms;
  collect_atoms(e, atoms);
  for (Atom a : atoms)
    if (a.kind() == k)
      return true;
  return false;
}

/// Partial derivative treating every atom other than `sym` as independent,
/// except for the chain rule on function atoms: d/dt maps A^(k) to A^(k+1)
/// and d/dc maps an unknown-function symbol to its partial with respect to c.
inline Expr partial_diff(const Expr &e, Atom sym) {
  switch (e.kind()) {
  case Expr::Kind::Number:
    return Expr(0);
  case Expr::Kind::Symbol: {
    const Atom a = e.atom();
    if (a == sym)
      return Expr(1);
    if (sym.is_coordinate()) {
      if (auto d = a.chain_derivative(sym.index()))
        return Expr(*d);
    }
    return Expr(0);
  }
  case Expr::Kind::Sum: {
    std::vector<Expr> parts;
    parts.reserve(e.operands().size());
    for (const Expr &k : e.operands())
      parts.push_back(partial_diff(k, sym));
    return Expr::sum(std::move(parts));
  }
  case Expr::Kind::Product: {
    std::vector<Expr> parts;
    for (size_t i = 0; i < e.operands().size(); ++i) {
      std::vector<Expr> factors;
      factors.reserve(e.operands().size());
      for (size_t j = 0; j < e.operands().size(); ++j)
        factors.push_back(i == j ? partial_diff(e.operands()[j], sym)
                                 : e.operands()[j]);
      parts.push_back(Expr::product(std::move(factors)));
    }
    return Expr::sum(std::move(parts));
  }
  case Expr::Kind::Power: {
    const int n = e.exponent();
    if (n == 0)
      return Expr(0);
    return Expr(n) * Expr::pow(e.base(), n - 1) * partial_diff(e.base(), sym);
  }
  }
  return Expr(0);
}

/// Total derivative with respect to the curve parameter:
///   D_s = d/ds + td*d/dt + xd*d/dx + yd*d/dy + zd*d/dz
///              + tdd*d/d(td) + ... + zdd*d/d(zd).
/// Rejects input containing acceleration atoms, since their derivatives have
/// no symbol in the language.
inline Expr total_derivative(const Expr &e) {
  if (contains_kind(e, Atom::Kind::Acceleration))
    throw std::invalid_argument(
        "total_derivative: expression already contains acceleration atoms");
  std::vector<Expr> parts;
  parts.push_back(partial_diff(e, Atom::coordinate(kS)));
  for (int c = kT; c <= kZ; ++c) {
    parts.push_back(Expr(Atom::velocity(c)) *
                    partial_diff(e, Atom::coordinate(c)));
    parts.push_back(Expr(Atom::acceleration(c)) *
                    partial_diff(e, Atom::velocity(c)));
  }
  return Expr::sum(std::move(parts));
}

/// Simultaneous substitution of atoms by expressions. Bindings must be
/// acyclic (no replacement may mention a bound atom along a cycle).
inline Expr substitute(const Expr &e, const std::map<Atom, Expr> &bindings) {
  // Cycle check over the binding graph.
  {
    std::map<Atom, int> state; // 0 unvisited, 1 in progress, 2 done
    auto dfs = [&](auto &&self, Atom a) -> void {
      state[a] = 1;
      auto it = bindings.find(a);
      if (it != bindings.end()) {
        std::set<Atom> mentioned;
        collect_atoms(it->second, mentioned);
        for (Atom m : mentioned) {
          if (!bindings.count(m))
            continue;
          const int st = state.count(m) ? state[m] : 0;
          if (st == 1)
            throw std::invalid_argument("substitute: cyclic bindings");
          if (st == 0)
            self(self, m);
        }
      }
      state[a] = 2;
    };
    for (const auto &[a, r] : bindings)
      if ((state.count(a) ? state[a] : 0) == 0)
        dfs(dfs, a);
  }

  auto walk = [&](auto &&self, const Expr &n) -> Expr {
    switch (n.kind()) {
    case Expr::Kind::Number:
      return n;
    case Expr::Kind::Symbol: {
      auto it = bindings.find(n.atom());
      return it != bindings.end() ? it->second : n;
    }
    case Expr::Kind::Sum: {
      std::vector<Expr> kids;
      kids.reserve(n.operands().size());
      for (const Expr &k : n.operands())
        kids.push_back(self(self, k));
      return Expr::sum(std::move(kids));
    }
    case Expr::Kind::Product: {
      std::vector<Expr> kids;
      kids.reserve(n.operands().size());
      for (const Expr &k : n.operands())
        kids.push_back(self(self, k));
      return Expr::product(std::move(kids));
    }
    case Expr::Kind::Power:
      return Expr::pow(self(self, n.base()), n.exponent());
    }
    return n;
  };
  return walk(walk, e);
}

} // namespace bianchi
