#pragma once

#include "bianchi/generator.hpp"
#include "bianchi/linalg.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace bianchi {

/// Point vector field over (s, t, x, y, z) with the gauge function carried
/// along: the bracket of two gauged symmetries is gauged by X(f_Y) - Y(f_X).
struct VectorField {
  std::string name;
  std::array<Expr, kNumCoords> comp{}; // d/ds, d/dt, d/dx, d/dy, d/dz
  Expr gauge;
};

inline VectorField from_generator(const Generator &g) {
  require_point_generator(g);
  VectorField f;
  f.name = g.name;
  f.comp = {g.mu, g.tau, g.xi, g.eta, g.phi};
  f.gauge = g.gauge;
  return f;
}

inline Generator to_generator(const VectorField &f) {
  Generator g;
  g.name = f.name;
  g.mu = f.comp[kS];
  g.tau = f.comp[kT];
  g.xi = f.comp[kX];
  g.eta = f.comp[kY];
  g.phi = f.comp[kZ];
  g.gauge = f.gauge;
  return g;
}

/// Directional derivative of a scalar along the field.
inline Expr apply(const VectorField &f, const Expr &h) {
  std::vector<Expr> parts;
  for (int c = 0; c < kNumCoords; ++c)
    parts.push_back(f.comp[c] * partial_diff(h, Atom::coordinate(c)));
  return Expr::sum(std::move(parts));
}

inline VectorField commutator(const VectorField &x, const VectorField &y) {
  VectorField b;
  b.name = "[" + x.name + "," + y.name + "]";
  for (int c = 0; c < kNumCoords; ++c)
    b.comp[c] = apply(x, y.comp[c]) - apply(y, x.comp[c]);
  b.gauge = apply(x, y.gauge) - apply(y, x.gauge);
  return b;
}

inline bool is_zero_field(const VectorField &f) {
  for (int c = 0; c < kNumCoords; ++c)
    if (!is_zero(f.comp[c]))
      return false;
  return true;
}

/// Coordinates for exact span arithmetic: one slot per (component,
/// coefficient monomial) pair. Gauge does not participate; it is determined
/// by the field up to a constant.
using VfKey = std::pair<int, Monomial>;

struct VfKeyLess {
  bool operator()(const VfKey &a, const VfKey &b) const {
    if (a.first != b.first)
      return a.first < b.first;
    if (a.second == b.second)
      return false;
    return grlex_less(a.second, b.second);
  }
};

using FlatField = std::map<VfKey, Rational, VfKeyLess>;

inline FlatField flatten(const VectorField &f) {
  FlatField out;
  for (int c = 0; c < kNumCoords; ++c) {
    const CanonicalExpr canon = normalize(f.comp[c]);
    for (const Term &t : canon.terms()) {
      for (const auto &[a, e] : t.mono.factors)
        if (a.is_velocity() || a.is_acceleration())
          throw std::invalid_argument("vector field '" + f.name +
                                      "' has a jet-dependent coefficient");
      out[{c, t.mono}] = t.coeff;
    }
  }
  return out;
}

using KeyIndex = std::map<VfKey, size_t, VfKeyLess>;

inline KeyIndex key_index(const std::vector<VectorField> &fields) {
  std::set<VfKey, VfKeyLess> keys;
  for (const VectorField &f : fields)
    for (const auto &[k, coeff] : flatten(f))
      keys.insert(k);
  KeyIndex index;
  for (const VfKey &k : keys)
    index.emplace(k, index.size());
  return index;
}

/// Dense coordinates of a field over an enumeration; nullopt when the field
/// has a slot outside it (with the leaking slot described).
inline std::optional<RatVec> try_field_vector(const VectorField &f,
                                              const KeyIndex &index,
                                              std::string *leak = nullptr) {
  RatVec v(index.size(), Rational(0));
  for (const auto &[k, coeff] : flatten(f)) {
    const auto it = index.find(k);
    if (it == index.end()) {
      if (leak)
        *leak = "d/d" + Atom::coordinate(k.first).name() +
                " coefficient " + monomial_str(k.second);
      return std::nullopt;
    }
    v[it->second] = coeff;
  }
  return v;
}

inline RatMat field_matrix(const std::vector<VectorField> &fields,
                           const KeyIndex &index) {
  RatMat m;
  for (const VectorField &f : fields)
    m.push_back(*try_field_vector(f, index));
  return m;
}

inline bool span_contains(const std::vector<VectorField> &fields,
                          const VectorField &f) {
  std::vector<VectorField> all = fields;
  all.push_back(f);
  const KeyIndex index = key_index(all);
  const RatMat m = field_matrix(fields, index);
  return in_row_space(m, *try_field_vector(f, index));
}

inline bool same_span(const std::vector<VectorField> &a,
                      const std::vector<VectorField> &b) {
  std::vector<VectorField> all = a;
  all.insert(all.end(), b.begin(), b.end());
  const KeyIndex index = key_index(all);
  return same_row_space(field_matrix(a, index), field_matrix(b, index));
}

} // namespace bianchi
