#pragma once

#include "bianchi/vector_field.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bianchi {

/// table[i][j] holds the coordinates of [e_i, e_j] over the basis, sparse
/// and 0-based. Antisymmetric by construction.
using StructureRow = std::map<int, Rational>;
using StructureTable = std::vector<std::vector<StructureRow>>;

/// A bracket of basis fields left their span.
struct NonClosureError : std::runtime_error {
  int i, j; // 0-based basis pair
  NonClosureError(const std::string &msg, int i_, int j_)
      : std::runtime_error(msg), i(i_), j(j_) {}
};

struct LieAlgebra {
  std::vector<VectorField> basis;
  StructureTable table;
  size_t n = 0;
};

/// Computes the structure constants of a closed span of point fields.
/// Requires linear independence; each bracket's gauge must match the gauge
/// induced by its expansion up to an additive constant.
inline LieAlgebra structure_constants(std::vector<VectorField> basis) {
  LieAlgebra alg;
  alg.n = basis.size();
  const KeyIndex index = key_index(basis);
  const RatMat m = field_matrix(basis, index);
  if (rank(m) != alg.n)
    throw std::invalid_argument("basis fields are linearly dependent");

  // Columns are basis fields, rows are coefficient slots.
  RatMat a(index.size(), RatVec(alg.n, Rational(0)));
  for (size_t k = 0; k < alg.n; ++k)
    for (size_t row = 0; row < index.size(); ++row)
      a[row][k] = m[k][row];

  alg.table.assign(alg.n, std::vector<StructureRow>(alg.n));
  for (size_t i = 0; i < alg.n; ++i)
    for (size_t j = i + 1; j < alg.n; ++j) {
      const VectorField b = commutator(basis[i], basis[j]);
      std::string leak;
      const auto vec = try_field_vector(b, index, &leak);
      if (!vec)
        throw NonClosureError("[" + basis[i].name + ", " + basis[j].name +
                                  "] introduces " + leak +
                                  " outside the span",
                              static_cast<int>(i), static_cast<int>(j));
      const auto coords = solve(a, *vec);
      if (!coords)
        throw NonClosureError("[" + basis[i].name + ", " + basis[j].name +
                                  "] lies outside the span",
                              static_cast<int>(i), static_cast<int>(j));
      Expr gauge_span;
      for (size_t k = 0; k < alg.n; ++k)
        if ((*coords)[k] != 0) {
          alg.table[i][j][static_cast<int>(k)] = (*coords)[k];
          alg.table[j][i][static_cast<int>(k)] = -(*coords)[k];
          gauge_span = gauge_span + Expr((*coords)[k]) * basis[k].gauge;
        }
      const CanonicalExpr gauge_gap = normalize(b.gauge - gauge_span);
      for (const Term &t : gauge_gap.terms())
        if (!t.mono.is_unit())
          throw std::logic_error("[" + basis[i].name + ", " + basis[j].name +
                                 "] has gauge " + monomial_str(t.mono) +
                                 " unaccounted for by its expansion");
    }
  alg.basis = std::move(basis);
  return alg;
}

inline RatVec abstract_bracket(const StructureTable &t, const RatVec &u,
                               const RatVec &v) {
  const size_t n = t.size();
  RatVec w(n, Rational(0));
  for (size_t i = 0; i < n; ++i) {
    if (u[i] == 0)
      continue;
    for (size_t j = 0; j < n; ++j) {
      if (v[j] == 0)
        continue;
      for (const auto &[k, coeff] : t[i][j])
        w[k] += u[i] * v[j] * coeff;
    }
  }
  return w;
}

inline bool jacobi_holds(const StructureTable &t) {
  const size_t n = t.size();
  auto e = [&](size_t i) {
    RatVec v(n, Rational(0));
    v[i] = 1;
    return v;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        const RatVec s1 = abstract_bracket(t, abstract_bracket(t, e(i), e(j)), e(k));
        const RatVec s2 = abstract_bracket(t, abstract_bracket(t, e(j), e(k)), e(i));
        const RatVec s3 = abstract_bracket(t, abstract_bracket(t, e(k), e(i)), e(j));
        for (size_t l = 0; l < n; ++l)
          if (s1[l] + s2[l] + s3[l] != 0)
            return false;
      }
  return true;
}

/// kappa(a, b) = tr(ad_a ad_b), computed from the structure constants.
inline RatMat killing_form(const StructureTable &t) {
  const size_t n = t.size();
  RatMat kappa(n, RatVec(n, Rational(0)));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b) {
      Rational sum(0);
      for (size_t m = 0; m < n; ++m)
        for (const auto &[l, c_am_l] : t[a][m]) {
          const auto &row = t[b][l];
          const auto it = row.find(static_cast<int>(m));
          if (it != row.end())
            sum += c_am_l * it->second;
        }
      kappa[a][b] = sum;
      kappa[b][a] = sum;
    }
  return kappa;
}

/// kappa([a,b], c) + kappa(b, [a,c]) = 0 for all basis triples.
inline bool killing_ad_invariant(const StructureTable &t) {
  const size_t n = t.size();
  const RatMat kappa = killing_form(t);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (size_t c = 0; c < n; ++c) {
        Rational sum(0);
        for (const auto &[m, coeff] : t[a][b])
          sum += coeff * kappa[m][c];
        for (const auto &[m, coeff] : t[a][c])
          sum += coeff * kappa[b][m];
        if (sum != 0)
          return false;
      }
  return true;
}

/// Canonical basis of the span of [u, v] over u in us, v in vs.
inline RatMat bracket_space(const StructureTable &t, const RatMat &us,
                            const RatMat &vs) {
  RatMat all;
  for (const RatVec &u : us)
    for (const RatVec &v : vs)
      all.push_back(abstract_bracket(t, u, v));
  return row_space_basis(all);
}

inline RatMat full_space(size_t n) {
  RatMat id(n, RatVec(n, Rational(0)));
  for (size_t i = 0; i < n; ++i)
    id[i][i] = 1;
  return id;
}

/// Dimensions of D^0 = start, D^{k+1} = [D^k, D^k], until the dimension
/// stops moving. Ends with 0 exactly when the start space is solvable.
inline std::vector<size_t> derived_series_dims(const StructureTable &t,
                                               RatMat start) {
  std::vector<size_t> dims{start.size()};
  while (true) {
    RatMat next = bracket_space(t, start, start);
    dims.push_back(next.size());
    if (next.size() == start.size() || next.empty())
      return dims;
    start = std::move(next);
  }
}

inline std::vector<size_t> derived_series_dims(const StructureTable &t) {
  return derived_series_dims(t, full_space(t.size()));
}

/// Dimensions of L^1 = start, L^{k+1} = [L, L^k].
inline std::vector<size_t> lower_central_series_dims(const StructureTable &t,
                                                     RatMat start) {
  std::vector<size_t> dims{start.size()};
  const RatMat whole = full_space(t.size());
  while (true) {
    RatMat next = bracket_space(t, whole, start);
    dims.push_back(next.size());
    if (next.size() == start.size() || next.empty())
      return dims;
    start = std::move(next);
  }
}

inline std::vector<size_t> lower_central_series_dims(const StructureTable &t) {
  return lower_central_series_dims(t, full_space(t.size()));
}

/// The Killing-orthogonal complement of the derived subalgebra, verified to
/// be a solvable ideal before it is returned.
inline RatMat solvable_radical(const StructureTable &t) {
  const size_t n = t.size();
  const RatMat derived = bracket_space(t, full_space(n), full_space(n));
  const RatMat kappa = killing_form(t);
  RatMat constraints;
  for (const RatVec &y : derived) {
    RatVec row(n, Rational(0));
    for (size_t k = 0; k < n; ++k)
      for (size_t j = 0; j < n; ++j)
        row[k] += y[j] * kappa[j][k];
    constraints.push_back(std::move(row));
  }
  const RatMat rad = nullspace(std::move(constraints), n);

  for (size_t i = 0; i < n; ++i) {
    RatVec ei(n, Rational(0));
    ei[i] = 1;
    for (const RatVec &r : rad)
      if (!in_row_space(rad, abstract_bracket(t, ei, r)))
        throw std::logic_error("radical candidate is not an ideal");
  }
  const std::vector<size_t> dims = derived_series_dims(t, rad);
  if (!dims.empty() && dims.back() != 0)
    throw std::logic_error("radical candidate is not solvable");
  return rad;
}

struct LeviReport {
  bool subalgebra = false;
  bool trivial_intersection = false;
  bool complements = false; // direct sum with the radical recovers L
  bool is_sl2 = false;      // intrinsic Killing form: rank 3, signature (2,1)
  bool triple_found = false;
  RatVec h, e, f; // ambient coordinates, only when triple_found
};

namespace detail {

/// Searches a small rational grid for h with ad_h eigenvalues {-2, 0, 2},
/// then solves for the weight vectors. Exact throughout.
inline bool find_sl2_triple(const StructureTable &sub, RatVec &h_out,
                            RatVec &e_out, RatVec &f_out) {
  const size_t n = sub.size();
  if (n != 3)
    return false;
  const std::vector<Rational> grid{
      Rational(-2), Rational(-3, 2), Rational(-1), Rational(-1, 2),
      Rational(0),  Rational(1, 2),  Rational(1),  Rational(3, 2),
      Rational(2)};
  auto ad = [&](const RatVec &h) {
    RatMat m(n, RatVec(n, Rational(0)));
    for (size_t col = 0; col < n; ++col) {
      RatVec ec(n, Rational(0));
      ec[col] = 1;
      const RatVec img = abstract_bracket(sub, h, ec);
      for (size_t row = 0; row < n; ++row)
        m[row][col] = img[row];
    }
    return m;
  };
  for (const Rational &c0 : grid)
    for (const Rational &c1 : grid)
      for (const Rational &c2 : grid) {
        const RatVec h{c0, c1, c2};
        if (c0 == 0 && c1 == 0 && c2 == 0)
          continue;
        const RatMat m = ad(h);
        // Characteristic polynomial must be L^3 - 4 L.
        const Rational tr = m[0][0] + m[1][1] + m[2][2];
        if (tr != 0)
          continue;
        const Rational minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] +
                                m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                                m[1][1] * m[2][2] - m[1][2] * m[2][1];
        if (minors != -4)
          continue;
        const Rational det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if (det != 0)
          continue;
        auto eigenvector = [&](const Rational &lambda) -> std::optional<RatVec> {
          RatMat shifted = m;
          for (size_t d = 0; d < n; ++d)
            shifted[d][d] -= lambda;
          const RatMat kernel = nullspace(std::move(shifted), n);
          if (kernel.size() != 1)
            return std::nullopt;
          return kernel[0];
        };
        const auto e = eigenvector(Rational(2));
        const auto f0 = eigenvector(Rational(-2));
        if (!e || !f0)
          continue;
        const RatVec ef = abstract_bracket(sub, *e, *f0);
        // [e, f0] must be a nonzero multiple of h.
        Rational scale(0);
        bool proportional = true;
        for (size_t d = 0; d < n; ++d) {
          if (h[d] == 0) {
            if (ef[d] != 0)
              proportional = false;
            continue;
          }
          const Rational ratio = ef[d] / h[d];
          if (scale == 0)
            scale = ratio;
          else if (ratio != scale)
            proportional = false;
        }
        if (!proportional || scale == 0)
          continue;
        RatVec f = *f0;
        for (Rational &v : f)
          v /= scale;
        h_out = h;
        e_out = *e;
        f_out = f;
        return true;
      }
  return false;
}

} // namespace detail

/// Checks a 1-based subset of the basis as a Levi complement candidate.
inline LeviReport levi_check(const LieAlgebra &alg,
                             const std::vector<int> &indices) {
  LeviReport rep;
  const size_t n = alg.n, m = indices.size();
  RatMat sub;
  for (int idx : indices) {
    if (idx < 1 || static_cast<size_t>(idx) > n)
      throw std::invalid_argument("levi candidate index out of range");
    RatVec v(n, Rational(0));
    v[idx - 1] = 1;
    sub.push_back(std::move(v));
  }

  // Closure under the bracket, read straight off the structure table.
  rep.subalgebra = true;
  for (size_t p = 0; p < m && rep.subalgebra; ++p)
    for (size_t q = p + 1; q < m && rep.subalgebra; ++q)
      for (const auto &[k, coeff] :
           alg.table[indices[p] - 1][indices[q] - 1]) {
        bool inside = false;
        for (int idx : indices)
          inside = inside || (idx - 1 == k);
        if (!inside)
          rep.subalgebra = false;
      }

  const RatMat rad = solvable_radical(alg.table);
  RatMat stacked = sub;
  stacked.insert(stacked.end(), rad.begin(), rad.end());
  rep.trivial_intersection = rank(stacked) == m + rad.size();
  rep.complements = rep.trivial_intersection && m + rad.size() == n;

  if (!rep.subalgebra || m != 3)
    return rep;

  // Intrinsic structure constants of the candidate.
  StructureTable restricted(m, std::vector<StructureRow>(m));
  for (size_t p = 0; p < m; ++p)
    for (size_t q = 0; q < m; ++q)
      for (const auto &[k, coeff] :
           alg.table[indices[p] - 1][indices[q] - 1])
        for (size_t r = 0; r < m; ++r)
          if (indices[r] - 1 == k)
            restricted[p][q][static_cast<int>(r)] = coeff;

  RatMat kappa = killing_form(restricted);
  const auto [pos, neg] = symmetric_signature(kappa);
  rep.is_sl2 = rank(std::move(kappa)) == 3 && pos == 2 && neg == 1;

  RatVec h, e, f;
  if (detail::find_sl2_triple(restricted, h, e, f)) {
    rep.triple_found = true;
    rep.h.assign(n, Rational(0));
    rep.e.assign(n, Rational(0));
    rep.f.assign(n, Rational(0));
    for (size_t p = 0; p < m; ++p) {
      rep.h[indices[p] - 1] = h[p];
      rep.e[indices[p] - 1] = e[p];
      rep.f[indices[p] - 1] = f[p];
    }
  }
  return rep;
}

} // namespace bianchi
