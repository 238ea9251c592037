#pragma once

#include "bianchi/rational.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace bianchi {

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>; // row major, rows of equal length

/// In-place reduced row echelon form; returns the rank. Exact arithmetic,
/// so any nonzero entry works as a pivot.
inline size_t rref(RatMat &m) {
  if (m.empty())
    return 0;
  const size_t rows = m.size(), cols = m[0].size();
  size_t lead = 0;
  for (size_t col = 0; col < cols && lead < rows; ++col) {
    size_t piv = lead;
    while (piv < rows && m[piv][col] == 0)
      ++piv;
    if (piv == rows)
      continue;
    std::swap(m[piv], m[lead]);
    const Rational inv = m[lead][col];
    for (size_t c = col; c < cols; ++c)
      m[lead][c] /= inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == lead || m[r][col] == 0)
        continue;
      const Rational f = m[r][col];
      for (size_t c = col; c < cols; ++c)
        m[r][c] -= f * m[lead][c];
    }
    ++lead;
  }
  return lead;
}

inline size_t rank(RatMat m) { return rref(m); }

/// Canonical basis of the row space: RREF with zero rows dropped. Equal
/// row spaces produce identical matrices.
inline RatMat row_space_basis(RatMat m) {
  const size_t r = rref(m);
  m.resize(r);
  return m;
}

inline bool in_row_space(const RatMat &m, const RatVec &v) {
  RatMat ext = m;
  ext.push_back(v);
  return rank(std::move(ext)) == rank(m);
}

inline bool same_row_space(const RatMat &a, const RatMat &b) {
  return row_space_basis(a) == row_space_basis(b);
}

/// One exact solution of A x = b with free unknowns set to zero, or
/// nullopt when the system is inconsistent.
inline std::optional<RatVec> solve(const RatMat &a, const RatVec &b) {
  const size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  RatMat aug = a;
  for (size_t r = 0; r < rows; ++r)
    aug[r].push_back(b[r]);
  rref(aug);
  RatVec x(cols, Rational(0));
  for (size_t r = 0; r < rows; ++r) {
    size_t lead = 0;
    while (lead < cols && aug[r][lead] == 0)
      ++lead;
    if (lead == cols) {
      if (aug[r][cols] != 0)
        return std::nullopt;
      continue;
    }
    x[lead] = aug[r][cols];
  }
  return x;
}

/// Canonical kernel basis of an m x n matrix (n given explicitly so the
/// zero-row case keeps its column count).
inline RatMat nullspace(RatMat m, size_t cols) {
  rref(m);
  std::vector<size_t> pivot_of_col(cols, SIZE_MAX);
  size_t row = 0;
  for (size_t c = 0; c < cols && row < m.size(); ++c)
    if (m[row][c] != 0)
      pivot_of_col[c] = row++;
  RatMat basis;
  for (size_t f = 0; f < cols; ++f) {
    if (pivot_of_col[f] != SIZE_MAX)
      continue;
    RatVec v(cols, Rational(0));
    v[f] = 1;
    for (size_t c = 0; c < cols; ++c)
      if (pivot_of_col[c] != SIZE_MAX)
        v[c] = -m[pivot_of_col[c]][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Signature (#positive, #negative) of a symmetric matrix by congruence
/// diagonalization. Exact, so no tolerance is involved.
inline std::pair<int, int> symmetric_signature(RatMat m) {
  const size_t n = m.size();
  auto add_row_col = [&](size_t dst, size_t src, const Rational &f) {
    for (size_t c = 0; c < n; ++c)
      m[dst][c] += f * m[src][c];
    for (size_t r = 0; r < n; ++r)
      m[r][dst] += f * m[r][src];
  };
  for (size_t k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      size_t j = k + 1;
      while (j < n && m[j][j] == 0)
        ++j;
      if (j < n) {
        std::swap(m[k], m[j]);
        for (size_t r = 0; r < n; ++r)
          std::swap(m[r][k], m[r][j]);
      } else {
        for (j = k + 1; j < n && m[k][j] == 0; ++j)
          ;
        if (j == n)
          continue; // row and column k vanish entirely
        add_row_col(k, j, Rational(1));
      }
    }
    for (size_t r = k + 1; r < n; ++r)
      if (m[r][k] != 0)
        add_row_col(r, k, -m[r][k] / m[k][k]);
  }
  int pos = 0, neg = 0;
  for (size_t k = 0; k < n; ++k) {
    if (m[k][k] > 0)
      ++pos;
    else if (m[k][k] < 0)
      ++neg;
  }
  return {pos, neg};
}

} // namespace bianchi
