#pragma once

#include <optional>
#include <vector>

namespace localsym {

// Dense linear algebra mod a small prime.  Matrices are row-major
// vector<vector<long>> with entries in [0, p).
namespace fp {

using Vec = std::vector<long>;
using Mat = std::vector<Vec>;

inline long norm(long x, long p) { return ((x % p) + p) % p; }

inline long inv_mod(long a, long p) {
  long t = 0, nt = 1, r = p, nr = norm(a, p);
  while (nr != 0) {
    long q = r / nr;
    long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return norm(t, p);
}

/// Row echelon form in place; returns pivot columns.
inline std::vector<int> rref(Mat& A, long p) {
  std::vector<int> pivots;
  int rows = (int)A.size();
  if (rows == 0) return pivots;
  int cols = (int)A[0].size();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (norm(A[i][c], p) != 0) { sel = i; break; }
    if (sel < 0) continue;
    std::swap(A[r], A[sel]);
    long inv = inv_mod(A[r][c], p);
    for (int j = 0; j < cols; ++j) A[r][j] = norm(A[r][j] * inv, p);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      long f = norm(A[i][c], p);
      if (!f) continue;
      for (int j = 0; j < cols; ++j) A[i][j] = norm(A[i][j] - f * A[r][j], p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int rank(Mat A, long p) { return (int)rref(A, p).size(); }

/// Solve A x = b (A: m x n).  Returns one solution or nullopt.
inline std::optional<Vec> solve(const Mat& A, const Vec& b, long p) {
  int m = (int)A.size();
  int n = m ? (int)A[0].size() : 0;
  Mat aug(m, Vec(n + 1));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = norm(A[i][j], p);
    aug[i][n] = norm(b[i], p);
  }
  auto piv = rref(aug, p);
  for (int c : piv)
    if (c == n) return std::nullopt;  // inconsistent
  Vec x(n, 0);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][n];
  return x;
}

/// Inverse of a square matrix; nullopt when singular.
inline std::optional<Mat> inverse(const Mat& A, long p) {
  int n = (int)A.size();
  Mat aug(n, Vec(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = norm(A[i][j], p);
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug, p);
  if ((int)piv.size() != n) return std::nullopt;
  for (int i = 0; i < n; ++i)
    if (piv[i] != i) return std::nullopt;
  Mat R(n, Vec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R[i][j] = aug[i][n + j];
  return R;
}

inline Vec matvec(const Mat& A, const Vec& x, long p) {
  Vec r(A.size(), 0);
  for (size_t i = 0; i < A.size(); ++i) {
    long s = 0;
    for (size_t j = 0; j < x.size(); ++j) s += A[i][j] * x[j];
    r[i] = norm(s, p);
  }
  return r;
}

/// Basis of the null space of A (n-dim column vectors).
inline Mat nullspace(const Mat& A, long p) {
  int m = (int)A.size();
  int n = m ? (int)A[0].size() : 0;
  Mat R = A;
  for (auto& row : R)
    for (auto& x : row) x = norm(x, p);
  auto piv = rref(R, p);
  std::vector<bool> is_piv(n, false);
  for (int c : piv) is_piv[c] = true;
  Mat basis;
  for (int c = 0; c < n; ++c) {
    if (is_piv[c]) continue;
    Vec v(n, 0);
    v[c] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = norm(-R[r][c], p);
    basis.push_back(v);
  }
  return basis;
}

/// Is v in the row span of A?
inline bool in_span(const Mat& A, const Vec& v, long p) {
  Mat B = A;
  int r0 = rank(B, p);
  B = A;
  B.push_back(v);
  return rank(B, p) == r0;
}

}  // namespace fp
}  // namespace localsym
