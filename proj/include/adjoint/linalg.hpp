#pragma once

// Dense exact linear algebra over an ordered field (Rat or QuadNum).

#include <optional>
#include <utility>
#include <vector>

#include "adjoint/rational.hpp"

namespace adjoint::linalg {

template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
struct Echelon {
  Mat<T> rows;                    // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

/// Reduced row echelon form by Gauss-Jordan elimination.
template <class T>
Echelon<T> rref(Mat<T> a) {
  Echelon<T> e;
  if (a.empty()) return e;
  const std::size_t m = a.size(), n = a[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t piv = row;
    while (piv < m && a[piv][col] == T(0)) ++piv;
    if (piv == m) continue;
    std::swap(a[piv], a[row]);
    T inv = T(1) / a[row][col];
    for (std::size_t j = col; j < n; ++j) a[row][j] = a[row][j] * inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || a[i][col] == T(0)) continue;
      T f = a[i][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] = a[i][j] - f * a[row][j];
    }
    e.pivots.push_back(col);
    ++row;
  }
  a.resize(row);
  e.rows = std::move(a);
  return e;
}

template <class T>
std::size_t rank(const Mat<T>& a) {
  return rref(a).pivots.size();
}

/// Basis of { x : a x = 0 }.
template <class T>
Mat<T> nullspace(const Mat<T>& a, std::size_t ncols) {
  Mat<T> basis;
  if (a.empty()) {
    for (std::size_t j = 0; j < ncols; ++j) {
      std::vector<T> v(ncols, T(0));
      v[j] = T(1);
      basis.push_back(v);
    }
    return basis;
  }
  auto e = rref(a);
  std::vector<bool> is_pivot(ncols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(ncols, T(0));
    v[free] = T(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = T(0) - e.rows[r][free];
    basis.push_back(v);
  }
  return basis;
}

/// Some solution of a x = b, or nullopt when inconsistent.
template <class T>
std::optional<std::vector<T>> solve(const Mat<T>& a, const std::vector<T>& b, std::size_t ncols) {
  Mat<T> aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto e = rref(aug);
  std::vector<T> x(ncols, T(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == ncols) return std::nullopt;
    x[e.pivots[r]] = e.rows[r][ncols];
  }
  return x;
}

template <class T>
T determinant(Mat<T> a) {
  const std::size_t n = a.size();
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == T(0)) ++piv;
    if (piv == n) return T(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = T(0) - det;
    }
    det = det * a[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a[i][col] == T(0)) continue;
      T f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] = a[i][j] - f * a[col][j];
    }
  }
  return det;
}

template <class T>
std::optional<Mat<T>> inverse(const Mat<T>& a) {
  const std::size_t n = a.size();
  Mat<T> aug = a;
  for (std::size_t i = 0; i < n; ++i) {
    aug[i].resize(2 * n, T(0));
    aug[i][n + i] = T(1);
  }
  auto e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Mat<T> inv(n, std::vector<T>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
  return inv;
}

template <class T>
Mat<T> transpose(const Mat<T>& a) {
  if (a.empty()) return {};
  Mat<T> t(a[0].size(), std::vector<T>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

template <class T>
std::vector<T> mat_vec(const Mat<T>& a, const std::vector<T>& x) {
  std::vector<T> y(a.size(), T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] = y[i] + a[i][j] * x[j];
  return y;
}

inline RatMat from_int_rows(const std::vector<IntVec>& rows) {
  RatMat m;
  for (const auto& r : rows) m.push_back(to_ratvec(r));
  return m;
}

}  // namespace adjoint::linalg
