#pragma once

// Dense Gaussian-elimination kernels shared by the exact and float paths.
// Pivot choice: float modes take the largest magnitude in the column, exact
// mode any nonzero entry (growth is not a failure mode there, zeros are).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tpng/rational.hpp"

namespace tpng {

template <NumericScalar S>
using Matrix = std::vector<std::vector<S>>;

namespace detail {

template <NumericScalar S>
long pick_pivot(const Matrix<S>& a, long col, long from) {
  const long n = static_cast<long>(a.size());
  if constexpr (is_exact_scalar_v<S>) {
    for (long r = from; r < n; ++r)
      if (!a[r][col].is_zero()) return r;
    return -1;
  } else {
    long best = -1;
    S mag = 0;
    for (long r = from; r < n; ++r) {
      const S m = std::abs(a[r][col]);
      if (m > mag) {
        mag = m;
        best = r;
      }
    }
    return best;
  }
}

}  // namespace detail

template <NumericScalar S>
S matrix_det(Matrix<S> a) {
  const long n = static_cast<long>(a.size());
  for (const auto& row : a)
    if (static_cast<long>(row.size()) != n) throw std::invalid_argument("matrix_det: not square");
  S det = scalar_from_int<S>(1);
  for (long c = 0; c < n; ++c) {
    const long p = detail::pick_pivot(a, c, c);
    if (p < 0) return scalar_from_int<S>(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (long r = c + 1; r < n; ++r) {
      if (scalar_is_zero(a[r][c])) continue;
      const S f = a[r][c] / a[c][c];
      for (long j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

// Solves a x = b; throws on a singular (for floats: numerically singular) system.
template <NumericScalar S>
std::vector<S> solve_linear(Matrix<S> a, std::vector<S> b) {
  const long n = static_cast<long>(a.size());
  if (static_cast<long>(b.size()) != n) throw std::invalid_argument("solve_linear: size mismatch");
  for (const auto& row : a)
    if (static_cast<long>(row.size()) != n) throw std::invalid_argument("solve_linear: not square");
  for (long c = 0; c < n; ++c) {
    const long p = detail::pick_pivot(a, c, c);
    if (p < 0 || scalar_is_zero(a[p][c])) throw std::domain_error("solve_linear: singular system");
    if (p != c) {
      std::swap(a[p], a[c]);
      std::swap(b[p], b[c]);
    }
    for (long r = c + 1; r < n; ++r) {
      if (scalar_is_zero(a[r][c])) continue;
      const S f = a[r][c] / a[c][c];
      for (long j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<S> x(n, scalar_from_int<S>(0));
  for (long r = n - 1; r >= 0; --r) {
    S acc = b[r];
    for (long j = r + 1; j < n; ++j) acc -= a[r][j] * x[j];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace tpng
