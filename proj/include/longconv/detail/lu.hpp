#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "longconv/types.hpp"

// Dense complex LU with partial pivoting. Sizes here stay small (<= a few
// hundred), so a direct factorization is the right tool.

namespace longconv::detail {

struct LuFactors {
  std::size_t n = 0;
  std::vector<Complex> lu;       // packed L\U, row-major
  std::vector<std::size_t> piv;  // row permutation
  bool singular = false;
};

inline LuFactors lu_factor(std::vector<Complex> a, std::size_t n) {
  LuFactors f;
  f.n = n;
  f.lu = std::move(a);
  f.piv.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.piv[i] = i;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(f.lu[col * n + col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double mag = std::abs(f.lu[row * n + col]);
      if (mag > best) {
        best = mag;
        pivot = row;
      }
    }
    if (best == 0.0) {
      f.singular = true;
      return f;
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(f.lu[col * n + j], f.lu[pivot * n + j]);
      std::swap(f.piv[col], f.piv[pivot]);
    }
    const Complex inv_diag = 1.0 / f.lu[col * n + col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const Complex factor = cmul(f.lu[row * n + col], inv_diag);
      f.lu[row * n + col] = factor;
      for (std::size_t j = col + 1; j < n; ++j)
        f.lu[row * n + j] -= cmul(factor, f.lu[col * n + j]);
    }
  }
  return f;
}

inline void lu_solve_inplace(const LuFactors& f, std::vector<Complex>& x) {
  const std::size_t n = f.n;
  std::vector<Complex> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = x[f.piv[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) b[i] -= cmul(f.lu[i * n + j], b[j]);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) b[i] -= cmul(f.lu[i * n + j], b[j]);
    b[i] = cmul(b[i], 1.0 / f.lu[i * n + i]);
  }
  x = std::move(b);
}

// x solving A x = rhs; returns false when A is numerically singular.
inline bool lu_solve(const std::vector<Complex>& a, std::size_t n,
                     const std::vector<Complex>& rhs, std::vector<Complex>* x) {
  LuFactors f = lu_factor(a, n);
  if (f.singular) return false;
  *x = rhs;
  lu_solve_inplace(f, *x);
  return true;
}

// Dense inverse via column-by-column solves; returns false when singular.
inline bool lu_invert(const std::vector<Complex>& a, std::size_t n,
                      std::vector<Complex>* inverse) {
  LuFactors f = lu_factor(a, n);
  if (f.singular) return false;
  inverse->assign(n * n, Complex(0.0, 0.0));
  std::vector<Complex> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), Complex(0.0, 0.0));
    col[j] = Complex(1.0, 0.0);
    lu_solve_inplace(f, col);
    for (std::size_t i = 0; i < n; ++i) (*inverse)[i * n + j] = col[i];
  }
  return true;
}

}  // namespace longconv::detail
