#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace btiso {

/// Numeric policy for the templated kernels. `double` works with tolerances;
/// exact types such as Rational set `exact = true` and compare against zero.
template <class T>
struct ScalarTraits {
  static constexpr bool exact = false;
  static double to_double(const T& x) { return static_cast<double>(x); }
  static T from_double(double x) { return static_cast<T>(x); }
};

using Rational = boost::multiprecision::cpp_rational;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static Rational from_double(double x) { return Rational(x); }
};

namespace linalg {

template <class T>
using Vec = std::vector<T>;
template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
T abs_of(const T& x) {
  return x < T(0) ? T(-x) : x;
}

template <class T>
bool near_zero(const T& x, const T& tol) {
  if constexpr (ScalarTraits<T>::exact) {
    return x == T(0);
  } else {
    return abs_of(x) <= tol;
  }
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
Vec<T> sub(const Vec<T>& a, const Vec<T>& b) {
  Vec<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline double norm(const Vec<double>& a) { return std::sqrt(dot(a, a)); }

/// Determinant by Gaussian elimination with partial pivoting.
template <class T>
T determinant(Mat<T> m) {
  const std::size_t n = m.size();
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (abs_of(m[r][col]) > abs_of(m[piv][col])) piv = r;
    }
    if (m[piv][col] == T(0)) return T(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == T(0)) continue;
      const T f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

/// Solves A x = b for square A; nullopt when |pivot| <= tol (exact types: pivot == 0).
template <class T>
std::optional<Vec<T>> solve(Mat<T> a, Vec<T> b, const T& tol = T(0)) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (abs_of(a[r][col]) > abs_of(a[piv][col])) piv = r;
    }
    if (near_zero(a[piv][col], tol) || a[piv][col] == T(0)) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == T(0)) continue;
      const T f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  Vec<T> x(n, T(0));
  for (std::size_t i = n; i-- > 0;) {
    T s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Reduced row echelon form in place; returns pivot columns.
template <class T>
std::vector<std::size_t> rref(Mat<T>& m, const T& tol) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (abs_of(m[i][c]) > abs_of(m[piv][c])) piv = i;
    }
    if (near_zero(m[piv][c], tol)) {
      for (std::size_t i = r; i < rows; ++i) m[i][c] = T(0);
      continue;
    }
    std::swap(m[piv], m[r]);
    const T p = m[r][c];
    for (std::size_t k = c; k < cols; ++k) m[r][k] /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == T(0)) continue;
      const T f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
std::size_t rank(Mat<T> m, const T& tol) {
  return rref(m, tol).size();
}

/// A nonzero vector of the null space of `m` (rows x cols, rank cols-1 expected).
/// Returns nullopt when the null space is trivial.
template <class T>
std::optional<Vec<T>> null_vector(Mat<T> m, std::size_t cols, const T& tol) {
  if (m.empty()) {
    Vec<T> e(cols, T(0));
    if (cols > 0) e[0] = T(1);
    return e;
  }
  const auto pivots = rref(m, tol);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::size_t free_col = cols;
  for (std::size_t c = 0; c < cols; ++c) {
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  }
  if (free_col == cols) return std::nullopt;
  Vec<T> x(cols, T(0));
  x[free_col] = T(1);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -m[r][free_col];
  return x;
}

}  // namespace linalg
}  // namespace btiso
