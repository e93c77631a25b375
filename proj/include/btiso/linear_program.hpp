#pragma once

// Small dense linear programs. Every constraint is rewritten as a row of A u <= b
// and the dual problem  min b^T y  s.t.  A^T y = -c, y >= 0  is solved by a
// two-phase tableau simplex with Bland's rule. The primal optimum is read off
// the final dual basis as the simplex multipliers, which is a vertex of the
// primal feasible region.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "btiso/error.hpp"
#include "btiso/linalg.hpp"

namespace btiso {

template <class T = double>
struct LinearRow {
  std::vector<T> coeffs;
  T rhs;
};

template <class T = double>
struct BasicLinearProgram {
  int num_vars = 0;
  std::vector<T> objective;                          // minimize objective . u; empty means 0
  std::vector<LinearRow<T>> le_rows;                 // coeffs . u <= rhs
  std::vector<LinearRow<T>> eq_rows;                 // coeffs . u == rhs
  std::vector<std::optional<T>> lower, upper;        // per variable, empty means unbounded

  explicit BasicLinearProgram(int n = 0) : num_vars(n), objective(n, T(0)), lower(n), upper(n) {}

  void add_le(std::vector<T> coeffs, T rhs) { le_rows.push_back({std::move(coeffs), std::move(rhs)}); }
  void add_eq(std::vector<T> coeffs, T rhs) { eq_rows.push_back({std::move(coeffs), std::move(rhs)}); }
};

using LinearProgram = BasicLinearProgram<double>;

enum class LpStatus { optimal, infeasible, unbounded };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

template <class T = double>
struct BasicLpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<T> values;
  T objective_value = T(0);
  std::vector<int> active_rows;  // le rows by index, then eq rows offset by le_rows.size()
  int iterations = 0;
};

using LpSolution = BasicLpSolution<double>;

inline constexpr int kMaxLpVars = 200;
inline constexpr int kMaxLpRows = 5000;

namespace detail {

template <class T>
struct Tableau {
  // rows x (cols + 1); last column is the right-hand side
  std::vector<std::vector<T>> a;
  std::vector<T> cost;  // reduced costs, last entry = -objective
  std::vector<int> basis;
  int cols = 0;
  int iterations = 0;
};

template <class T>
bool positive(const T& v, const T& tol) {
  if constexpr (ScalarTraits<T>::exact) {
    return v > T(0);
  } else {
    return v > tol;
  }
}

template <class T>
void pivot(Tableau<T>& tb, int r, int c) {
  auto& pr = tb.a[r];
  const T p = pr[c];
  for (auto& v : pr) v /= p;
  for (std::size_t i = 0; i < tb.a.size(); ++i) {
    if (static_cast<int>(i) == r || tb.a[i][c] == T(0)) continue;
    const T f = tb.a[i][c];
    for (std::size_t j = 0; j < pr.size(); ++j) tb.a[i][j] -= f * pr[j];
  }
  if (tb.cost[c] != T(0)) {
    const T f = tb.cost[c];
    for (std::size_t j = 0; j < pr.size(); ++j) tb.cost[j] -= f * pr[j];
  }
  tb.basis[r] = c;
  ++tb.iterations;
}

/// Bland's rule iterations over columns [0, allowed). Returns false when unbounded.
template <class T>
bool run_simplex(Tableau<T>& tb, int allowed, const T& tol) {
  const int rhs = tb.cols;
  for (int guard = 0;; ++guard) {
    if (guard > 200000) throw CapacityError("simplex iteration limit reached");
    int enter = -1;
    for (int c = 0; c < allowed; ++c) {
      if (positive<T>(-tb.cost[c], tol)) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    T best(0);
    for (int r = 0; r < static_cast<int>(tb.a.size()); ++r) {
      if (!positive<T>(tb.a[r][enter], tol)) continue;
      const T ratio = tb.a[r][rhs] / tb.a[r][enter];
      if (leave < 0 || ratio < best || (ratio == best && tb.basis[r] < tb.basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) return false;
    pivot(tb, leave, enter);
  }
}

enum class StdStatus { optimal, infeasible, unbounded };

template <class T>
struct StdResult {
  StdStatus status;
  std::vector<int> basis;  // column per row; columns >= num_cols are artificial
  T objective = T(0);
  int iterations = 0;
};

/// min cost . y  s.t.  M y = rhs, y >= 0, with M given row-wise (rows x cols).
template <class T>
StdResult<T> solve_standard(const std::vector<std::vector<T>>& m, const std::vector<T>& rhs,
                            const std::vector<T>& cost, const T& tol) {
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(cost.size());
  Tableau<T> tb;
  tb.cols = cols + rows;
  tb.a.assign(rows, std::vector<T>(tb.cols + 1, T(0)));
  tb.basis.resize(rows);
  for (int r = 0; r < rows; ++r) {
    const bool flip = rhs[r] < T(0);
    for (int c = 0; c < cols; ++c) tb.a[r][c] = flip ? T(-m[r][c]) : m[r][c];
    tb.a[r][cols + r] = T(1);
    tb.a[r][tb.cols] = flip ? T(-rhs[r]) : rhs[r];
    tb.basis[r] = cols + r;
  }
  // Phase 1: minimize the sum of artificials.
  tb.cost.assign(tb.cols + 1, T(0));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c <= tb.cols; ++c) {
      if (c < cols || c == tb.cols) tb.cost[c] -= tb.a[r][c];
    }
  }
  run_simplex(tb, cols, tol);
  T infeasibility = -tb.cost[tb.cols];
  T rhs_scale(1);
  for (const auto& v : rhs) rhs_scale = std::max<T>(rhs_scale, linalg::abs_of(v));
  if (positive<T>(infeasibility, tol * rhs_scale * T(100))) {
    return {StdStatus::infeasible, tb.basis, T(0), tb.iterations};
  }
  // Drive artificials out of the basis where possible; rows where that fails are redundant.
  for (int r = 0; r < rows; ++r) {
    if (tb.basis[r] < cols) continue;
    int best = -1;
    for (int c = 0; c < cols; ++c) {
      if (positive<T>(linalg::abs_of(tb.a[r][c]), tol) &&
          (best < 0 || linalg::abs_of(tb.a[r][c]) > linalg::abs_of(tb.a[r][best]))) {
        best = c;
      }
    }
    if (best >= 0) pivot(tb, r, best);
  }
  // Phase 2.
  tb.cost.assign(tb.cols + 1, T(0));
  for (int c = 0; c < cols; ++c) tb.cost[c] = cost[c];
  for (int r = 0; r < rows; ++r) {
    const int b = tb.basis[r];
    if (b >= cols || tb.cost[b] == T(0)) continue;
    const T f = tb.cost[b];
    for (int c = 0; c <= tb.cols; ++c) tb.cost[c] -= f * tb.a[r][c];
  }
  if (!run_simplex(tb, cols, tol)) return {StdStatus::unbounded, tb.basis, T(0), tb.iterations};
  return {StdStatus::optimal, tb.basis, -tb.cost[tb.cols], tb.iterations};
}

template <class T>
struct Flattened {
  std::vector<std::vector<T>> rows;  // A, row-wise
  std::vector<T> rhs;
};

template <class T>
Flattened<T> flatten(const BasicLinearProgram<T>& p) {
  Flattened<T> f;
  const int n = p.num_vars;
  auto check = [&](const std::vector<T>& coeffs) {
    if (static_cast<int>(coeffs.size()) != n) throw InputError("LP row has wrong length");
  };
  for (const auto& r : p.le_rows) {
    check(r.coeffs);
    f.rows.push_back(r.coeffs);
    f.rhs.push_back(r.rhs);
  }
  for (const auto& r : p.eq_rows) {
    check(r.coeffs);
    f.rows.push_back(r.coeffs);
    f.rhs.push_back(r.rhs);
    std::vector<T> neg(n);
    for (int i = 0; i < n; ++i) neg[i] = -r.coeffs[i];
    f.rows.push_back(std::move(neg));
    f.rhs.push_back(-r.rhs);
  }
  for (int i = 0; i < n; ++i) {
    if (p.upper[i]) {
      std::vector<T> row(n, T(0));
      row[i] = T(1);
      f.rows.push_back(std::move(row));
      f.rhs.push_back(*p.upper[i]);
    }
    if (p.lower[i]) {
      std::vector<T> row(n, T(0));
      row[i] = T(-1);
      f.rows.push_back(std::move(row));
      f.rhs.push_back(-*p.lower[i]);
    }
  }
  return f;
}

}  // namespace detail

/// Largest violation of any constraint at `u` (0 when feasible).
template <class T>
T max_violation(const BasicLinearProgram<T>& p, const std::vector<T>& u) {
  T worst(0);
  for (const auto& r : p.le_rows) worst = std::max<T>(worst, linalg::dot(r.coeffs, u) - r.rhs);
  for (const auto& r : p.eq_rows) worst = std::max<T>(worst, linalg::abs_of(T(linalg::dot(r.coeffs, u) - r.rhs)));
  for (int i = 0; i < p.num_vars; ++i) {
    if (p.upper[i]) worst = std::max<T>(worst, u[i] - *p.upper[i]);
    if (p.lower[i]) worst = std::max<T>(worst, *p.lower[i] - u[i]);
  }
  return worst;
}

template <class T>
BasicLpSolution<T> lp_solve(const BasicLinearProgram<T>& p) {
  const int n = p.num_vars;
  if (n < 0 || n > kMaxLpVars) throw CapacityError("LP has too many variables");
  if (static_cast<int>(p.le_rows.size() + p.eq_rows.size()) > kMaxLpRows) throw CapacityError("LP has too many rows");
  std::vector<T> c = p.objective;
  if (c.empty()) c.assign(n, T(0));
  if (static_cast<int>(c.size()) != n) throw InputError("LP objective has wrong length");

  BasicLpSolution<T> sol;
  if (n == 0) {
    for (const auto& r : p.le_rows) {
      if (r.rhs < T(0)) return sol;
    }
    for (const auto& r : p.eq_rows) {
      if (r.rhs != T(0)) return sol;
    }
    sol.status = LpStatus::optimal;
    return sol;
  }

  const auto flat = detail::flatten(p);
  const int rows = static_cast<int>(flat.rows.size());
  T scale(1);
  for (const auto& r : flat.rows) {
    for (const auto& v : r) scale = std::max<T>(scale, linalg::abs_of(v));
  }
  const T tol = ScalarTraits<T>::exact ? T(0) : T(1e-11) * scale;

  // Dual in standard form: n equality rows over `rows` nonnegative columns.
  std::vector<std::vector<T>> dual(n, std::vector<T>(rows));
  for (int r = 0; r < rows; ++r) {
    for (int i = 0; i < n; ++i) dual[i][r] = flat.rows[r][i];
  }
  std::vector<T> dual_rhs(n);
  for (int i = 0; i < n; ++i) dual_rhs[i] = -c[i];

  auto res = detail::solve_standard(dual, dual_rhs, flat.rhs, tol);
  sol.iterations = res.iterations;
  if (res.status == detail::StdStatus::unbounded) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  if (res.status == detail::StdStatus::infeasible) {
    // The primal is infeasible or unbounded; a zero objective separates the cases.
    auto feas = detail::solve_standard(dual, std::vector<T>(n, T(0)), flat.rhs, tol);
    sol.status = feas.status == detail::StdStatus::unbounded ? LpStatus::infeasible : LpStatus::unbounded;
    return sol;
  }

  // Multipliers: a_r . u = b_r for every basic dual column r (artificials pin u_i = 0).
  linalg::Mat<T> m(n, std::vector<T>(n, T(0)));
  std::vector<T> rhs(n, T(0));
  for (int i = 0; i < n; ++i) {
    const int b = res.basis[i];
    if (b < rows) {
      m[i] = flat.rows[b];
      rhs[i] = flat.rhs[b];
    } else {
      m[i][b - rows] = T(1);
    }
  }
  auto u = linalg::solve(m, rhs, ScalarTraits<T>::exact ? T(0) : T(1e-14));
  if (!u) throw VerificationError("simplex ended on a singular basis");
  sol.values = std::move(*u);
  sol.status = LpStatus::optimal;
  sol.objective_value = linalg::dot(c, sol.values);

  const T tight = ScalarTraits<T>::exact ? T(0) : T(1e-8);
  for (std::size_t r = 0; r < p.le_rows.size(); ++r) {
    const auto& row = p.le_rows[r];
    const T gap = row.rhs - linalg::dot(row.coeffs, sol.values);
    const T ref = std::max<T>(T(1), linalg::abs_of(row.rhs));
    if (linalg::abs_of(gap) <= tight * ref) sol.active_rows.push_back(static_cast<int>(r));
  }
  for (std::size_t r = 0; r < p.eq_rows.size(); ++r) sol.active_rows.push_back(static_cast<int>(p.le_rows.size() + r));
  return sol;
}

/// Minimizes the listed coordinates one after another, pinning each at its
/// optimum before moving on. Every variable must appear in `order` to obtain a
/// componentwise-minimal point; unlisted ones keep the last solver value.
template <class T>
BasicLpSolution<T> sequential_min(BasicLinearProgram<T> p, const std::vector<int>& order) {
  BasicLpSolution<T> last;
  bool solved = false;
  for (int idx : order) {
    if (idx < 0 || idx >= p.num_vars) throw InputError("sequential_min: variable index out of range");
    p.objective.assign(p.num_vars, T(0));
    p.objective[idx] = T(1);
    last = lp_solve(p);
    if (last.status != LpStatus::optimal) {
      throw VerificationError("sequential_min: subproblem for variable " + std::to_string(idx) + " is " +
                              to_string(last.status));
    }
    solved = true;
    std::vector<T> pin(p.num_vars, T(0));
    pin[idx] = T(1);
    p.add_eq(std::move(pin), last.values[idx]);
  }
  if (!solved) last = lp_solve(p);
  return last;
}

/// True when lowering coordinate `idx` by `delta` (others fixed) stays feasible within `tol`.
inline bool can_decrease(const LinearProgram& p, std::vector<double> u, int idx, double delta, double tol = 1e-9) {
  u[idx] -= delta;
  return max_violation(p, u) <= tol;
}

}  // namespace btiso
