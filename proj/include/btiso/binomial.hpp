#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "btiso/error.hpp"

namespace btiso {

/// Exact binomial coefficient; overflows are reported rather than wrapped.
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = k < n - k ? k : n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > UINT64_MAX / num) throw CapacityError("binomial(" + std::to_string(n) + "," + std::to_string(k) + ") overflows");
    r = r * num / static_cast<std::uint64_t>(i);  // exact: r * num is divisible by i
  }
  return r;
}

inline double log_binomial(int n, int k) { return std::log(static_cast<double>(binomial(n, k))); }

/// log C(gamma + n, n) for real gamma > -1: exact when gamma is a nonnegative integer.
inline double log_generalized_binomial(double gamma, int n) {
  const double rounded = std::round(gamma);
  if (std::abs(gamma - rounded) < 1e-12 && rounded >= 0 && rounded + n <= 60) {
    return log_binomial(static_cast<int>(rounded) + n, n);
  }
  return std::lgamma(gamma + n + 1.0) - std::lgamma(gamma + 1.0) - std::lgamma(n + 1.0);
}

inline double generalized_binomial(double gamma, int n) { return std::exp(log_generalized_binomial(gamma, n)); }

}  // namespace btiso
