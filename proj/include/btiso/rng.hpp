#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace btiso {

/// Counter-based splittable generator (SplitMix64 finalizer over a keyed counter).
/// Output depends only on (key, counter), so results are reproducible on every
/// platform and independent of thread scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : key_(mix(seed ^ 0x9e3779b97f4a7c15ULL)) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    // Multiply-shift; the bias is below 2^-40 for the bounds used here.
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  double normal() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  /// Independent child stream.
  Rng split(std::uint64_t stream) const {
    Rng child;
    child.key_ = mix(key_ ^ mix(stream + 0x632be59bd9b4e019ULL));
    return child;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// Uniform point in the Euclidean unit ball of R^n.
inline std::vector<double> uniform_in_ball(Rng& rng, int n) {
  std::vector<double> x(n);
  double sq = 0.0;
  for (auto& v : x) {
    v = rng.normal();
    sq += v * v;
  }
  const double r = std::pow(rng.uniform(), 1.0 / n) / std::sqrt(sq);
  for (auto& v : x) v *= r;
  return x;
}

/// Uniform barycentric weights on the (k)-simplex: k+1 nonnegative entries summing to 1.
inline std::vector<double> uniform_barycentric(Rng& rng, int k) {
  std::vector<double> w(k + 1);
  double total = 0.0;
  for (auto& v : w) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    v = -std::log(u);
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace btiso
