#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "btiso/error.hpp"
#include "btiso/index_set.hpp"

namespace btiso {

/// An s-cover of sigma: a multiset of nonempty subsets of sigma such that every
/// element of sigma lies in exactly s of them.
struct Cover {
  IndexSet sigma;
  std::vector<IndexSet> parts;
  int s = 0;

  int m() const { return static_cast<int>(parts.size()); }

  /// "12|23|13"
  std::string to_string() const {
    std::string out;
    for (const auto& p : parts) {
      if (!out.empty()) out += '|';
      out += p.to_string();
    }
    return out;
  }

  friend bool operator==(const Cover& a, const Cover& b) {
    return a.sigma == b.sigma && a.s == b.s && a.parts == b.parts;
  }
};

inline bool parts_less(const std::vector<IndexSet>& a, const std::vector<IndexSet>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const IndexSet& x, const IndexSet& y) { return canonical_less(x, y); });
}

/// Same cover with parts sorted by (size, bitmask).
inline Cover canonical(Cover c) {
  std::sort(c.parts.begin(), c.parts.end(), [](const IndexSet& x, const IndexSet& y) { return canonical_less(x, y); });
  return c;
}

/// Order used for enumeration output: fewer parts first, then parts lexicographically.
inline bool cover_less(const Cover& a, const Cover& b) {
  if (a.m() != b.m()) return a.m() < b.m();
  return parts_less(a.parts, b.parts);
}

/// Checks that `parts` is a uniform cover of `sigma` and infers s. Part order is kept.
inline Cover validate_cover(const IndexSet& sigma, const std::vector<IndexSet>& parts) {
  if (parts.empty()) throw InputError("a cover needs at least one part");
  if (sigma.empty()) throw InputError("cannot cover the empty set");
  std::vector<int> count(kMaxGround + 1, 0);
  for (const auto& p : parts) {
    if (p.empty()) throw InputError("cover part is empty");
    if (!p.is_subset_of(sigma)) throw InputError("cover part " + p.to_string() + " is not inside " + sigma.to_string());
    for (int e : p.elements()) ++count[e];
  }
  const auto elems = sigma.elements();
  const int s = count[elems.front()];
  for (int e : elems) {
    if (count[e] != s) {
      throw InputError("non-uniform cover: element " + std::to_string(e) + " covered " + std::to_string(count[e]) +
                       " times, element " + std::to_string(elems.front()) + " covered " + std::to_string(s) +
                       " times");
    }
  }
  return Cover{sigma, parts, s};
}

/// (sigma \ sigma_1, ..., sigma \ sigma_m), an (m - s)-cover.
inline Cover complement_cover(const Cover& c) {
  std::vector<IndexSet> parts;
  for (const auto& p : c.parts) {
    const IndexSet q = c.sigma - p;
    if (q.empty()) throw InputError("complement cover: part equals sigma");
    parts.push_back(q);
  }
  return Cover{c.sigma, std::move(parts), c.m() - c.s};
}

/// Atoms of the Boolean algebra generated by the parts inside sigma: elements are
/// grouped by their membership signature. Sorted canonically.
inline std::vector<IndexSet> induced_one_cover(const Cover& c) {
  std::map<std::vector<bool>, std::uint32_t> groups;
  for (int e : c.sigma.elements()) {
    std::vector<bool> signature;
    signature.reserve(c.parts.size());
    for (const auto& p : c.parts) signature.push_back(p.contains(e));
    groups[signature] |= 1u << (e - 1);
  }
  std::vector<IndexSet> atoms;
  for (const auto& [sig, bits] : groups) atoms.emplace_back(bits, c.sigma.ground_n());
  std::sort(atoms.begin(), atoms.end(), [](const IndexSet& x, const IndexSet& y) { return canonical_less(x, y); });
  return atoms;
}

inline constexpr int kMaxIrreducibleParts = 12;

/// True iff no nonempty proper sub-multiset of the parts is itself a cover of sigma.
inline bool is_irreducible(const Cover& c) {
  const int m = c.m();
  if (m > kMaxIrreducibleParts) {
    throw CapacityError("irreducibility test limited to " + std::to_string(kMaxIrreducibleParts) + " parts");
  }
  const auto elems = c.sigma.elements();
  for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
    std::vector<int> count(kMaxGround + 1, 0);
    for (int i = 0; i < m; ++i) {
      if ((mask >> i) & 1u) {
        for (int e : c.parts[i].elements()) ++count[e];
      }
    }
    const int s = count[elems.front()];
    if (s == 0) continue;
    bool uniform = true;
    for (int e : elems) uniform = uniform && count[e] == s;
    if (uniform) return false;
  }
  return true;
}

struct CoverEnumeration {
  std::vector<Cover> covers;
  bool cap_bound = false;  // true when a cap pruned at least one candidate
  std::uint64_t explored = 0;
};

inline constexpr int kMaxEnumerationSigma = 5;

namespace detail {

inline void check_enumeration_args(const IndexSet& sigma, int& max_m, int& max_mult) {
  const int k = sigma.size();
  if (k == 0) throw InputError("cannot enumerate covers of the empty set");
  if (k > kMaxEnumerationSigma) throw CapacityError("cover enumeration is limited to |sigma| <= 5");
  if (max_m <= 0) max_m = 1 << k;
  if (max_mult <= 0) max_mult = k;
}

inline Cover cover_from_counts(const IndexSet& sigma, const std::vector<IndexSet>& types,
                               const std::vector<int>& counts) {
  std::vector<IndexSet> parts;
  for (std::size_t t = 0; t < types.size(); ++t) {
    for (int r = 0; r < counts[t]; ++r) parts.push_back(types[t]);
  }
  return validate_cover(sigma, parts);
}

}  // namespace detail

/// All irreducible covers of sigma with at most `max_m` parts and each part
/// repeated at most `max_mult` times (0 selects the defaults 2^|sigma| and |sigma|).
///
/// Irreducible covers are the minimal nonzero nonnegative integer solutions of the
/// homogeneous system "coverage of element j equals coverage of the first element",
/// found by Contejean-Devie completion.
inline CoverEnumeration enumerate_irreducible_covers(const IndexSet& sigma, int max_m = 0, int max_mult = 0,
                                                     std::uint64_t budget = 50'000'000) {
  detail::check_enumeration_args(sigma, max_m, max_mult);
  const auto types = subsets_canonical(sigma, false);
  const auto elems = sigma.elements();
  const int k = static_cast<int>(elems.size());
  const int T = static_cast<int>(types.size());
  // Defect of each part type: membership of element j minus membership of the first element.
  std::vector<std::vector<int>> defect(T, std::vector<int>(k - 1));
  for (int t = 0; t < T; ++t) {
    const int first = types[t].contains(elems[0]) ? 1 : 0;
    for (int j = 1; j < k; ++j) defect[t][j - 1] = (types[t].contains(elems[j]) ? 1 : 0) - first;
  }

  CoverEnumeration result;
  std::vector<std::vector<int>> basis;
  auto dominates_basis = [&](const std::vector<int>& x) {
    for (const auto& b : basis) {
      bool ge = true;
      for (int t = 0; t < T && ge; ++t) ge = x[t] >= b[t];
      if (ge) return true;
    }
    return false;
  };

  std::set<std::vector<int>> frontier;
  for (int t = 0; t < T; ++t) {
    std::vector<int> x(T, 0);
    x[t] = 1;
    frontier.insert(x);
  }
  int level = 1;
  while (!frontier.empty()) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> open;  // (x, D(x))
    for (const auto& x : frontier) {
      std::vector<int> dx(k - 1, 0);
      for (int t = 0; t < T; ++t) {
        if (x[t] == 0) continue;
        for (int j = 0; j < k - 1; ++j) dx[j] += x[t] * defect[t][j];
      }
      if (std::all_of(dx.begin(), dx.end(), [](int v) { return v == 0; })) {
        basis.push_back(x);
      } else {
        open.emplace_back(x, std::move(dx));
      }
    }
    std::set<std::vector<int>> next;
    for (const auto& [x, dx] : open) {
      for (int t = 0; t < T; ++t) {
        int inner = 0;
        for (int j = 0; j < k - 1; ++j) inner += dx[j] * defect[t][j];
        if (inner >= 0) continue;
        if (++result.explored > budget) throw CapacityError("cover enumeration budget exhausted");
        if (level + 1 > max_m || x[t] + 1 > max_mult) {
          result.cap_bound = true;
          continue;
        }
        std::vector<int> y = x;
        ++y[t];
        if (dominates_basis(y)) continue;
        next.insert(std::move(y));
      }
    }
    frontier = std::move(next);
    ++level;
  }

  for (const auto& b : basis) result.covers.push_back(canonical(detail::cover_from_counts(sigma, types, b)));
  std::sort(result.covers.begin(), result.covers.end(), cover_less);
  return result;
}

/// Every uniform cover of sigma (reducible ones included) within the caps.
inline CoverEnumeration enumerate_covers(const IndexSet& sigma, int max_m = 0, int max_mult = 0,
                                         std::uint64_t budget = 20'000'000) {
  detail::check_enumeration_args(sigma, max_m, max_mult);
  const auto types = subsets_canonical(sigma, false);
  const auto elems = sigma.elements();
  const int T = static_cast<int>(types.size());
  CoverEnumeration result;
  std::vector<int> counts(T, 0);
  std::vector<int> coverage(kMaxGround + 1, 0);

  auto uniform = [&] {
    const int s = coverage[elems.front()];
    if (s == 0) return false;
    for (int e : elems) {
      if (coverage[e] != s) return false;
    }
    return true;
  };
  // Depth-first over part types in canonical order; `used` parts so far.
  auto dfs = [&](auto&& self, int t, int used) -> void {
    if (++result.explored > budget) throw CapacityError("cover enumeration budget exhausted");
    if (t == T) {
      if (used > 0 && uniform()) result.covers.push_back(canonical(detail::cover_from_counts(sigma, types, counts)));
      return;
    }
    const auto members = types[t].elements();
    for (int r = 0;; ++r) {
      self(self, t + 1, used + r);
      if (used + r + 1 > max_m || r + 1 > max_mult) break;
      ++counts[t];
      for (int e : members) ++coverage[e];
    }
    for (int e : members) coverage[e] -= counts[t];
    counts[t] = 0;
  };
  dfs(dfs, 0, 0);
  // Uniform covers are closed under addition, so the caps always cut the list.
  result.cap_bound = true;
  std::sort(result.covers.begin(), result.covers.end(), cover_less);
  return result;
}

/// Relabels a cover of [k] onto sigma (|sigma| = k), mapping element r to the r-th member.
inline Cover relabel(const Cover& c, const IndexSet& sigma) {
  const auto elems = sigma.elements();
  std::vector<IndexSet> parts;
  for (const auto& p : c.parts) {
    std::uint32_t bits = 0;
    for (int e : p.elements()) bits |= 1u << (elems[e - 1] - 1);
    parts.emplace_back(bits, sigma.ground_n());
  }
  return Cover{sigma, std::move(parts), c.s};
}

/// Thread-safe cache of irreducible covers of [k], relabeled on demand.
class CoverCatalog {
 public:
  CoverCatalog(int max_m = 0, int max_mult = 0) : max_m_(max_m), max_mult_(max_mult) {}

  CoverEnumeration irreducible(const IndexSet& sigma) {
    const int k = sigma.size();
    CoverEnumeration base;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(k);
      if (it == cache_.end()) {
        it = cache_.emplace(k, enumerate_irreducible_covers(IndexSet::full(k), max_m_, max_mult_)).first;
      }
      base = it->second;
    }
    CoverEnumeration out{{}, base.cap_bound, base.explored};
    for (const auto& c : base.covers) out.covers.push_back(relabel(c, sigma));
    return out;
  }

 private:
  int max_m_;
  int max_mult_;
  std::mutex mu_;
  std::map<int, CoverEnumeration> cache_;
};

/// Parses "12|23|13" or "1,2|2,3" into parts over [n].
inline std::vector<IndexSet> parse_parts(const std::string& text, int ground_n) {
  std::vector<IndexSet> parts;
  std::string token;
  auto flush = [&] {
    if (token.empty()) throw InputError("empty part in cover text '" + text + "'");
    if (token.find(',') == std::string::npos && ground_n <= 9 && token.size() > 1) {
      std::string spaced;
      for (char ch : token) {
        spaced += ch;
        spaced += ',';
      }
      token = spaced;
    }
    parts.push_back(parse_index_set(token, ground_n));
    token.clear();
  };
  for (char ch : text) {
    if (ch == '|' || ch == ';') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  return parts;
}

}  // namespace btiso
