#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "btiso/error.hpp"

namespace btiso {

inline constexpr int kMaxGround = 16;

/// Subset of [n] = {1,...,n} stored as a bitmask (bit i-1 <-> element i).
class IndexSet {
 public:
  constexpr IndexSet() = default;

  IndexSet(std::uint32_t bits, int ground_n) : bits_(bits), ground_n_(ground_n) {
    if (ground_n < 0 || ground_n > kMaxGround) {
      throw InputError("IndexSet: ground set size must lie in [0, 16]");
    }
    if ((bits & ~full_mask(ground_n)) != 0) {
      throw InputError("IndexSet: element outside [n]");
    }
  }

  /// Builds a set from 1-based element labels.
  static IndexSet of(std::span<const int> elements, int ground_n) {
    std::uint32_t bits = 0;
    for (int e : elements) {
      if (e < 1 || e > ground_n) {
        throw InputError("IndexSet: element " + std::to_string(e) + " outside [1," +
                         std::to_string(ground_n) + "]");
      }
      bits |= 1u << (e - 1);
    }
    return IndexSet(bits, ground_n);
  }
  static IndexSet of(std::initializer_list<int> elements, int ground_n) {
    return of(std::span<const int>(elements.begin(), elements.size()), ground_n);
  }

  static IndexSet full(int ground_n) { return IndexSet(full_mask(ground_n), ground_n); }
  static IndexSet empty_of(int ground_n) { return IndexSet(0, ground_n); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int ground_n() const { return ground_n_; }
  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  bool contains(int element) const {
    return element >= 1 && element <= ground_n_ && ((bits_ >> (element - 1)) & 1u) != 0;
  }
  bool is_subset_of(const IndexSet& other) const { return (bits_ & ~other.bits_) == 0; }

  /// Complement inside [n].
  IndexSet complement() const { return IndexSet(full_mask(ground_n_) & ~bits_, ground_n_); }

  friend IndexSet operator|(const IndexSet& a, const IndexSet& b) {
    return IndexSet(a.bits_ | b.bits_, max_ground(a, b));
  }
  friend IndexSet operator&(const IndexSet& a, const IndexSet& b) {
    return IndexSet(a.bits_ & b.bits_, max_ground(a, b));
  }
  /// Set difference.
  friend IndexSet operator-(const IndexSet& a, const IndexSet& b) {
    return IndexSet(a.bits_ & ~b.bits_, max_ground(a, b));
  }
  friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.bits_ == b.bits_; }

  /// Canonical order: by cardinality, then by bitmask value.
  friend bool canonical_less(const IndexSet& a, const IndexSet& b) {
    const int sa = a.size();
    const int sb = b.size();
    return sa != sb ? sa < sb : a.bits_ < b.bits_;
  }

  /// Ascending 1-based labels.
  std::vector<int> elements() const {
    std::vector<int> out;
    for (int i = 1; i <= ground_n_; ++i) {
      if (contains(i)) out.push_back(i);
    }
    return out;
  }

  /// Position of `element` among the members, 0-based; -1 when absent.
  int rank_of(int element) const {
    if (!contains(element)) return -1;
    return std::popcount(bits_ & ((1u << (element - 1)) - 1u));
  }

  /// Compact text form used in logs and JSON keys: "12", "134"; comma separated when n > 9.
  std::string to_string() const {
    std::string out;
    for (int e : elements()) {
      if (!out.empty() && ground_n_ > 9) out += ',';
      out += std::to_string(e);
    }
    return out.empty() ? std::string("{}") : out;
  }

  static constexpr std::uint32_t full_mask(int n) {
    return n >= 32 ? ~0u : ((1u << n) - 1u);
  }

 private:
  static int max_ground(const IndexSet& a, const IndexSet& b) {
    return a.ground_n_ > b.ground_n_ ? a.ground_n_ : b.ground_n_;
  }

  std::uint32_t bits_ = 0;
  int ground_n_ = 0;
};

/// All subsets of `s` (including empty and `s`) in canonical order.
inline std::vector<IndexSet> subsets_canonical(const IndexSet& s, bool include_empty = true) {
  std::vector<IndexSet> out;
  const std::uint32_t full = s.bits();
  std::uint32_t sub = 0;
  do {
    if (sub != 0 || include_empty) out.emplace_back(sub, s.ground_n());
    sub = (sub - full) & full;
  } while (sub != 0);
  std::stable_sort(out.begin(), out.end(),
                   [](const IndexSet& a, const IndexSet& b) { return canonical_less(a, b); });
  return out;
}

/// Parses "1,2,3" (commas or spaces) into an IndexSet over [n].
inline IndexSet parse_index_set(const std::string& text, int ground_n) {
  std::vector<int> elements;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    try {
      elements.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw InputError("cannot parse index '" + token + "'");
    }
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '{' || ch == '}') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  return IndexSet::of(elements, ground_n);
}

}  // namespace btiso
