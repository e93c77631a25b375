#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "btiso/error.hpp"
#include "btiso/hanner.hpp"
#include "btiso/json_io.hpp"
#include "btiso/polytope.hpp"
#include "btiso/rng.hpp"

namespace btiso {

enum class CorpusKind { random_hull, box, crosspolytope, simplex, hanner, explicit_file };

inline std::string to_string(CorpusKind k) {
  switch (k) {
    case CorpusKind::random_hull: return "random-hull";
    case CorpusKind::box: return "box";
    case CorpusKind::crosspolytope: return "crosspolytope";
    case CorpusKind::simplex: return "simplex";
    case CorpusKind::hanner: return "hanner";
    case CorpusKind::explicit_file: return "explicit-file";
  }
  return "?";
}

inline CorpusKind corpus_kind_from(const std::string& s) {
  for (auto k : {CorpusKind::random_hull, CorpusKind::box, CorpusKind::crosspolytope, CorpusKind::simplex,
                 CorpusKind::hanner, CorpusKind::explicit_file}) {
    if (to_string(k) == s) return k;
  }
  throw InputError("unknown corpus kind " + s);
}

struct CorpusSpec {
  CorpusKind kind = CorpusKind::random_hull;
  int n = 3;
  int count = 10;
  std::uint64_t seed = 0;
  int points = 0;            // random-hull point count; 0 selects 3n
  double scale_lo = 0.5;     // per-axis scale or radius range
  double scale_hi = 2.0;
  std::string file;          // explicit-file source
};

struct CorpusItem {
  std::string id;
  std::uint64_t seed = 0;
  VPolytope body;
};

inline void check_corpus_spec(const CorpusSpec& s) {
  if (s.count < 1) throw InputError("corpus count must be positive");
  if (s.n < 1) throw InputError("corpus dimension must be positive");
  const int limit = s.kind == CorpusKind::hanner ? 6 : kMaxAmbient;
  if (s.n > limit) throw CapacityError("corpus kind " + to_string(s.kind) + " allows n <= " + std::to_string(limit));
  if (!(s.scale_lo > 0) || !(s.scale_hi >= s.scale_lo)) throw InputError("scale range must satisfy 0 < lo <= hi");
  if (s.kind == CorpusKind::explicit_file && s.file.empty()) throw InputError("explicit-file corpus needs a file");
}

/// One body; `rng` is the item's own stream.
inline VPolytope corpus_body(const CorpusSpec& s, Rng& rng) {
  const int n = s.n;
  switch (s.kind) {
    case CorpusKind::random_hull: {
      const int count = s.points > 0 ? s.points : 3 * n;
      if (count < n + 1) throw InputError("random-hull needs at least n + 1 points");
      Point axis(n);
      for (auto& a : axis) a = rng.uniform(s.scale_lo, s.scale_hi);
      for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Point> pts;
        for (int i = 0; i < count; ++i) {
          Point x = uniform_in_ball(rng, n);
          for (int c = 0; c < n; ++c) x[c] *= axis[c];
          pts.push_back(std::move(x));
        }
        VPolytope p(std::move(pts));
        if (p.full_dimensional()) return p;
      }
      throw DegenerateError("random hull stayed degenerate");
    }
    case CorpusKind::box: {
      Point lo(n), hi(n);
      for (int c = 0; c < n; ++c) {
        const double centre = rng.uniform(-1.0, 1.0);
        const double half = rng.uniform(s.scale_lo, s.scale_hi) / 2.0;
        lo[c] = centre - half;
        hi[c] = centre + half;
      }
      return make_box(lo, hi);
    }
    case CorpusKind::crosspolytope: {
      Point radii(n);
      for (auto& r : radii) r = rng.uniform(s.scale_lo, s.scale_hi);
      return make_cross_polytope(radii);
    }
    case CorpusKind::simplex: {
      for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Point> pts;
        for (int i = 0; i <= n; ++i) {
          Point x = uniform_in_ball(rng, n);
          for (auto& v : x) v *= s.scale_hi;
          pts.push_back(std::move(x));
        }
        VPolytope p(std::move(pts));
        if (p.full_dimensional() && p.vertices().size() == static_cast<std::size_t>(n + 1) &&
            p.volume() > 1e-3 * std::pow(s.scale_hi, n) / std::tgamma(n + 1.0)) {
          return p;
        }
      }
      throw DegenerateError("random simplex stayed degenerate");
    }
    case CorpusKind::hanner:
      return generate_hanner(n, rng.next_u64());
    case CorpusKind::explicit_file:
      return load_polytope(s.file);
  }
  throw InputError("unknown corpus kind");
}

/// Item i draws from Rng(seed).split(i), so items do not depend on each other.
inline std::vector<CorpusItem> generate_corpus(const CorpusSpec& s) {
  check_corpus_spec(s);
  const Rng root(s.seed);
  std::vector<CorpusItem> items;
  for (int i = 0; i < s.count; ++i) {
    Rng rng = root.split(static_cast<std::uint64_t>(i));
    char id[64];
    std::snprintf(id, sizeof id, "%s-n%d-%04d", to_string(s.kind).c_str(), s.n, i);
    CorpusItem item{id, s.seed, corpus_body(s, rng)};
    if (item.body.ambient_dim() != s.n) throw InputError("explicit file dimension differs from --n");
    items.push_back(std::move(item));
  }
  return items;
}

inline Json corpus_item_json(const CorpusItem& item, const CorpusSpec& s) {
  Json j = polytope_json(item.body);
  j["id"] = item.id;
  j["kind"] = to_string(s.kind);
  j["seed"] = item.seed;
  return j;
}

/// Writes <dir>/<id>.json for every item; returns the paths in item order.
inline std::vector<std::string> write_corpus(const std::vector<CorpusItem>& items, const CorpusSpec& s,
                                             const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir + ": " + ec.message());
  std::vector<std::string> paths;
  for (const auto& item : items) {
    const std::string path = (fs::path(dir) / (item.id + ".json")).string();
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << corpus_item_json(item, s).dump() << '\n';
    paths.push_back(path);
  }
  return paths;
}

/// Reads every *.json of a corpus directory, sorted by file name.
inline std::vector<std::pair<std::string, VPolytope>> read_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, VPolytope>> out;
  for (const auto& f : files) {
    const Json j = load_json(f.string());
    out.emplace_back(j.value("id", f.stem().string()), polytope_from_json(j));
  }
  return out;
}

}  // namespace btiso
