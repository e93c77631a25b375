#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "btiso/error.hpp"
#include "btiso/json_io.hpp"
#include "btiso/quadrature.hpp"

namespace btiso {

struct Tolerance {
  double exact = 1e-9;
  double certificate = 1e-7;
  double quadrature_sigma = 4.0;
};

/// Run-wide settings; a config file overrides any subset of the defaults.
struct RunConfig {
  std::uint64_t seed = 0;
  Tolerance tolerances;
  QuadratureSpec quadrature;
  int max_m = 0;     // 0: 2^|sigma|
  int max_mult = 0;  // 0: |sigma|
  int sample_nodes = kDefaultSampleNodes;
  std::string output;
};

inline Json config_json(const RunConfig& c) {
  return {{"seed", c.seed},
          {"tolerances",
           {{"exact", c.tolerances.exact},
            {"certificate", c.tolerances.certificate},
            {"quadrature_sigma", c.tolerances.quadrature_sigma}}},
          {"quadrature",
           {{"method", to_string(c.quadrature.method)},
            {"n_samples", c.quadrature.n_samples},
            {"seed", c.quadrature.seed},
            {"grid_level", c.quadrature.grid_level}}},
          {"caps", {{"max_m", c.max_m}, {"max_mult", c.max_mult}}},
          {"sample_nodes", c.sample_nodes},
          {"output", c.output}};
}

inline RunConfig config_from_json(const Json& j, RunConfig c = {}) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  try {
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      c.tolerances.exact = t.value("exact", c.tolerances.exact);
      c.tolerances.certificate = t.value("certificate", c.tolerances.certificate);
      c.tolerances.quadrature_sigma = t.value("quadrature_sigma", c.tolerances.quadrature_sigma);
    }
    if (j.contains("quadrature")) {
      const auto& q = j["quadrature"];
      if (q.contains("method")) {
        const auto m = q["method"].get<std::string>();
        if (m == "mc") {
          c.quadrature.method = QuadratureSpec::Method::mc;
        } else if (m == "grid") {
          c.quadrature.method = QuadratureSpec::Method::grid;
        } else {
          throw InputError("quadrature method must be \"mc\" or \"grid\"");
        }
      }
      c.quadrature.n_samples = q.value("n_samples", c.quadrature.n_samples);
      c.quadrature.seed = q.value("seed", c.quadrature.seed);
      c.quadrature.grid_level = q.value("grid_level", c.quadrature.grid_level);
    }
    if (j.contains("caps")) {
      c.max_m = j["caps"].value("max_m", c.max_m);
      c.max_mult = j["caps"].value("max_mult", c.max_mult);
    }
    c.sample_nodes = j.value("sample_nodes", c.sample_nodes);
    c.output = j.value("output", c.output);
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad config field: ") + e.what());
  }
  if (!(c.tolerances.exact > 0) || !(c.tolerances.certificate > 0) || !(c.tolerances.quadrature_sigma > 0)) {
    throw InputError("tolerances must be positive");
  }
  if (c.max_m < 0 || c.max_mult < 0 || c.sample_nodes < 1 || c.quadrature.n_samples < 1 ||
      c.quadrature.grid_level < 1) {
    throw InputError("caps, node and sample counts must be positive");
  }
  return c;
}

/// FNV-1a of the canonical (sorted-key) dump; identifies the effective settings in reports.
inline std::string config_hash(const RunConfig& c) {
  const std::string text = config_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace btiso
