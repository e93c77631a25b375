#pragma once

// JSON encodings of bodies, covers, reports and witnesses.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "btiso/cover.hpp"
#include "btiso/equality.hpp"
#include "btiso/error.hpp"
#include "btiso/hanner.hpp"
#include "btiso/inequality.hpp"
#include "btiso/polytope.hpp"

namespace btiso {

using Json = nlohmann::json;

/// Finite values as numbers; infinities and NaN as strings (JSON has no literal for them).
inline Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("expected a number, got " + j.dump());
}

/// Significant-digit rounding for human-facing volume output.
inline double round_significant(double v, int digits = 12) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

inline Json point_json(const Point& p) {
  Json a = Json::array();
  for (double v : p) a.push_back(number(v));
  return a;
}

inline Json index_set_json(const IndexSet& s) { return s.elements(); }

inline IndexSet index_set_from_json(const Json& j, int n) {
  if (!j.is_array()) throw InputError("index set must be an array of integers");
  std::vector<int> e;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InputError("index set entries must be integers");
    e.push_back(v.get<int>());
  }
  return IndexSet::of(e, n);
}

/// Inverse of IndexSet::to_string: digit strings for n <= 9, comma lists otherwise.
inline IndexSet compact_index_set(const std::string& text, int n) {
  if (text == "{}") return IndexSet(0, n);
  if (n > 9 || text.find(',') != std::string::npos) return parse_index_set(text, n);
  std::vector<int> e;
  for (char ch : text) {
    if (ch < '1' || ch > '9') throw InputError("cannot parse index set '" + text + "'");
    e.push_back(ch - '0');
  }
  return IndexSet::of(e, n);
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + what + ": " + e.what());
  }
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// ---- polytopes ----

inline Json polytope_json(const VPolytope& p) {
  Json v = Json::array();
  for (const auto& x : p.vertices()) v.push_back(point_json(x));
  return {{"n", p.ambient_dim()}, {"vertices", v}};
}

inline Point point_from_json(const Json& j, int n, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw InputError(what + " must be an array of " + std::to_string(n) + " numbers");
  }
  Point x;
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(what + " entries must be numbers");
    x.push_back(v.get<double>());
  }
  return x;
}

/// {"n", "vertices"} or {"n", "halfspaces": [{"a", "b"}]}.
inline VPolytope polytope_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
    throw InputError("polytope JSON needs an integer field \"n\"");
  }
  const int n = j["n"].get<int>();
  if (n < 1) throw InputError("polytope dimension must be positive");
  if (n > kMaxAmbient) throw CapacityError("polytope dimension exceeds " + std::to_string(kMaxAmbient));
  if (j.contains("vertices")) {
    if (!j["vertices"].is_array() || j["vertices"].empty()) throw InputError("\"vertices\" must be a nonempty array");
    std::vector<Point> pts;
    for (const auto& v : j["vertices"]) pts.push_back(point_from_json(v, n, "vertex"));
    return VPolytope(std::move(pts));
  }
  if (j.contains("halfspaces")) {
    if (!j["halfspaces"].is_array() || j["halfspaces"].empty()) {
      throw InputError("\"halfspaces\" must be a nonempty array");
    }
    HPolytope h;
    h.ambient_dim = n;
    double scale = 0.0;
    for (const auto& r : j["halfspaces"]) {
      if (!r.is_object() || !r.contains("a") || !r.contains("b") || !r["b"].is_number()) {
        throw InputError("halfspace entries need \"a\" and numeric \"b\"");
      }
      Point a = point_from_json(r["a"], n, "halfspace normal");
      const double len = linalg::norm(a);
      if (!(len > 0.0)) throw InputError("halfspace normal is zero");
      double b = r["b"].get<double>() / len;
      for (auto& v : a) v /= len;
      scale = std::max(scale, std::abs(b));
      h.rows.push_back({std::move(a), b});
    }
    h.scale = std::max(scale, 1.0);
    return vertices_of(h);
  }
  throw InputError("polytope JSON needs \"vertices\" or \"halfspaces\"");
}

inline VPolytope load_polytope(const std::string& path) { return polytope_from_json(load_json(path)); }

// ---- covers ----

inline Json cover_json(const Cover& c) {
  Json parts = Json::array();
  for (const auto& p : c.parts) parts.push_back(index_set_json(p));
  return {{"sigma", index_set_json(c.sigma)}, {"parts", parts}, {"s", c.s}, {"text", c.to_string()}};
}

inline Cover cover_from_json(const Json& j, int n) {
  if (!j.is_object() || !j.contains("sigma") || !j.contains("parts") || !j["parts"].is_array()) {
    throw InputError("cover JSON needs \"sigma\" and \"parts\"");
  }
  const IndexSet sigma = index_set_from_json(j["sigma"], n);
  std::vector<IndexSet> parts;
  for (const auto& p : j["parts"]) parts.push_back(index_set_from_json(p, n));
  return validate_cover(sigma, parts);
}

// ---- reports ----

inline Json report_json(const InequalityReport& r) {
  Json j = {{"name", r.name},         {"lhs", number(r.lhs)},         {"rhs", number(r.rhs)},
            {"log_lhs", number(r.log_lhs)}, {"log_rhs", number(r.log_rhs)}, {"log_slack", number(r.log_slack)},
            {"holds", r.holds},       {"tol", number(r.tol)},         {"context", r.context}};
  if (r.std_error != 0.0) j["std_error"] = number(r.std_error);
  if (!r.details.empty()) {
    Json d = Json::object();
    for (const auto& [k, v] : r.details) d[k] = number(v);
    j["details"] = d;
  }
  return j;
}

inline Json audit_json(const AppendixAudit& a) {
  Json steps = Json::array();
  for (const auto& s : a.steps) steps.push_back(report_json(s));
  Json parts = Json::array();
  for (const auto& s : a.berwald_parts) parts.push_back(report_json(s));
  return {{"name", "appendix"},
          {"holds", a.total.holds && a.chain_consistent &&
                        std::all_of(a.steps.begin(), a.steps.end(), [](const auto& s) { return s.holds; })},
          {"trivial", a.trivial},
          {"total", report_json(a.total)},
          {"steps", steps},
          {"berwald_parts", parts},
          {"chain_log_slack", number(a.chain_log_slack)},
          {"chain_std_error", number(a.chain_std_error)},
          {"chain_consistent", a.chain_consistent},
          {"evaluations", a.evaluations}};
}

inline Json condition_json(const ConditionReport& c) {
  Json tr = Json::array();
  for (const auto& z : c.fitted_translations) tr.push_back(point_json(z));
  Json k = Json::object();
  for (const auto& [name, v] : c.constants) k[name] = number(v);
  return {{"name", c.name}, {"holds", c.holds}, {"max_residual", number(c.max_residual)},
          {"fitted_translations", tr}, {"constants", k}};
}

inline Json characterization_json(const CharacterizationReport& r) {
  Json induced = Json::array();
  for (const auto& a : r.induced) induced.push_back(index_set_json(a));
  return {{"name", "characterization"},
          {"sigma", index_set_json(r.sigma)},
          {"cover", cover_json(r.cover)},
          {"induced", induced},
          {"apex_point", point_json(r.apex_point)},
          {"equality_slack", number(r.equality_slack)},
          {"equality", r.equality},
          {"inequality", report_json(r.inequality)},
          {"cond1", condition_json(r.cond1)},
          {"cond2", condition_json(r.cond2)},
          {"cond3", condition_json(r.cond3)},
          {"conditions_hold", r.conditions_hold},
          {"verdict_consistent", r.verdict_consistent},
          {"nodes", r.nodes},
          {"tol", number(r.tol)}};
}

inline Json conical_json(const ConicalFit& f) {
  return {{"name", "conical"},           {"apex_point", point_json(f.apex_point)},
          {"sup_value", number(f.sup_value)}, {"residual", number(f.residual)},
          {"conical", f.conical},        {"slice_residual", number(f.slice_residual)},
          {"slices_scale", f.slices_scale}, {"nodes", f.nodes},
          {"base", polytope_json(f.base)}};
}

// ---- Hanner witnesses ----

inline Json tuple_map_json(const std::map<std::uint32_t, double>& t, int n) {
  Json j = Json::object();
  for (const auto& [bits, v] : t) {
    if (bits == 0) continue;
    j[IndexSet(bits, n).to_string()] = number(v);
  }
  return j;
}

inline Json minimal_tuple_json(const MinimalTuple& mt) {
  Json order = Json::array();
  for (const auto& tau : mt.order) order.push_back(tau.to_string());
  return {{"name", "minimal_tuple"},
          {"sigma", index_set_json(mt.sigma)},
          {"t", tuple_map_json(mt.t, mt.ratios.n)},
          {"x_sigma", number(mt.ratios.x_sigma)},
          {"d", tuple_map_json(mt.ratios.d, mt.ratios.n)},
          {"lower_bound", number(mt.lower_bound)},
          {"upper_bound", number(mt.upper_bound)},
          {"bounds_ok", mt.bounds_ok},
          {"product_residual", number(mt.product_residual)},
          {"minimal", mt.minimal},
          {"cap_bound", mt.cap_bound},
          {"covers_used", mt.covers_used},
          {"escalations", mt.escalations},
          {"active", mt.active},
          {"lp_order", order},
          {"verified", mt.verified},
          {"diagnostic", mt.diagnostic}};
}

inline Json certificate_json(const Certificate& c) {
  return {{"name", c.name}, {"lhs", number(c.lhs)}, {"rhs", number(c.rhs)},
          {"residual", number(c.residual)}, {"tol", number(c.tol)}, {"pass", c.pass}};
}

inline Json certificates_json(const HannerWitness& w) {
  Json dom = Json::array();
  for (const auto& c : w.projection_dominance) dom.push_back(certificate_json(c));
  Json cross = Json::array();
  for (const auto& c : w.closed_vs_hull) cross.push_back(certificate_json(c));
  return {{"vol_equal", certificate_json(w.vol_equal)},
          {"L_volume", certificate_json(w.l_volume)},
          {"projection_dominance", dom},
          {"closed_vs_hull", cross},
          {"all_pass", w.all_pass}};
}

inline Json witness_json(const HannerWitness& w) {
  Json c = Json::object();
  for (const auto& [i, v] : w.c) c[std::to_string(i)] = number(v);
  Json l;
  if (w.l_mode == HannerWitness::LMode::box) {
    l = {{"mode", "box"}, {"b", w.b}};
  } else {
    l = polytope_json(w.l_body);
    l["mode"] = "explicit";
  }
  Json order = Json::array();
  for (const auto& tau : w.lp_order) order.push_back(tau.to_string());
  return {{"sigma", index_set_json(w.sigma)}, {"n", w.n},       {"c", c},
          {"L", l},                           {"t", tuple_map_json(w.t, w.n)},
          {"certificates", certificates_json(w)}, {"lp_order", order}};
}

inline HannerWitness witness_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("sigma") || !j.contains("c") || !j.contains("L")) {
    throw InputError("witness JSON needs \"n\", \"sigma\", \"c\" and \"L\"");
  }
  HannerWitness w;
  w.n = j["n"].get<int>();
  if (w.n < 2 || w.n > kMaxAmbient) throw InputError("witness dimension out of range");
  w.sigma = index_set_from_json(j["sigma"], w.n);
  if (!j["c"].is_object()) throw InputError("witness \"c\" must be an object");
  for (const auto& [key, v] : j["c"].items()) {
    int i = 0;
    try {
      i = std::stoi(key);
    } catch (const std::exception&) {
      throw InputError("witness \"c\" keys must be coordinates");
    }
    if (!w.sigma.contains(i)) throw InputError("witness coefficient outside sigma: " + key);
    w.c[i] = number_from(v);
  }
  const auto& l = j["L"];
  const std::string mode = l.value("mode", "box");
  if (mode == "box") {
    w.l_mode = HannerWitness::LMode::box;
    for (const auto& v : l.at("b")) w.b.push_back(number_from(v));
    if (static_cast<int>(w.b.size()) != w.n - w.sigma.size()) throw InputError("witness L box has wrong dimension");
  } else if (mode == "explicit") {
    w.l_mode = HannerWitness::LMode::explicit_body;
    w.l_body = polytope_from_json(l);
  } else {
    throw InputError("unknown L mode " + mode);
  }
  if (j.contains("t") && j["t"].is_object()) {
    w.t[0] = 1.0;
    for (const auto& [key, v] : j["t"].items()) w.t[compact_index_set(key, w.n).bits()] = number_from(v);
  }
  if (j.contains("lp_order")) {
    for (const auto& s : j["lp_order"]) w.lp_order.push_back(compact_index_set(s.get<std::string>(), w.n));
  }
  return w;
}

}  // namespace btiso
