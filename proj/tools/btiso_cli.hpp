#pragma once

// Command-line front end. run() is separate from main() so tests can drive it
// in-process with string streams.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "btiso/btiso.hpp"

namespace btiso::cli {

enum ExitCode : int { kOk = 0, kViolated = 1, kInputError = 2, kCapacityError = 3 };

struct Context {
  RunConfig config;
  std::string hash;
  std::ostream& out;
  std::ostream& err;

  /// Every report carries the root seed and the hash of the effective config.
  Json envelope(const std::string& command, Json body) const {
    body["command"] = command;
    body["seed"] = config.seed;
    body["config_hash"] = hash;
    return body;
  }
  void emit(const Json& j) const { out << j.dump() << '\n'; }

  QuadratureSpec quadrature() const {
    QuadratureSpec q = config.quadrature;
    q.seed = Rng(config.seed).split(config.quadrature.seed).next_u64();
    return q;
  }
};

inline IndexSet parse_sigma(const std::string& text, int n) {
  if (text.empty()) throw InputError("--sigma is required");
  return parse_index_set(text, n);
}

inline Cover parse_cover(const std::string& text, const IndexSet& sigma, int n) {
  if (text.empty()) throw InputError("--cover is required");
  return validate_cover(sigma, parse_parts(text, n));
}

inline Point parse_point(const std::string& text, int n) {
  Point x;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    try {
      std::size_t used = 0;
      x.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw InputError("cannot parse coordinate '" + token + "'");
    }
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  if (static_cast<int>(x.size()) != n) throw InputError("expected " + std::to_string(n) + " coordinates");
  return x;
}

// ---- poly ----

struct PolyArgs {
  std::string op, file, tau, base;
};

inline int cmd_poly(const Context& ctx, const PolyArgs& a) {
  const VPolytope p = load_polytope(a.file);
  const int n = p.ambient_dim();
  Json j;
  if (a.op == "info") {
    j = {{"n", n},
         {"affine_dim", p.affine_dim()},
         {"vertex_count", p.vertices().size()},
         {"facet_count", p.hrep().rows.size()},
         {"full_dimensional", p.full_dimensional()},
         {"volume", round_significant(p.measure(n))}};
  } else if (a.op == "volume") {
    j = {{"volume", round_significant(p.measure(n))}};
  } else if (a.op == "project") {
    const IndexSet tau = parse_sigma(a.tau, n);
    const VPolytope q = project(p, tau);
    j = polytope_json(q);
    j["tau"] = index_set_json(tau);
    j["volume"] = round_significant(q.measure(tau.size()));
  } else if (a.op == "slice") {
    const IndexSet tau = parse_sigma(a.tau, n);
    const Point base = parse_point(a.base, n);
    const auto s = slice(p.hrep(), base, tau);
    j = {{"tau", index_set_json(tau)}, {"base", point_json(base)}, {"empty", !s.has_value()}};
    j["volume"] = s ? round_significant(s->measure(tau.size())) : 0.0;
    if (s) j["polytope"] = polytope_json(*s);
  } else {
    throw InputError("poly subcommand must be info, volume, project or slice");
  }
  ctx.emit(j);
  return kOk;
}

// ---- covers ----

struct CoversArgs {
  std::string sigma;
  int n = 0;
  bool irreducible = false;
  int max_m = 0, max_mult = 0;
};

inline int cmd_covers(const Context& ctx, const CoversArgs& a) {
  int n = a.n;
  if (n == 0) {
    for (int e : parse_index_set(a.sigma, kMaxGround).elements()) n = std::max(n, e);
  }
  const IndexSet sigma = parse_sigma(a.sigma, n);
  const int max_m = a.max_m > 0 ? a.max_m : ctx.config.max_m;
  const int max_mult = a.max_mult > 0 ? a.max_mult : ctx.config.max_mult;
  const auto e = a.irreducible ? enumerate_irreducible_covers(sigma, max_m, max_mult)
                               : enumerate_covers(sigma, max_m, max_mult);
  Json list = Json::array();
  for (const auto& c : e.covers) list.push_back(cover_json(c));
  ctx.emit({{"sigma", index_set_json(sigma)},
            {"irreducible", a.irreducible},
            {"count", e.covers.size()},
            {"cap_bound", e.cap_bound},
            {"covers", list}});
  return kOk;
}

// ---- check ----

struct CheckArgs {
  std::string kind, file, sigma, cover, tau, h;
  std::optional<double> inject_log_lhs;
};

/// Testing hook: shifts log(lhs) before judging, to exercise the failure path.
inline void inject(InequalityReport& r, double delta) {
  r.log_lhs += delta;
  r.lhs = std::exp(r.log_lhs);
  r.log_slack = r.log_rhs - r.log_lhs;
  r.holds = r.log_slack >= -r.tol;
  r.details.emplace_back("injected_log_lhs", delta);
}

inline int cmd_check(const Context& ctx, const CheckArgs& a) {
  const VPolytope body = load_polytope(a.file);
  const int n = body.ambient_dim();
  ProjectionTable table(body);
  const double tol = ctx.config.tolerances.certificate;
  auto finish_report = [&](InequalityReport r) {
    if (a.inject_log_lhs) inject(r, *a.inject_log_lhs);
    Json j = report_json(r);
    j["kind"] = a.kind;
    ctx.emit(ctx.envelope("check", j));
    return r.holds ? kOk : kViolated;
  };
  if (a.kind == "bt") {
    const IndexSet full = IndexSet::full(n);
    return finish_report(check_bt(table, parse_cover(a.cover, full, n), tol));
  }
  if (a.kind == "conical") {
    const auto fit = conical_hypograph_check(table, parse_sigma(a.h, n), ctx.config.sample_nodes, tol);
    ctx.emit(ctx.envelope("check", conical_json(fit)));
    return fit.conical ? kOk : kViolated;
  }
  const IndexSet sigma = parse_sigma(a.sigma, n);
  if (a.kind == "chain") return finish_report(check_tau_chain(table, sigma, parse_sigma(a.tau, n), tol));
  const Cover cover = parse_cover(a.cover, sigma, n);
  if (a.kind == "local-bt") return finish_report(check_local_bt(table, sigma, cover, tol));
  if (a.kind == "derived") return finish_report(check_theorem1_derived(table, sigma, cover, tol));
  if (a.kind == "appendix") {
    const auto audit = audit_appendix(table, sigma, cover, ctx.quadrature(), ctx.config.tolerances.quadrature_sigma);
    Json j = audit_json(audit);
    ctx.emit(ctx.envelope("check", j));
    return j["holds"].get<bool>() ? kOk : kViolated;
  }
  if (a.kind == "equality") {
    const auto rep = detect_equality(table, sigma, cover, tol, ctx.config.sample_nodes);
    ctx.emit(ctx.envelope("check", characterization_json(rep)));
    return rep.verdict_consistent ? kOk : kViolated;
  }
  throw InputError("unknown check kind " + a.kind);
}

// ---- build / verify ----

struct BuildArgs {
  std::string what, file, sigma, l_mode = "box", l_file;
};

inline int cmd_build(const Context& ctx, const BuildArgs& a) {
  if (a.what != "hanner") throw InputError("build supports only 'hanner'");
  const VPolytope body = load_polytope(a.file);
  const int n = body.ambient_dim();
  ProjectionTable table(body);
  const IndexSet sigma = parse_sigma(a.sigma, n);
  TupleOptions opt;
  opt.max_m = ctx.config.max_m;
  opt.max_mult = ctx.config.max_mult;
  LSpec l;
  if (a.l_mode == "explicit") {
    if (a.l_file.empty()) throw InputError("--L-mode explicit needs --L <file>");
    l.mode = HannerWitness::LMode::explicit_body;
    l.body = load_polytope(a.l_file);
  } else if (a.l_mode != "box") {
    throw InputError("--L-mode must be box or explicit");
  }
  const MinimalTuple mt = minimal_tuple(table, sigma, opt);
  if (!mt.verified) {
    ctx.emit(ctx.envelope("build", {{"minimal_tuple", minimal_tuple_json(mt)}, {"all_pass", false}}));
    ctx.err << "minimal tuple failed verification: " << mt.diagnostic << '\n';
    return kViolated;
  }
  const HannerWitness w = build_hanner(table, mt, l);
  Json j = witness_json(w);
  j["minimal_tuple"] = minimal_tuple_json(mt);
  j["all_pass"] = w.all_pass;
  ctx.emit(ctx.envelope("build", j));
  return w.all_pass ? kOk : kViolated;
}

struct VerifyArgs {
  std::string witness, body;
};

inline int cmd_verify(const Context& ctx, const VerifyArgs& a) {
  HannerWitness w = witness_from_json(load_json(a.witness));
  ProjectionTable table(load_polytope(a.body));
  w = verify_witness(std::move(w), table);
  Json j = certificates_json(w);
  j["sigma"] = index_set_json(w.sigma);
  ctx.emit(ctx.envelope("verify", j));
  return w.all_pass ? kOk : kViolated;
}

// ---- corpus / sweep ----

struct CorpusArgs {
  std::string op, kind = "random-hull", out, file;
  int n = 3, count = 10, points = 0;
  std::optional<std::uint64_t> seed;
  double scale_lo = 0.5, scale_hi = 2.0;
};

inline int cmd_corpus(const Context& ctx, const CorpusArgs& a) {
  if (a.op != "generate") throw InputError("corpus supports only 'generate'");
  if (a.out.empty()) throw InputError("--out directory is required");
  CorpusSpec s;
  s.kind = corpus_kind_from(a.kind);
  s.n = a.n;
  s.count = a.count;
  s.seed = a.seed.value_or(ctx.config.seed);
  s.points = a.points;
  s.scale_lo = a.scale_lo;
  s.scale_hi = a.scale_hi;
  s.file = a.file;
  const auto items = generate_corpus(s);
  const auto paths = write_corpus(items, s, a.out);
  ctx.emit({{"kind", to_string(s.kind)}, {"n", s.n}, {"count", items.size()}, {"seed", s.seed}, {"files", paths}});
  return kOk;
}

struct SweepArgs {
  std::string dir, check = "local-bt", out;
  bool detect_equality = false;
  int max_sigma = 4;
};

struct ItemResult {
  std::string id;
  int checks = 0, violations = 0, failed = 0, inconsistent = 0, capacity_errors = 0, input_errors = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::vector<std::string> equality_hits, problems;
};

inline ItemResult sweep_item(const Context& ctx, const std::string& id, const VPolytope& body, const SweepArgs& a,
                             CoverCatalog& catalog) {
  ItemResult r;
  r.id = id;
  ProjectionTable table(body);
  const int n = table.n();
  const double tol = ctx.config.tolerances.certificate;
  const std::string check = a.detect_equality ? "equality" : a.check;
  auto guarded = [&](const std::string& label, auto&& fn) {
    try {
      fn();
    } catch (const CapacityError& e) {
      ++r.capacity_errors;
      r.problems.push_back(label + ": " + e.what());
    } catch (const VerificationError& e) {
      ++r.failed;
      r.problems.push_back(label + ": " + e.what());
    } catch (const Error& e) {
      ++r.input_errors;
      r.problems.push_back(label + ": " + e.what());
    }
  };
  auto note = [&](const std::string& label, const InequalityReport& rep) {
    ++r.checks;
    r.worst = std::min(r.worst, rep.log_slack);
    if (!rep.holds) {
      ++r.violations;
      r.problems.push_back(label + ": violated");
    }
  };
  if (check == "bt") {
    const IndexSet full = IndexSet::full(n);
    guarded("bt", [&] {
      for (const auto& c : catalog.irreducible(full).covers) note(c.to_string(), check_bt(table, c, tol));
    });
    return r;
  }
  for (const auto& sigma : subsets_canonical(IndexSet::full(n), false)) {
    if (sigma.size() == n || sigma.size() > a.max_sigma) continue;
    const std::string sl = "sigma=" + sigma.to_string();
    if (check == "hanner") {
      guarded(sl, [&] {
        TupleOptions opt;
        const auto w = build_hanner(table, sigma, {}, opt, &catalog);
        ++r.checks;
        if (!w.all_pass) {
          ++r.failed;
          r.problems.push_back(sl + ": certificate failed");
        }
      });
      continue;
    }
    if (check == "appendix" && n - sigma.size() > 2) continue;
    if (check == "appendix") {
      guarded(sl, [&] {
        const auto& covers = catalog.irreducible(sigma).covers;
        const auto audits =
            audit_appendix(table, sigma, covers, ctx.quadrature(), ctx.config.tolerances.quadrature_sigma);
        for (std::size_t i = 0; i < covers.size(); ++i) {
          const std::string label = sl + " cover=" + covers[i].to_string();
          note(label, audits[i].total);
          for (const auto& s : audits[i].steps) note(label + " " + s.name, s);
          if (!audits[i].chain_consistent) {
            ++r.failed;
            r.problems.push_back(label + ": step slacks do not add up");
          }
        }
      });
      continue;
    }
    guarded(sl, [&] {
      for (const auto& c : catalog.irreducible(sigma).covers) {
        const std::string label = sl + " cover=" + c.to_string();
        if (check == "local-bt") {
          note(label, check_local_bt(table, sigma, c, tol));
        } else if (check == "derived") {
          note(label, check_theorem1_derived(table, sigma, c, tol));
        } else if (check == "equality") {
          const auto rep = detect_equality(table, sigma, c, tol, ctx.config.sample_nodes);
          note(label, rep.inequality);
          if (rep.equality) r.equality_hits.push_back(label);
          if (!rep.verdict_consistent) {
            ++r.inconsistent;
            r.problems.push_back(label + ": characterization verdict inconsistent");
          }
        } else {
          throw InputError("unknown sweep check " + check);
        }
      }
    });
  }
  return r;
}

inline Json item_json(const ItemResult& r) {
  return {{"id", r.id},
          {"checks", r.checks},
          {"violations", r.violations},
          {"failed", r.failed},
          {"inconsistent", r.inconsistent},
          {"capacity_errors", r.capacity_errors},
          {"input_errors", r.input_errors},
          {"worst_log_slack", number(r.worst)},
          {"equality_hits", r.equality_hits},
          {"problems", r.problems}};
}

inline int cmd_sweep(const Context& ctx, const SweepArgs& a) {
  const std::string check = a.detect_equality ? "equality" : a.check;
  const std::vector<std::string> known = {"local-bt", "bt", "derived", "hanner", "appendix", "equality"};
  if (std::find(known.begin(), known.end(), check) == known.end()) throw InputError("unknown sweep check " + check);
  const auto t0 = std::chrono::steady_clock::now();
  auto corpus = read_corpus(a.dir);
  std::sort(corpus.begin(), corpus.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  CoverCatalog catalog(ctx.config.max_m, ctx.config.max_mult);
  std::vector<ItemResult> results(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    results[i] = sweep_item(ctx, corpus[i].first, corpus[i].second, a, catalog);
  });

  std::ofstream file;
  std::ostream* sink = &ctx.out;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw InputError("cannot write " + a.out);
    sink = &file;
  }
  ItemResult total;
  std::size_t hits = 0;
  for (const auto& r : results) {
    Json j = ctx.envelope("sweep", item_json(r));
    j["check"] = check;
    *sink << j.dump() << '\n';
    total.checks += r.checks;
    total.violations += r.violations;
    total.failed += r.failed;
    total.inconsistent += r.inconsistent;
    total.capacity_errors += r.capacity_errors;
    total.input_errors += r.input_errors;
    total.worst = std::min(total.worst, r.worst);
    hits += r.equality_hits.size();
  }
  Json summary = {{"summary", true},
                  {"check", check},
                  {"items", results.size()},
                  {"checks", total.checks},
                  {"violations", total.violations},
                  {"failed", total.failed},
                  {"inconsistent", total.inconsistent},
                  {"capacity_errors", total.capacity_errors},
                  {"input_errors", total.input_errors},
                  {"equality_hits", hits},
                  {"worst_log_slack", number(total.worst)}};
  *sink << ctx.envelope("sweep", summary).dump() << '\n';
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ctx.err << "sweep: " << results.size() << " items, " << total.checks << " checks in " << secs << " s\n";
  if (total.violations + total.failed + total.inconsistent > 0) return kViolated;
  if (total.capacity_errors > 0) return kCapacityError;
  if (total.input_errors > 0) return kInputError;
  return kOk;
}

// ---- entry point ----

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projection inequalities, Hanner extremizers and equality analysis for convex polytopes", "btiso"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_file, "JSON file overriding run settings");
  app.add_option("--seed", seed, "root seed (overrides the config)");

  PolyArgs poly;
  auto* poly_cmd = app.add_subcommand("poly", "polytope queries: info, volume, project, slice");
  poly_cmd->add_option("op", poly.op)->required();
  poly_cmd->add_option("file", poly.file)->required();
  poly_cmd->add_option("--tau", poly.tau, "coordinates, e.g. 1,2");
  poly_cmd->add_option("--base", poly.base, "base point for slice, e.g. 0,0,0.5");

  CoversArgs covers;
  auto* covers_cmd = app.add_subcommand("covers", "enumerate uniform covers of sigma");
  covers_cmd->add_option("--sigma", covers.sigma)->required();
  covers_cmd->add_option("--n", covers.n, "ground set size (default: largest element of sigma)");
  covers_cmd->add_flag("--irreducible", covers.irreducible);
  covers_cmd->add_option("--max-m", covers.max_m);
  covers_cmd->add_option("--max-mult", covers.max_mult);

  CheckArgs check;
  double inject_value = 0.0;
  auto* check_cmd = app.add_subcommand("check", "bt | local-bt | derived | chain | appendix | equality | conical");
  check_cmd->add_option("kind", check.kind)->required();
  check_cmd->add_option("file", check.file)->required();
  check_cmd->add_option("--sigma", check.sigma);
  check_cmd->add_option("--cover", check.cover, "parts, e.g. 12|23|13");
  check_cmd->add_option("--tau", check.tau, "subset of sigma for the chain check");
  check_cmd->add_option("--subspace", check.h, "coordinate subspace for the conical check");
  auto* inject_opt = check_cmd->add_option("--inject-log-lhs", inject_value, "testing hook: add to log(lhs)");

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "build the Hanner extremizer of a body");
  build_cmd->add_option("what", build.what)->required();
  build_cmd->add_option("file", build.file)->required();
  build_cmd->add_option("--sigma", build.sigma)->required();
  build_cmd->add_option("--L-mode", build.l_mode);
  build_cmd->add_option("--L", build.l_file, "explicit L body in sigma-perp coordinates");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "recheck a witness against a body");
  verify_cmd->add_option("witness", verify.witness)->required();
  verify_cmd->add_option("body", verify.body)->required();

  CorpusArgs corpus;
  auto* corpus_cmd = app.add_subcommand("corpus", "generate a seeded corpus of bodies");
  corpus_cmd->add_option("op", corpus.op)->required();
  corpus_cmd->add_option("--kind", corpus.kind);
  corpus_cmd->add_option("--n", corpus.n);
  corpus_cmd->add_option("--count", corpus.count);
  corpus_cmd->add_option("--seed", corpus.seed);
  corpus_cmd->add_option("--out", corpus.out);
  corpus_cmd->add_option("--points", corpus.points);
  corpus_cmd->add_option("--scale-lo", corpus.scale_lo);
  corpus_cmd->add_option("--scale-hi", corpus.scale_hi);
  corpus_cmd->add_option("--file", corpus.file);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a check over every body of a corpus directory");
  sweep_cmd->add_option("dir", sweep.dir)->required();
  sweep_cmd->add_option("--check", sweep.check, "local-bt | bt | derived | hanner | appendix | equality");
  sweep_cmd->add_flag("--detect-equality", sweep.detect_equality);
  sweep_cmd->add_option("--max-sigma", sweep.max_sigma);
  sweep_cmd->add_option("--out", sweep.out, "write NDJSON here instead of stdout");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    RunConfig config;
    if (!config_file.empty()) config = config_from_json(load_json(config_file));
    if (seed) config.seed = *seed;
    if (*inject_opt) check.inject_log_lhs = inject_value;
    const Context ctx{config, config_hash(config), out, err};
    if (*poly_cmd) return cmd_poly(ctx, poly);
    if (*covers_cmd) return cmd_covers(ctx, covers);
    if (*check_cmd) return cmd_check(ctx, check);
    if (*build_cmd) return cmd_build(ctx, build);
    if (*verify_cmd) return cmd_verify(ctx, verify);
    if (*corpus_cmd) return cmd_corpus(ctx, corpus);
    if (*sweep_cmd) return cmd_sweep(ctx, sweep);
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kCapacityError;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kViolated;
  } catch (const Error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const Json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace btiso::cli
