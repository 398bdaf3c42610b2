#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "picardjump/elliptic.hpp"
#include "picardjump/json_io.hpp"
#include "picardjump/jump.hpp"
#include "picardjump/kummer.hpp"
#include "picardjump/lattice.hpp"
#include "picardjump/period.hpp"
#include "picardjump/verify.hpp"

#ifndef PICARDJUMP_DEFAULT_CORPUS
#define PICARDJUMP_DEFAULT_CORPUS "corpus"
#endif

namespace fs = std::filesystem;
using namespace pj;
using io::json;

namespace {

struct Globals {
  double tol = 1e-9;
  long bound = 5;
  unsigned seed = 1;
  int samples = 256;
  std::string format;
};

Globals g;

std::string corpus_dir() {
  if (char const* e = std::getenv("PICARDJUMP_CORPUS"); e && *e) return e;
  return PICARDJUMP_DEFAULT_CORPUS;
}

// Paths that do not exist are looked up by file name in the corpus.
std::string resolve(std::string const& path) {
  if (fs::exists(path)) return path;
  fs::path c = fs::path(corpus_dir()) / fs::path(path).filename();
  if (fs::exists(c)) return c.string();
  fs::path c2 = fs::path(corpus_dir()) / (fs::path(path).filename().string() + ".json");
  if (fs::exists(c2)) return c2.string();
  throw InputError("no such file: " + path);
}

json header() {
  json o;
  o["schema"] = io::kSchema;
  o["seed"] = g.seed;
  return o;
}

void emit(json const& o) { std::cout << o.dump(2) << "\n"; }

std::string fmt(std::string const& dflt) { return g.format.empty() ? dflt : g.format; }

JumpOptions jump_options() {
  JumpOptions o;
  o.tol = g.tol;
  o.samples = g.samples;
  return o;
}

json index_vectors(std::vector<SmallVector> const& vs, std::size_t limit = 200) {
  json a = json::array();
  for (std::size_t i = 0; i < vs.size() && i < limit; ++i) a.push_back(vs[i]);
  return a;
}

// ---- lattice ----

Sublattice sublattice_from(json const& j, Lattice const& l) {
  if (!j.contains("basis")) throw InputError("missing field 'basis'");
  auto b = io::basis_from_json(j["basis"]);
  for (auto const& v : b)
    if (v.size() != l.rank()) throw InputError("basis vector length mismatch");
  try {
    return Sublattice(l, b);
  } catch (Error const& e) {
    throw InputError(e.what());
  }
}

int cmd_lattice(std::string const& op, std::string const& file, long order, long b2) {
  json o = header();
  o["operation"] = op;
  if (op == "picard-bound") {
    auto r = nonsymplectic_picard_bound(order, b2);
    o["order"] = order;
    o["b2"] = b2;
    o["max_rho"] = r.max_rho;
    o["allowed_transcendental_ranks"] = r.allowed_transcendental_ranks;
    o["clipped"] = r.clipped;
    emit(o);
    return 0;
  }
  if (file.empty()) throw InputError("lattice file required");
  json j = io::read_json_file(resolve(file));
  Lattice l = io::lattice_from_json(j);
  if (op == "signature") {
    auto s = signature(l);
    o["signature"] = {s.positive, s.negative, s.nullity};
    o["determinant"] = io::rational_to_json(l.determinant());
  } else if (op == "complement") {
    auto c = orthogonal_complement(l, sublattice_from(j, l));
    o["basis"] = io::basis_to_json(c.basis());
    o["gram"] = io::matrix_to_json(c.gram());
  } else if (op == "saturate") {
    auto s = saturate(l, sublattice_from(j, l));
    o["basis"] = io::basis_to_json(s.lattice.basis());
    o["index"] = io::integer_to_json(s.index);
  } else if (op == "dual") {
    auto d = dual_and_discriminant(l);
    o["dual_gram"] = io::matrix_to_json(d.dual.gram());
    o["discriminant_invariants"] = json::array();
    for (auto const& x : d.group.invariant_factors)
      o["discriminant_invariants"].push_back(io::integer_to_json(x));
  } else if (op == "overlattices") {
    auto ov = intermediate_overlattices(l);
    json a = json::array();
    for (auto const& x : ov)
      a.push_back({{"index", io::integer_to_json(x.index)},
                   {"gram", io::matrix_to_json(x.lattice.gram())}});
    o["overlattices"] = a;
    o["count"] = ov.size();
  } else {
    throw InputError("unknown lattice operation '" + op + "'");
  }
  emit(o);
  return 0;
}

// ---- period ----

int cmd_period(std::string const& op, std::string const& file, std::string const& zs) {
  json o = header();
  o["operation"] = op;
  if (file.empty()) throw InputError("input file required");
  if (op == "generic" || op == "fill") {
    json j = io::read_json_file(resolve(file));
    Lattice l = io::lattice_from_json(j);
    double tol = j.value("tol", g.tol);
    o["tol"] = tol;
    o["bound"] = g.bound;
    if (op == "generic") {
      std::vector<IntVector> b;
      if (j.contains("sublattice")) b = io::basis_from_json(j["sublattice"]);
      auto r = generic_period(l, Sublattice(l, b), g.bound, g.seed, tol);
      o["omega"] = io::series_to_json(r.point.omega);
      o["ns_rank"] = r.ns.rank;
      o["attempts"] = r.attempts;
    } else {
      auto cls = io::basis_from_json(j.at("classes"));
      auto steps = picard_fill_sequence(l, cls, g.bound, g.seed, tol);
      json a = json::array();
      for (auto const& s : steps)
        a.push_back({{"j", s.j}, {"ns_rank", s.ns_rank},
                     {"omega", io::series_to_json(s.point.omega)}});
      o["steps"] = a;
    }
    emit(o);
    return 0;
  }
  io::Family f = io::load_family(resolve(file));
  if (!f.period) throw InputError("not a period family");
  Complex z = zs.empty() ? f.period->pm.center : io::parse_complex(zs);
  PeriodPoint pt = evaluate(f.period->pm, z);
  o["z"] = io::complex_to_json(z);
  o["omega"] = io::series_to_json(pt.omega);
  if (op == "eval") {
    auto r = validate_period(pt, g.tol);
    o["isotropy_residual"] = r.isotropy_residual;
    o["positivity"] = r.positivity_value;
    o["ok"] = r.ok;
  } else if (op == "ns") {
    auto ns = ns_bounded(pt, g.bound, g.tol);
    o["bound"] = g.bound;
    o["tol"] = g.tol;
    o["rank"] = ns.rank;
    o["vectors_found"] = ns.vectors.size();
    o["vectors"] = index_vectors(ns.vectors);
    if (f.kummer) {
      o["rho"] = std::min<std::size_t>(20, 18 + ns.rank);
      o["rho_convention"] = "18 + block rank";
    } else {
      o["rho"] = ns.rank;
      o["rho_convention"] = "block rank";
    }
  } else {
    throw InputError("unknown period operation '" + op + "'");
  }
  emit(o);
  return 0;
}

// ---- jump ----

int cmd_jump(std::string const& family, std::vector<std::string> const& centers,
             double radius) {
  io::Family f = io::load_family(resolve(family));
  if (!f.period) throw InputError("not a period family");
  if (centers.empty()) throw InputError("at least one --center required");
  std::vector<Complex> cs;
  for (auto const& c : centers) cs.push_back(io::parse_complex(c));
  if (cs.size() == 1) {
    auto cert = find_jump(*f.period, cs[0], radius, jump_options());
    json o = io::certificate_to_json(cert);
    o["seed"] = g.seed;
    o["family"] = f.name;
    emit(o);
    return 0;
  }
  auto scan = density_scan(*f.period, cs, radius, jump_options());
  json o = header();
  o["family"] = f.name;
  json a = json::array();
  bool all = true;
  for (auto const& s : scan) {
    if (s.certificate) a.push_back(io::certificate_to_json(*s.certificate));
    else {
      all = false;
      a.push_back({{"center", io::complex_to_json(s.center)}, {"error", s.error}});
    }
  }
  o["results"] = a;
  emit(o);
  return all ? 0 : 3;
}

// ---- kummer ----

json witness_json(IsogenyWitness const& w) {
  json m = json::array();
  m.push_back({io::integer_to_json(w.matrix[0]), io::integer_to_json(w.matrix[1])});
  m.push_back({io::integer_to_json(w.matrix[2]), io::integer_to_json(w.matrix[3])});
  return {{"matrix", m}, {"det", io::integer_to_json(w.det())},
          {"congruent_value", io::complex_to_json(w.congruent_value)}};
}

int cmd_kummer(std::string const& op, std::string const& zs, std::string const& phis,
               std::string const& tps, long height, std::string const& family, int count,
               double shrink) {
  json o = header();
  o["operation"] = op;
  if (op == "rank") {
    Complex z = io::parse_complex(zs);
    Complex p = phis.empty() ? Complex(0, 1) : io::parse_complex(phis);
    auto r = kummer_rank(z, p, g.bound, g.tol);
    o["z"] = io::complex_to_json(z);
    o["phi"] = io::complex_to_json(p);
    o["rho"] = r.rho;
    o["status"] = r.exact ? "exact" : "lower bound";
    o["block_rank"] = r.block_rank;
    json rel = json::array();
    for (std::size_t i = 0; i < r.relations.size() && i < 50; ++i) {
      json x = json::array();
      for (auto const& c : r.relations[i]) x.push_back(io::integer_to_json(c));
      rel.push_back(x);
    }
    o["relations"] = rel;
    o["relation_form"] = "A z phi + B + C z + D phi = 0";
  } else if (op == "isogeny") {
    Complex t = io::parse_complex(zs), tp = io::parse_complex(tps);
    auto w = isogeny_witness(t, tp, height, g.tol);
    o["tau"] = io::complex_to_json(t);
    o["tau_prime"] = io::complex_to_json(tp);
    o["height_bound"] = height;
    o["witness"] = w ? witness_json(*w) : json(nullptr);
  } else if (op == "sequence") {
    io::Family f = io::load_family(resolve(family));
    if (!f.kummer) throw InputError("not a kummer family");
    auto seq = isogenous_sequence(*f.kummer, count, shrink, jump_options());
    json a = json::array();
    for (auto const& s : seq)
      a.push_back({{"tau_k", io::complex_to_json(s.tau_k)},
                   {"distance", std::abs(s.tau_k - f.kummer->tau)},
                   {"witness", witness_json(s.witness)},
                   {"action_error", s.action_error},
                   {"certificate", io::certificate_to_json(s.certificate)}});
    o["family"] = f.name;
    o["sequence"] = a;
  } else {
    throw InputError("unknown kummer operation '" + op + "'");
  }
  emit(o);
  return 0;
}

// ---- surface ----

Weierstrass model_of(io::Family const& f) {
  if (f.model) return *f.model;
  if (f.family) return rank_profile(*f.family, std::nullopt, g.seed).generic_table.minimal;
  throw InputError("not a Weierstrass model");
}

int cmd_surface(std::string const& op, std::string const& file, long rho,
                std::string const& cover, std::vector<std::string> const& subst,
                bool nonconstant_j, long s_dot_o, long o_sq) {
  json o = header();
  o["operation"] = op;
  if (op == "height") {
    auto h = height_embedding(s_dot_o, o_sq);
    o["s_dot_o"] = s_dot_o;
    o["o_sq"] = o_sq;
    o["class"] = {{"S", h.coeff_S}, {"O", h.coeff_O}, {"E", h.coeff_E}};
    o["norm"] = h.norm;
    emit(o);
    return 0;
  }
  if (file.empty()) throw InputError("input file required");
  if (op == "chain") {
    json j = io::read_json_file(resolve(file));
    Lattice l = io::lattice_from_json(j);
    auto r = mw_chain(l, std::nullopt, !nonconstant_j);
    o["narrow"] = io::lattice_to_json(r.narrow);
    o["dual"] = io::lattice_to_json(r.dual);
    json a = json::array();
    for (auto const& x : r.overlattices)
      a.push_back({{"index", io::integer_to_json(x.index)},
                   {"gram", io::matrix_to_json(x.lattice.gram())}});
    o["overlattices"] = a;
    o["count"] = r.overlattices.size();
    o["torsion_options"] = r.torsion;
    emit(o);
    return 0;
  }
  io::Family f = io::load_family(resolve(file));
  if (op == "profile") {
    if (!f.family) throw InputError("profile needs a two-parameter model");
    auto p = rank_profile(*f.family, rho >= 0 ? std::optional<long>(rho) : std::nullopt, g.seed);
    o["bad_set"] = p.bad.description;
    o["bad_polynomial"] = to_string(p.bad.polynomial, f.family->param);
    o["generic_parameter"] = pj::to_string(p.generic_t);
    o["generic_table"] = io::fiber_table_to_json(p.generic_table);
    o["generic_fibers"] = io::fiber_summary(p.generic_table);
    o["r_of_rho"] = "rho - " + std::to_string(p.offset);
    if (p.r0) o["r0"] = *p.r0;
    emit(o);
    return 0;
  }
  Weierstrass w = model_of(f);
  if (op == "base-change") {
    QPoly s;
    if (!cover.empty()) s = double_cover_map(parse_rational(cover));
    else if (!subst.empty()) {
      std::vector<Rational> c;
      for (auto const& x : subst) c.push_back(parse_rational(x));
      s = QPoly(c);
    } else {
      throw InputError("base-change needs --cover or --subst");
    }
    w = base_change(w, s, "w");
    o["model"] = {{"kind", "weierstrass"}, {"var", w.var}, {"a", io::qpoly_to_json(w.a)},
                  {"b", io::qpoly_to_json(w.b)}};
  }
  FiberTable t = classify_fibers(w);
  if (op == "classify" || op == "base-change") {
    if (fmt(op == "classify" ? "csv" : "json") == "csv") {
      std::cout << io::fiber_table_to_csv(t);
      return 0;
    }
    o["table"] = io::fiber_table_to_json(t);
    o["fibers"] = io::fiber_summary(t);
    auto ec = euler_check(t);
    o["euler_check"] = ec.ok ? "ok" : ec.detail;
  } else if (op == "discriminant") {
    auto d = discriminant_info(w);
    o["delta"] = io::qpoly_to_json(d.delta);
    o["delta_text"] = to_string(d.delta, w.var);
    o["squarefree"] = to_string(d.squarefree, w.var);
    o["degree"] = d.delta.degree();
    o["simple_roots"] = d.simple_roots;
  } else if (op == "rank") {
    if (rho < 0) throw InputError("--rho required");
    o["rho"] = rho;
    o["fibers"] = io::fiber_summary(t);
    o["sum_m_minus_1"] = t.sum_m_minus_1;
    o["r"] = shioda_rank(rho, t);
  } else if (op == "torsion") {
    o["fibers"] = io::fiber_summary(t);
    o["torsion_options"] = torsion_options(!nonconstant_j, t);
  } else {
    throw InputError("unknown surface operation '" + op + "'");
  }
  emit(o);
  return 0;
}

// ---- verify ----

int cmd_verify(std::string const& cert, std::string const& family, double radius) {
  json j = io::read_json_file(resolve(cert));
  io::Family f = io::load_family(resolve(family));
  if (!f.period) throw InputError("not a period family");
  std::vector<io::CertificateClaim> claims;
  if (j.contains("results")) {
    for (auto const& r : j["results"])
      if (r.value("kind", std::string{}) == "jump_certificate") claims.push_back(io::claim_from_json(r));
  } else {
    claims.push_back(io::claim_from_json(j));
  }
  json o = header();
  json a = json::array();
  bool all = true;
  for (auto const& c : claims) {
    auto v = verify_jump(*f.period, c.v, c.Q, g.tol, radius);
    all = all && v.ok;
    a.push_back({{"Q", io::complex_to_json(c.Q)},
                 {"residual", v.residual},
                 {"contour_count", v.contour_count},
                 {"outside_fixed", v.outside_fixed},
                 {"ok", v.ok},
                 {"reason", v.reason}});
  }
  o["checks"] = a;
  o["ok"] = all;
  o["status"] = all ? "ok" : "failed";
  emit(o);
  return all ? 0 : 3;
}

// ---- corpus ----

struct Check {
  std::string name, what, source;
  bool ok = false;
  std::string detail;
};

void check_family(io::Family const& f, std::vector<Check>& out) {
  json const& ex = f.expected;
  auto src = [](json const& e) { return e.value("source", std::string("derived")); };
  auto add = [&](std::string what, json const& e, bool ok, std::string detail) {
    out.push_back({f.name, std::move(what), src(e), ok, std::move(detail)});
  };
  auto guarded = [&](std::string what, json const& e, auto fn) {
    try {
      fn();
    } catch (std::exception const& x) {
      add(what, e, false, std::string("error: ") + x.what());
    }
  };
  if (ex.contains("rho")) {
    for (auto const& e : ex["rho"])
      guarded("rho", e, [&] {
        Complex z = io::complex_from_json(e.at("z"));
        long bound = e.value("bound", g.bound);
        PeriodPoint pt = evaluate(f.period->pm, z);
        auto ns = ns_bounded(pt, bound, g.tol);
        long rho = f.kummer ? std::min<long>(20, 18 + long(ns.rank)) : long(ns.rank);
        long want = e.at("rho").get<long>();
        add("rho at " + e.at("z").dump(), e, rho == want,
            "got " + std::to_string(rho) + ", want " + std::to_string(want));
      });
  }
  if (ex.contains("jump")) {
    auto const& e = ex["jump"];
    guarded("jump", e, [&] {
      Complex c = io::complex_from_json(e.at("center"));
      auto cert = find_jump(*f.period, c, e.at("radius").get<double>(), jump_options());
      auto v = verify_jump(*f.period, cert.v, cert.Q, g.tol);
      add("jump certificate verifies", e, v.ok, v.ok ? "ok" : v.reason);
    });
  }
  if (ex.contains("rouche_error")) {
    auto const& e = ex["rouche_error"];
    std::string want = e.at("message").get<std::string>();
    std::string got = "no error";
    try {
      std::vector<double> r = e.at("r").get<std::vector<double>>();
      rouche_margin(f.period->pm, r, io::complex_from_json(e.at("center")),
                    e.at("radius").get<double>(), g.samples);
    } catch (std::exception const& x) {
      got = x.what();
    }
    add("rouche_margin error", e, got.find(want) != std::string::npos, got);
  }
  if (ex.contains("fibers") || ex.contains("euler") || ex.contains("shioda")) {
    guarded("fibers", ex, [&] {
      FiberTable t = classify_fibers(model_of(f));
      if (ex.contains("fibers")) {
        std::string want = ex["fibers"].get<std::string>();
        add("fiber types", ex, io::fiber_summary(t) == want,
            io::fiber_summary(t) + " vs " + want);
      }
      if (ex.contains("euler")) {
        long want = ex["euler"].get<long>();
        auto ec = euler_check(t);
        add("euler number", ex, ec.ok && t.euler_total == want,
            std::to_string(t.euler_total) + " vs " + std::to_string(want));
      }
      if (ex.contains("kind"))
        add("surface kind", ex, to_string(t.kind) == ex["kind"].get<std::string>(),
            to_string(t.kind));
      if (ex.contains("shioda")) {
        auto const& s = ex["shioda"];
        long r = shioda_rank(s.at("rho").get<long>(), t);
        add("shioda rank", s, r == s.at("r").get<long>(), "r = " + std::to_string(r));
      }
    });
  }
  if (ex.contains("simple_roots")) {
    guarded("simple roots", ex, [&] {
      auto d = discriminant_info(model_of(f));
      long want = ex["simple_roots"].get<long>();
      add("simple discriminant roots", ex, d.simple_roots == want,
          std::to_string(d.simple_roots));
    });
  }
  if (ex.contains("bad_set")) {
    guarded("bad set", ex, [&] {
      auto p = rank_profile(*f.family, std::nullopt, g.seed);
      std::string want = ex["bad_set"].get<std::string>();
      add("bad parameter set", ex, p.bad.description == want, p.bad.description);
      if (ex.contains("generic_fibers")) {
        std::string gw = ex["generic_fibers"].get<std::string>();
        add("generic fiber types", ex, io::fiber_summary(p.generic_table) == gw,
            io::fiber_summary(p.generic_table));
      }
    });
  }
}

int cmd_corpus(std::string const& op, std::string const& name) {
  fs::path dir = corpus_dir();
  if (!fs::is_directory(dir)) throw InputError("corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (auto const& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json o = header();
  o["corpus"] = dir.string();
  if (op == "list") {
    json a = json::array();
    for (auto const& p : files) {
      auto j = io::read_json_file(p.string());
      a.push_back({{"name", j.value("name", p.stem().string())},
                   {"kind", j.value("kind", std::string{})},
                   {"description", j.value("description", std::string{})}});
    }
    o["entries"] = a;
    emit(o);
    return 0;
  }
  if (op == "show") {
    emit(io::read_json_file(resolve(name)));
    return 0;
  }
  if (op != "check") throw InputError("unknown corpus operation '" + op + "'");
  std::vector<Check> checks;
  for (auto const& p : files) {
    if (!name.empty() && p.stem() != name) continue;
    io::Family f = io::load_family(p.string());
    check_family(f, checks);
  }
  bool all = true;
  json a = json::array();
  for (auto const& c : checks) {
    all = all && c.ok;
    a.push_back({{"entry", c.name}, {"check", c.what}, {"source", c.source},
                 {"ok", c.ok}, {"detail", c.detail}});
  }
  o["checks"] = a;
  o["ok"] = all;
  emit(o);
  return all ? 0 : 3;
}

void error_out(std::string const& kind, std::string const& msg, int code) {
  json e;
  e["schema"] = io::kSchema;
  e["error"] = msg;
  e["kind"] = kind;
  e["exit"] = code;
  std::cerr << e.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Picard number jumps: lattices, periods, certified jump points and elliptic surfaces"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", g.tol, "numerical tolerance")->capture_default_str();
  app.add_option("--bound", g.bound, "enumeration sup-norm bound")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for randomized steps")->capture_default_str();
  app.add_option("--samples", g.samples, "initial winding samples")->capture_default_str();
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string op, file, zs, phis, tps, family, cover;
  std::vector<std::string> centers, subst;
  long order = 0, b2 = 22, height = 3, rho = -1, s_dot_o = 0, o_sq = -2;
  double radius = 0.05, shrink = 0.5, vradius = 0;
  int count = 5;
  bool nonconstant_j = false;

  auto* lat = app.add_subcommand("lattice", "signature, complement, saturate, dual, overlattices, picard-bound");
  lat->add_option("operation", op)->required();
  lat->add_option("file", file, "JSON with gram (or lattice name) and basis");
  lat->add_option("--order", order, "automorphism order for picard-bound");
  lat->add_option("--b2", b2, "second Betti number for picard-bound");

  auto* per = app.add_subcommand("period", "eval, ns, generic, fill");
  per->add_option("operation", op)->required();
  per->add_option("file", file)->required();
  per->add_option("--z", zs, "point, e.g. 0.3+1.4i");

  auto* jmp = app.add_subcommand("jump", "certified jump point near each center");
  jmp->add_option("--family", family)->required();
  jmp->add_option("--center", centers, "repeat for a scan")->required();
  jmp->add_option("--radius", radius)->capture_default_str();

  auto* kum = app.add_subcommand("kummer", "rank, isogeny, sequence");
  kum->add_option("operation", op)->required();
  kum->add_option("--z,--tau", zs);
  kum->add_option("--phi", phis, "value of phi at z (default i)");
  kum->add_option("--tau-prime", tps);
  kum->add_option("--height", height)->capture_default_str();
  kum->add_option("--family", family);
  kum->add_option("--count", count)->capture_default_str();
  kum->add_option("--shrink", shrink)->capture_default_str();

  auto* sur = app.add_subcommand("surface", "classify, discriminant, rank, torsion, chain, profile, base-change, height");
  sur->add_option("operation", op)->required();
  sur->add_option("file", file);
  sur->add_option("--rho", rho);
  sur->add_option("--cover", cover, "double cover s = M + w^2");
  sur->add_option("--subst", subst, "s = c0 + c1 w + ...");
  sur->add_flag("--non-constant-j", nonconstant_j);
  sur->add_option("--s-dot-o", s_dot_o);
  sur->add_option("--o-sq", o_sq);

  auto* ver = app.add_subcommand("verify", "independent re-check of a certificate");
  ver->add_option("certificate", file)->required();
  ver->add_option("--family", family)->required();
  ver->add_option("--radius", vradius, "test circle radius (default automatic)");

  auto* cor = app.add_subcommand("corpus", "list, show, check");
  cor->add_option("operation", op)->required();
  cor->add_option("name", zs);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    error_out("usage", e.what(), 2);
    return 2;
  }
  try {
    if (*lat) return cmd_lattice(op, file, order, b2);
    if (*per) return cmd_period(op, file, zs);
    if (*jmp) return cmd_jump(family, centers, radius);
    if (*kum) return cmd_kummer(op, zs, phis, tps, height, family, count, shrink);
    if (*sur) return cmd_surface(op, file, rho, cover, subst, nonconstant_j, s_dot_o, o_sq);
    if (*ver) return cmd_verify(file, family, vradius);
    if (*cor) return cmd_corpus(op, zs);
  } catch (InputError const& e) {
    error_out("input", e.what(), 2);
    return 2;
  } catch (Error const& e) {
    error_out("computation", e.what(), 3);
    return 3;
  } catch (std::exception const& e) {
    error_out("computation", e.what(), 3);
    return 3;
  }
  return 0;
}
