#pragma once

#include <algorithm>
#include <climits>
#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "picardjump/errors.hpp"
#include "picardjump/lattice.hpp"
#include "picardjump/polynomial.hpp"

namespace pj {

// y^2 = x^3 + a(s) x + b(s) over Q.
struct Weierstrass {
  QPoly a, b;
  std::string var = "s";
};

// a(s, t), b(s, t): outer variable s, coefficients in Q[t].
struct WeierstrassFamily {
  QtPoly a, b;
  std::string var = "s", param = "t";

  Weierstrass at(Rational const& t) const {
    auto ev = [&](QPoly const& c) { return c(t); };
    return {map_coeffs(a, ev), map_coeffs(b, ev), var};
  }
};

inline QPoly discriminant(Weierstrass const& w) {
  return pow(w.a, 3).scaled(Rational(4)) + pow(w.b, 2).scaled(Rational(27));
}
inline QtPoly discriminant(WeierstrassFamily const& f) {
  return pow(f.a, 3).scaled(QPoly(Rational(4))) + pow(f.b, 2).scaled(QPoly(Rational(27)));
}

struct DiscriminantInfo {
  QPoly delta;
  QPoly squarefree;
  long simple_roots = 0;  // roots of multiplicity one, over C
};

inline DiscriminantInfo discriminant_info(Weierstrass const& w) {
  DiscriminantInfo d{discriminant(w), {}, 0};
  if (d.delta.is_zero()) throw DomainError("discriminant vanishes identically");
  d.squarefree = squarefree_part(d.delta);
  // roots of multiplicity one = deg sqf(D) - deg gcd(sqf(D), D / sqf(D))
  if (d.delta.degree() > 0) {
    QPoly rest = exact_quotient(d.delta, d.squarefree);
    d.simple_roots = d.squarefree.degree() - gcd(d.squarefree, rest).degree();
  }
  return d;
}

enum class SurfaceKind { rational, k3, other };

inline std::string to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::rational: return "rational";
    case SurfaceKind::k3: return "K3";
    default: return "other";
  }
}

struct KodairaType {
  enum Family { I, Istar, II, III, IV, IVstar, IIIstar, IIstar } family = I;
  long n = 0;  // for I_n, I_n*

  long components() const {
    switch (family) {
      case I: return n;
      case Istar: return n + 5;
      case II: return 1;
      case III: return 2;
      case IV: return 3;
      case IVstar: return 7;
      case IIIstar: return 8;
      case IIstar: return 9;
    }
    return 0;
  }
  long euler() const {
    switch (family) {
      case I: return n;
      case Istar: return n + 6;
      case II: return 2;
      case III: return 3;
      case IV: return 4;
      case IVstar: return 8;
      case IIIstar: return 9;
      case IIstar: return 10;
    }
    return 0;
  }
  bool additive() const { return family != I; }
  std::string name() const {
    switch (family) {
      case I: return "I" + std::to_string(n);
      case Istar: return "I" + std::to_string(n) + "*";
      case II: return "II";
      case III: return "III";
      case IV: return "IV";
      case IVstar: return "IV*";
      case IIIstar: return "III*";
      case IIstar: return "II*";
    }
    return "?";
  }
  friend bool operator==(KodairaType const&, KodairaType const&) = default;
};

inline constexpr long kInfiniteValuation = LONG_MAX;

// Residue characteristic 0: the type is a function of the valuations.
inline std::optional<KodairaType> kodaira_type(long va, long vb, long vd) {
  if (vd == 0) return std::nullopt;
  if (va == 0 || vb == 0) return KodairaType{KodairaType::I, vd};
  if (va >= 4 && vb >= 6) throw Error("non-minimal valuations");
  switch (vd) {
    case 2: return KodairaType{KodairaType::II, 0};
    case 3: return KodairaType{KodairaType::III, 0};
    case 4: return KodairaType{KodairaType::IV, 0};
    case 6: return KodairaType{KodairaType::Istar, 0};
    default: break;
  }
  if (va == 2 && vb == 3 && vd > 6) return KodairaType{KodairaType::Istar, vd - 6};
  if (vd == 8) return KodairaType{KodairaType::IVstar, 0};
  if (vd == 9) return KodairaType{KodairaType::IIIstar, 0};
  if (vd == 10) return KodairaType{KodairaType::IIstar, 0};
  throw Error("valuation triple outside the Kodaira table");
}

struct FiberEntry {
  std::string place;
  QPoly factor;            // monic place polynomial; zero for infinity
  bool at_infinity = false;
  long count = 1;          // number of fibers = deg factor
  KodairaType type;
  long va = 0, vb = 0, vd = 0;
};

struct FiberTable {
  std::vector<FiberEntry> entries;
  long block = 1;  // d with deg a <= 4d, deg b <= 6d
  SurfaceKind kind = SurfaceKind::rational;
  long euler_total = 0;
  long sum_m_minus_1 = 0;
  Weierstrass minimal;              // model after minimalization
  std::vector<std::string> reductions;  // places where the model was divided

  long fibers() const {
    long c = 0;
    for (auto const& e : entries) c += e.count;
    return c;
  }
};

namespace detail {

inline std::vector<QPoly> squarefree_factors(QPoly p) {
  // Yun: p = c prod f_i^i
  std::vector<QPoly> out;
  if (p.degree() <= 0) return out;
  QPoly a = gcd(p, derivative(p));
  QPoly b = exact_quotient(monic(p), a);
  while (b.degree() > 0) {
    QPoly c = gcd(a, b);
    QPoly f = exact_quotient(b, c);
    if (f.degree() > 0) out.push_back(monic(f));
    b = c;
    a = exact_quotient(a, c);
  }
  return out;
}

// Pairwise coprime monic squarefree polynomials, each dividing or prime
// to every input factor.
inline std::vector<QPoly> coprime_basis(std::vector<QPoly> in) {
  std::vector<QPoly> basis;
  for (auto& p : in)
    if (p.degree() > 0) basis.push_back(monic(p));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < basis.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < basis.size() && !changed; ++j) {
        QPoly g = gcd(basis[i], basis[j]);
        if (g.degree() <= 0) continue;
        QPoly x = exact_quotient(basis[i], g), y = exact_quotient(basis[j], g);
        basis.erase(basis.begin() + j);
        basis.erase(basis.begin() + i);
        for (auto* q : {&g, &x, &y})
          if (q->degree() > 0) basis.push_back(monic(*q));
        changed = true;
      }
  }
  // split rational linear factors
  std::vector<QPoly> out;
  for (auto const& p : basis) {
    QPoly rest = p;
    if (p.degree() > 1) {
      if (auto roots = rational_roots(p))
        for (auto const& r : *roots) {
          QPoly lin(std::vector<Rational>{-r, Rational(1)});
          out.push_back(lin);
          rest = exact_quotient(rest, lin);
        }
    }
    if (rest.degree() > 0) out.push_back(monic(rest));
  }
  std::sort(out.begin(), out.end(), [](QPoly const& x, QPoly const& y) {
    if (x.degree() != y.degree()) return x.degree() < y.degree();
    auto const& a = x.coeffs();
    auto const& b = y.coeffs();
    for (std::size_t k = a.size(); k-- > 0;)
      if (a[k] != b[k]) return a[k] < b[k];
    return false;
  });
  return out;
}

inline long val(QPoly const& f, QPoly const& p) {
  return f.is_zero() ? kInfiniteValuation : valuation(f, p);
}

inline std::string place_name(QPoly const& p, std::string const& var) {
  if (p.degree() == 1) return var + "=" + pj::to_string(Rational(-p.coeff(0)));
  return to_string(p, var) + "=0";
}

inline std::vector<QPoly> place_factors(Weierstrass const& w) {
  std::vector<QPoly> in;
  for (auto const* f : {&w.a, &w.b}) {
    if (f->is_zero()) continue;
    for (auto& q : squarefree_factors(*f)) in.push_back(q);
  }
  for (auto& q : squarefree_factors(discriminant(w))) in.push_back(q);
  return coprime_basis(in);
}

inline long ceil_div(long a, long b) { return a <= 0 ? 0 : (a + b - 1) / b; }

}  // namespace detail

inline FiberTable classify_fibers(Weierstrass w) {
  if (discriminant(w).is_zero()) throw DomainError("discriminant vanishes identically");
  FiberTable t;
  // minimalize at finite places
  for (bool again = true; again;) {
    again = false;
    for (auto const& p : detail::place_factors(w)) {
      long va = detail::val(w.a, p), vb = detail::val(w.b, p);
      if (va >= 4 && vb >= 6) {
        if (!w.a.is_zero()) w.a = exact_quotient(w.a, pow(p, 4));
        if (!w.b.is_zero()) w.b = exact_quotient(w.b, pow(p, 6));
        t.reductions.push_back(detail::place_name(p, w.var));
        again = true;
        break;
      }
    }
  }
  QPoly delta = discriminant(w);
  for (auto const& p : detail::place_factors(w)) {
    FiberEntry e;
    e.factor = p;
    e.place = detail::place_name(p, w.var);
    e.count = p.degree();
    e.va = detail::val(w.a, p);
    e.vb = detail::val(w.b, p);
    e.vd = valuation(delta, p);
    auto ty = kodaira_type(e.va, e.vb, e.vd);
    if (!ty) continue;
    e.type = *ty;
    t.entries.push_back(e);
  }
  // weighted flip at infinity; d minimal keeps the model minimal there
  long da = w.a.degree(), db = w.b.degree();
  long d = std::max({1L, detail::ceil_div(da, 4), detail::ceil_div(db, 6)});
  if (da <= 0 && db <= 0) throw DomainError("constant model: trivial fibration");
  {
    FiberEntry e;
    e.at_infinity = true;
    e.place = w.var + "=inf";
    e.va = w.a.is_zero() ? kInfiniteValuation : 4 * d - da;
    e.vb = w.b.is_zero() ? kInfiniteValuation : 6 * d - db;
    e.vd = 12 * d - delta.degree();
    if (auto ty = kodaira_type(e.va, e.vb, e.vd)) {
      e.type = *ty;
      t.entries.push_back(e);
    }
  }
  t.block = d;
  t.kind = d == 1 ? SurfaceKind::rational : d == 2 ? SurfaceKind::k3 : SurfaceKind::other;
  for (auto const& e : t.entries) {
    if (e.type.euler() != e.vd) throw Error("Euler number differs from v(discriminant)");
    t.euler_total += e.count * e.type.euler();
    t.sum_m_minus_1 += e.count * (e.type.components() - 1);
  }
  t.minimal = w;
  return t;
}

struct EulerCheck {
  bool ok = false;
  long expected = 0, actual = 0;
  std::string detail;
};

inline EulerCheck euler_check(FiberTable const& t, SurfaceKind kind) {
  EulerCheck c;
  c.actual = t.euler_total;
  switch (kind) {
    case SurfaceKind::rational: c.expected = 12; break;
    case SurfaceKind::k3: c.expected = 24; break;
    default: c.expected = 12 * t.block; break;
  }
  c.ok = c.actual == c.expected;
  if (!c.ok)
    c.detail = "euler total " + std::to_string(c.actual) + " != " +
               std::to_string(c.expected);
  return c;
}

inline EulerCheck euler_check(FiberTable const& t) { return euler_check(t, t.kind); }

inline long shioda_rank(long rho, FiberTable const& t) {
  long r = rho - 2 - t.sum_m_minus_1;
  if (r < 0) throw DomainError("inconsistent (rho, fiber) data");
  return r;
}

inline long rho_from_rank(long r, FiberTable const& t) {
  if (r < 0) throw DomainError("inconsistent (rho, fiber) data");
  return r + 2 + t.sum_m_minus_1;
}

// Image of a section S under S -> S - O + ((O^2) - (S.O)) E.
struct HeightEmbedding {
  long coeff_S = 1, coeff_O = -1, coeff_E = 0;
  long norm = 0;  // <S, S> = -(image)^2
};

inline HeightEmbedding height_embedding(long s_dot_o, long o_sq = -2) {
  if (s_dot_o < 0) throw DomainError("S.O must be non-negative");
  if (o_sq >= 0) throw DomainError("zero section must have negative self-intersection");
  HeightEmbedding h;
  h.coeff_E = o_sq - s_dot_o;
  h.norm = -2 * o_sq + 2 * s_dot_o;
  return h;
}

// ---- torsion ----

inline std::vector<std::string> const& constant_j_torsion_universe() {
  static const std::vector<std::string> u = {"0", "Z/2", "Z/3", "Z/4", "(Z/2)^2"};
  return u;
}

inline std::string const& cox_marker() {
  static const std::string m = "bounded by Cox's classification (out of computational scope)";
  return m;
}

// Groups from the universe embedding in the component group of the type.
inline std::vector<std::string> subgroups_allowed(KodairaType const& t) {
  switch (t.family) {
    case KodairaType::II:
    case KodairaType::IIstar: return {"0"};
    case KodairaType::III:
    case KodairaType::IIIstar: return {"0", "Z/2"};
    case KodairaType::IV:
    case KodairaType::IVstar: return {"0", "Z/3"};
    case KodairaType::Istar:
      if (t.n % 2 == 0) return {"0", "Z/2", "(Z/2)^2"};
      return {"0", "Z/2", "Z/4"};
    case KodairaType::I: break;
  }
  return constant_j_torsion_universe();  // C* x Z/n absorbs these
}

inline std::vector<std::string> torsion_options(bool constant_j, FiberTable const& t) {
  if (t.entries.empty()) throw DomainError("no singular fibers");
  if (!constant_j) return {cox_marker()};
  std::vector<std::string> out;
  for (auto const& g : constant_j_torsion_universe()) {
    bool ok = true;
    for (auto const& e : t.entries) {
      if (!e.type.additive()) continue;
      auto s = subgroups_allowed(e.type);
      if (std::find(s.begin(), s.end(), g) == s.end()) ok = false;
    }
    if (ok) out.push_back(g);
  }
  return out;
}

// ---- Mordell-Weil chain ----

struct MWChainReport {
  Lattice narrow;
  Lattice dual;
  std::vector<Overlattice> overlattices;
  std::vector<std::string> torsion;
};

inline MWChainReport mw_chain(Lattice const& narrow,
                              std::optional<FiberTable> const& table = std::nullopt,
                              bool constant_j = true) {
  if (!narrow.is_integral()) throw DomainError("narrow lattice must be integral");
  auto sg = signature(narrow);
  if (sg.positive != narrow.rank()) throw DomainError("narrow lattice must be positive definite");
  auto dd = dual_and_discriminant(narrow);
  MWChainReport r{narrow, dd.dual, intermediate_overlattices(narrow), {}};
  r.torsion = table ? torsion_options(constant_j, *table)
                    : (constant_j ? constant_j_torsion_universe()
                                  : std::vector<std::string>{cox_marker()});
  return r;
}

// ---- base change ----

inline Weierstrass base_change(Weierstrass const& w, QPoly const& subst,
                               std::string var = "") {
  if (subst.degree() < 1) throw DomainError("substitution must be non-constant");
  Weierstrass r{compose(w.a, subst), compose(w.b, subst), var.empty() ? w.var : var};
  if (discriminant(r).is_zero()) throw DomainError("discriminant vanishes identically");
  return r;
}

inline WeierstrassFamily base_change(WeierstrassFamily const& f, QPoly const& subst,
                                     std::optional<QPoly> const& param_subst = std::nullopt,
                                     std::string var = "", std::string param = "") {
  if (subst.degree() < 1) throw DomainError("substitution must be non-constant");
  QtPoly s = map_coeffs(subst, [](Rational const& c) { return QPoly(c); });
  WeierstrassFamily r{compose(f.a, s), compose(f.b, s), var.empty() ? f.var : var,
                      param.empty() ? f.param : param};
  if (param_subst) {
    auto ps = [&](QPoly const& c) { return compose(c, *param_subst); };
    r.a = map_coeffs(r.a, ps);
    r.b = map_coeffs(r.b, ps);
  }
  if (discriminant(r).is_zero()) throw DomainError("discriminant vanishes identically");
  return r;
}

// s = M + w^2, ramified over s = M and s = inf.
inline QPoly double_cover_map(Rational const& m) {
  return QPoly(std::vector<Rational>{m, Rational(0), Rational(1)});
}

// ---- rank profile ----

struct BadSet {
  QPoly polynomial;               // monic squarefree, 1 when empty
  std::vector<Rational> rational;  // its rational roots
  std::string description;
};

struct RankProfile {
  FiberTable generic_table;
  Rational generic_t;
  BadSet bad;
  long offset = 0;                 // r = rho - offset
  std::optional<long> r0;

  long r_of_rho(long rho) const {
    if (rho < offset) throw DomainError("inconsistent (rho, fiber) data");
    return rho - offset;
  }
};

inline BadSet bad_parameter_set(WeierstrassFamily const& f) {
  QtPoly delta = discriminant(f);
  if (delta.is_zero()) throw DomainError("discriminant vanishes identically");
  std::vector<QPoly> parts;
  QtPoly sq = squarefree_part(delta);
  if (sq.degree() >= 1) {
    QPoly res = resultant(sq, derivative(sq));
    if (!res.is_zero()) parts.push_back(res);
  }
  for (QtPoly const* p : {&f.a, &f.b, static_cast<QtPoly const*>(&delta)})
    if (!p->is_zero()) {
      parts.push_back(p->lead());
      parts.push_back(content(*p));
    }
  parts.push_back(sq.lead());
  QPoly acc(Rational(1));
  for (auto const& p : parts) {
    if (p.degree() <= 0) continue;
    QPoly s = squarefree_part(p);
    acc = exact_quotient(acc * s, gcd(acc, s));
  }
  BadSet b{monic(acc), {}, {}};
  if (b.polynomial.degree() <= 0) {
    b.polynomial = QPoly(Rational(1));
    b.description = "empty";
    return b;
  }
  QPoly rest = b.polynomial;
  if (auto roots = rational_roots(rest)) {
    b.rational = *roots;
    for (auto const& r : *roots)
      rest = exact_quotient(rest, QPoly(std::vector<Rational>{-r, Rational(1)}));
  }
  std::vector<std::string> items;
  for (auto const& r : b.rational) items.push_back(f.param + "=" + pj::to_string(r));
  if (rest.degree() > 0) items.push_back(to_string(monic(rest), f.param) + "=0");
  for (std::size_t i = 0; i < items.size(); ++i)
    b.description += (i ? ", " : "") + items[i];
  return b;
}

inline RankProfile rank_profile(WeierstrassFamily const& f,
                                std::optional<long> generic_rho = std::nullopt,
                                unsigned seed = 1) {
  RankProfile p;
  p.bad = bad_parameter_set(f);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<long> num(-97, 97), den(1, 31);
  for (int it = 0;; ++it) {
    if (it > 10000) throw Error("no generic parameter found");
    Rational t(num(rng), den(rng));
    if (p.bad.polynomial(t) == 0) continue;
    p.generic_t = t;
    break;
  }
  p.generic_table = classify_fibers(f.at(p.generic_t));
  p.offset = 2 + p.generic_table.sum_m_minus_1;
  if (generic_rho) p.r0 = p.r_of_rho(*generic_rho);
  return p;
}

}  // namespace pj
