#pragma once

#include <cctype>
#include <complex>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "picardjump/elliptic.hpp"
#include "picardjump/errors.hpp"
#include "picardjump/jump.hpp"
#include "picardjump/kummer.hpp"
#include "picardjump/lattice.hpp"
#include "picardjump/period.hpp"

namespace pj::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "1";

inline json read_json_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (json::exception const& e) {
    throw InputError(path + ": " + e.what());
  }
}

template <class T>
T get(json const& j, char const* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (json::exception const&) {
    throw InputError(std::string("bad field '") + key + "'");
  }
}

// ---- scalars ----

inline Rational rational_from_json(json const& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (std::exception const&) {
      throw InputError("bad rational '" + j.get<std::string>() + "'");
    }
  }
  throw InputError("exact value expected (integer or \"n/d\" string)");
}

inline json rational_to_json(Rational const& q) {
  if (is_integral(q) && abs(numerator(q)) < Integer(1LL << 53))
    return numerator(q).convert_to<long long>();
  return pj::to_string(q);
}

inline json integer_to_json(Integer const& x) {
  if (abs(x) < Integer(1LL << 53)) return x.convert_to<long long>();
  return x.str();
}

inline Integer integer_from_json(json const& j) {
  Rational q = rational_from_json(j);
  if (!is_integral(q)) throw InputError("integer expected");
  return numerator(q);
}

// "0.3+1.4i", "-i", "2.5", "1e-3-2i"
inline Complex parse_complex(std::string s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw InputError("empty complex number");
  auto bad = [&] { return InputError("bad complex number '" + s + "'"); };
  auto num = [&](std::string const& x) -> double {
    if (x.empty() || x == "+") return 1;
    if (x == "-") return -1;
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(x, &pos);
    } catch (std::exception const&) {
      throw bad();
    }
    if (pos != x.size()) throw bad();
    return v;
  };
  if (t.back() != 'i') return {num(t), 0};
  t.pop_back();
  // split at the last sign not following an exponent marker
  std::size_t k = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;)
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      k = i;
      break;
    }
  if (k == std::string::npos) return {0, num(t)};
  return {num(t.substr(0, k)), num(t.substr(k))};
}

inline Complex complex_from_json(json const& j) {
  if (j.is_number()) return {j.get<double>(), 0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError("complex value expected as [re, im], number or string");
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Series series_from_json(json const& j) {
  if (!j.is_array()) throw InputError("series must be an array of coefficients");
  Series s;
  for (auto const& c : j) s.push_back(complex_from_json(c));
  return s;
}

inline json series_to_json(Series const& s) {
  json a = json::array();
  for (auto const& c : s) a.push_back(complex_to_json(c));
  return a;
}

// ---- lattices ----

inline RatMatrix rat_matrix_from_json(json const& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  std::size_t n = j[0].size();
  RatMatrix m(j.size(), n);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw InputError("ragged matrix");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = rational_from_json(j[i][k]);
  }
  return m;
}

inline json matrix_to_json(RatMatrix const& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(rational_to_json(m(i, k)));
    a.push_back(r);
  }
  return a;
}

inline IntVector int_vector_from_json(json const& j) {
  if (!j.is_array()) throw InputError("integer vector expected");
  IntVector v;
  for (auto const& x : j) v.push_back(integer_from_json(x));
  return v;
}

inline json vector_to_json(IntVector const& v) {
  json a = json::array();
  for (auto const& x : v) a.push_back(integer_to_json(x));
  return a;
}

inline std::vector<IntVector> basis_from_json(json const& j) {
  if (!j.is_array()) throw InputError("basis must be an array of vectors");
  std::vector<IntVector> b;
  for (auto const& r : j) b.push_back(int_vector_from_json(r));
  return b;
}

inline json basis_to_json(std::vector<IntVector> const& b) {
  json a = json::array();
  for (auto const& v : b) a.push_back(vector_to_json(v));
  return a;
}

inline Lattice named_lattice(std::string const& name) {
  if (name == "K3") return k3_lattice();
  if (name == "E8") return e8(-1);
  if (name == "E8+") return e8(1);
  if (name == "U") return hyperbolic_plane();
  if (name == "U(-1)+U") return kummer_block();
  throw InputError("unknown lattice name '" + name + "'");
}

// {"gram": [[..]]} or {"lattice": "K3"}
inline Lattice lattice_from_json(json const& j) {
  try {
    if (j.contains("lattice")) return named_lattice(get<std::string>(j, "lattice"));
    return Lattice(rat_matrix_from_json(j.at("gram")),
                   j.value("label", std::string{}));
  } catch (json::exception const&) {
    throw InputError("lattice needs 'gram' or 'lattice'");
  } catch (DomainError const& e) {
    throw InputError(e.what());
  }
}

inline json lattice_to_json(Lattice const& l) {
  json o;
  if (!l.label().empty()) o["label"] = l.label();
  o["gram"] = matrix_to_json(l.gram());
  return o;
}

// ---- families ----

struct Family {
  std::string name, kind;
  std::optional<PeriodFamily> period;
  std::optional<KummerFamilySpec> kummer;
  std::optional<Weierstrass> model;
  std::optional<WeierstrassFamily> family;
  json expected;
};

inline KummerFamilySpec kummer_spec_from_json(json const& j) {
  KummerFamilySpec s;
  if (j.contains("phi")) s.phi = series_from_json(j["phi"]);
  if (j.contains("tau")) s.tau = complex_from_json(j["tau"]);
  if (j.contains("sigma")) s.sigma = complex_from_json(j["sigma"]);
  if (j.contains("radius")) s.radius = get<double>(j, "radius");
  return s;
}

inline json kummer_spec_to_json(KummerFamilySpec const& s) {
  json o;
  o["kind"] = "kummer";
  if (!s.phi.empty()) o["phi"] = series_to_json(s.phi);
  o["tau"] = complex_to_json(s.tau);
  o["sigma"] = complex_to_json(s.sigma);
  o["radius"] = s.radius;
  return o;
}

inline PeriodMap period_map_from_json(json const& j) {
  PeriodMap pm;
  pm.lattice = lattice_from_json(j);
  if (!j.contains("coords") || !j["coords"].is_array())
    throw InputError("period map needs 'coords'");
  for (auto const& c : j["coords"]) pm.coords.push_back(series_from_json(c));
  pm.radius = get<double>(j, "radius");
  pm.normalization = j.value("normalization", std::size_t{0});
  pm.center = j.contains("center") ? complex_from_json(j["center"]) : Complex(0);
  pm.check();
  return pm;
}

inline PeriodFamily period_family_from_json(json const& j) {
  PeriodMap pm = period_map_from_json(j);
  if (!j.contains("ambient")) return trivial_family(std::move(pm));
  Lattice amb = lattice_from_json(j["ambient"]);
  auto perp = basis_from_json(j.at("perp_basis"));
  std::vector<IntVector> fixed;
  if (j.contains("fixed_basis")) fixed = basis_from_json(j["fixed_basis"]);
  for (auto const& b : perp)
    if (b.size() != amb.rank()) throw InputError("perp_basis vector length mismatch");
  PeriodFamily f{std::move(pm), amb, Sublattice(amb, fixed), perp};
  f.check();
  return f;
}

// Coefficient arrays: rationals for Q[s], arrays of rationals for Q[t][s].
inline bool is_two_parameter(json const& a) {
  for (auto const& c : a)
    if (c.is_array()) return true;
  return false;
}

inline QPoly qpoly_from_json(json const& j) {
  if (!j.is_array()) throw InputError("polynomial must be an array of coefficients");
  std::vector<Rational> c;
  for (auto const& x : j) c.push_back(rational_from_json(x));
  return QPoly(std::move(c));
}

inline QtPoly qtpoly_from_json(json const& j) {
  if (!j.is_array()) throw InputError("polynomial must be an array of coefficients");
  std::vector<QPoly> c;
  for (auto const& x : j)
    c.push_back(x.is_array() ? qpoly_from_json(x) : QPoly(rational_from_json(x)));
  return QtPoly(std::move(c));
}

inline json qpoly_to_json(QPoly const& p) {
  json a = json::array();
  for (auto const& c : p.coeffs()) a.push_back(pj::to_string(c));
  return a;
}

inline void load_weierstrass(json const& j, Family& f) {
  if (!j.contains("a") || !j.contains("b")) throw InputError("model needs 'a' and 'b'");
  std::string var = j.value("var", std::string("s"));
  std::string param = j.value("param", std::string("t"));
  if (is_two_parameter(j["a"]) || is_two_parameter(j["b"])) {
    WeierstrassFamily w{qtpoly_from_json(j["a"]), qtpoly_from_json(j["b"]), var, param};
    if (j.contains("parameter_value"))
      f.model = w.at(rational_from_json(j["parameter_value"]));
    f.family = w;
  } else {
    f.model = Weierstrass{qpoly_from_json(j["a"]), qpoly_from_json(j["b"]), var};
  }
  if (f.model && discriminant(*f.model).is_zero())
    throw InputError("discriminant vanishes identically");
}

inline Family family_from_json(json const& j, std::string const& fallback_name = "") {
  if (!j.is_object()) throw InputError("family file must hold a JSON object");
  Family f;
  f.name = j.value("name", fallback_name);
  f.kind = j.value("kind", std::string{});
  if (j.contains("expected")) f.expected = j["expected"];
  try {
    if (f.kind == "kummer") {
      f.kummer = kummer_spec_from_json(j);
      f.kummer->check();
      f.period = kummer_family(*f.kummer, j.value("k3", false));
    } else if (f.kind == "period_map" || f.kind == "period_family") {
      f.period = period_family_from_json(j);
    } else if (f.kind == "weierstrass") {
      load_weierstrass(j, f);
    } else {
      throw InputError("unknown family kind '" + f.kind + "'");
    }
  } catch (DomainError const& e) {
    throw InputError(e.what());
  }
  return f;
}

inline Family load_family(std::string const& path) {
  auto j = read_json_file(path);
  std::string stem = path.substr(path.find_last_of('/') + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return family_from_json(j, stem);
}

// ---- outputs ----

inline json certificate_to_json(JumpCertificate const& c) {
  json o;
  o["schema"] = kSchema;
  o["kind"] = "jump_certificate";
  o["Q"] = complex_to_json(c.Q);
  o["v"] = vector_to_json(c.v);
  o["residual"] = c.residual;
  o["winding"] = c.winding;
  o["circle"] = {{"center", complex_to_json(c.circle_center)}, {"radius", c.circle_radius}};
  o["margin"] = {{"K", c.K}, {"M", c.M}, {"delta", c.margin}};
  json q = json::array();
  for (auto const& x : c.q) q.push_back(pj::to_string(x));
  o["q"] = q;
  o["denominator"] = integer_to_json(c.denominator);
  o["fit_index"] = c.fit_index;
  o["fit"] = c.fit;
  o["perturbation"] = c.perturbation;
  return o;
}

struct CertificateClaim {
  Complex Q;
  IntVector v;
  double radius = 0;
};

inline CertificateClaim claim_from_json(json const& j) {
  if (!j.is_object() || j.value("kind", std::string{}) != "jump_certificate")
    throw InputError("not a jump certificate");
  CertificateClaim c;
  c.Q = complex_from_json(j.at("Q"));
  c.v = int_vector_from_json(j.at("v"));
  return c;
}

inline json fiber_table_to_json(FiberTable const& t) {
  json o;
  json es = json::array();
  for (auto const& e : t.entries) {
    json x;
    x["place"] = e.place;
    x["type"] = e.type.name();
    x["m"] = e.type.components();
    x["e"] = e.type.euler();
    x["count"] = e.count;
    es.push_back(x);
  }
  o["entries"] = es;
  o["euler_total"] = t.euler_total;
  o["sum_m_minus_1"] = t.sum_m_minus_1;
  o["kind"] = to_string(t.kind);
  o["block"] = t.block;
  if (!t.reductions.empty()) o["minimalized_at"] = t.reductions;
  return o;
}

inline std::string fiber_table_to_csv(FiberTable const& t) {
  std::ostringstream os;
  os << "place,type,m,e,count\n";
  for (auto const& e : t.entries)
    os << e.place << ',' << e.type.name() << ',' << e.type.components() << ','
       << e.type.euler() << ',' << e.count << '\n';
  return os.str();
}

// "10xI1 + II" style summary, entries merged by type in table order.
inline std::string fiber_summary(FiberTable const& t) {
  std::vector<std::pair<std::string, long>> agg;
  for (auto const& e : t.entries) {
    auto it = std::find_if(agg.begin(), agg.end(),
                           [&](auto const& p) { return p.first == e.type.name(); });
    if (it == agg.end()) agg.push_back({e.type.name(), e.count});
    else it->second += e.count;
  }
  std::string s;
  for (std::size_t i = 0; i < agg.size(); ++i) {
    if (i) s += " + ";
    if (agg[i].second > 1) s += std::to_string(agg[i].second) + "x";
    s += agg[i].first;
  }
  return s;
}

}  // namespace pj::io
