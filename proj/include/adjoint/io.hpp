#pragma once

// Instance documents: strict JSON, version 1, exact rationals as "p/q"
// strings. Integers that index or count (version, cone indices, p, M) are
// plain JSON integers; big denominators are strings.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adjoint/certificate.hpp"
#include "adjoint/diophantine.hpp"
#include "adjoint/system.hpp"
#include "adjoint/toric.hpp"

namespace adjoint::io {

using json = nlohmann::json;

inline constexpr int kVersion = 1;

struct ChopSpec {
  Divisor K, A;
  RatVec base_point;
  std::vector<std::string> boundary;
};

struct LiftSpec {
  std::string S;
  Divisor A, B;
  long p = 1;
  std::vector<Divisor> phi;  // on S; empty means "use the grid"
  std::optional<Rat> eps;
  int grid = 5;
};

struct RegionSpec {
  std::vector<std::string> V;
  Divisor A;
  std::optional<std::string> S;
};

struct CertSpec {
  std::string S;
  lifting::Lemma3Certificate cert;
};

struct InstanceDoc {
  int version = kVersion;
  std::string name;
  std::optional<toric::ToricVariety> variety;
  std::map<std::string, Divisor> divisors;
  std::optional<CharacteristicSystem> system;
  std::optional<ChopSpec> chop;
  std::optional<LiftSpec> lifting;
  std::optional<RegionSpec> regions;
  std::optional<Divisor> target;
  std::optional<QuadVec> point;
  std::optional<CertSpec> certificate;
  std::optional<dioph::DioCertificate> dio_certificate;

  const toric::ToricVariety& need_variety() const {
    if (!variety) throw Error(ErrorKind::Parse, "instance has no \"variety\"");
    return *variety;
  }
};

// ---------------------------------------------------------------------------
// Reading

namespace detail {

/// A JSON node together with its field path, for error messages.
struct Node {
  const json& j;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const { throw Error(ErrorKind::Parse, path + ": " + what); }

  Node at(const std::string& key) const {
    if (!j.is_object()) fail("expected an object");
    if (!j.contains(key)) fail("missing field \"" + key + "\"");
    return {j.at(key), path + "." + key};
  }
  std::optional<Node> opt(const std::string& key) const {
    if (!j.is_object()) fail("expected an object");
    if (!j.contains(key)) return std::nullopt;
    return Node{j.at(key), path + "." + key};
  }
  Node at(std::size_t i) const { return {j.at(i), path + "[" + std::to_string(i) + "]"}; }

  void only(std::initializer_list<const char*> keys) const {
    if (!j.is_object()) fail("expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!ok.count(it.key())) fail("unknown field \"" + it.key() + "\"");
  }

  std::size_t size() const {
    if (!j.is_array()) fail("expected an array");
    return j.size();
  }

  std::string str() const {
    if (!j.is_string()) fail("expected a string");
    return j.get<std::string>();
  }
  Rat rat() const {
    if (!j.is_string()) fail("numbers must be strings such as \"1/2\"");
    try {
      return parse_rat(j.get<std::string>());
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  Int integer() const {
    Rat q = rat();
    if (!is_integer(q)) fail("expected an integer");
    return numer(q);
  }
  long count() const {
    if (!j.is_number_integer()) fail("expected a JSON integer");
    return j.get<long>();
  }

  RatVec ratvec() const {
    RatVec v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).rat());
    return v;
  }
  std::vector<RatVec> ratmat() const {
    std::vector<RatVec> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).ratvec());
    return out;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < size(); ++i) {
      out.push_back(at(i).str());
      if (!seen.insert(out.back()).second) fail("name \"" + out.back() + "\" repeated");
    }
    return out;
  }
};

inline Divisor divisor_object(const Node& n, const std::string& space) {
  if (!n.j.is_object()) n.fail("expected a divisor object {prime: \"p/q\"}");
  Divisor::Map m;
  for (auto it = n.j.begin(); it != n.j.end(); ++it) m.emplace(it.key(), Node{it.value(), n.path + "." + it.key()}.rat());
  return Divisor(m, space);
}

QuadVec quadvec(const Node& n);

inline QuadNum quadnum(const Node& n, long d) {
  if (n.size() != 2) n.fail("quadratic numbers are [\"a\", \"b\"] meaning a + b sqrt(d)");
  Rat b = n.at(1).rat();
  if (b != 0 && d == 0) n.fail("irrational part needs a radicand");
  return QuadNum(n.at(0).rat(), b, b == 0 ? 0 : d);
}

inline QuadVec quadvec(const Node& n) {
  n.only({"d", "rational", "irrational"});
  long d = n.at("d").count();
  RatVec a = n.at("rational").ratvec(), b = n.at("irrational").ratvec();
  if (a.size() != b.size()) n.fail("rational and irrational parts differ in length");
  if (is_zero(b)) return QuadVec::from_rational(a);
  try {
    return QuadVec::from_parts(d, a, b);
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

class Reader {
 public:
  explicit Reader(InstanceDoc& doc) : doc_(doc) {}

  /// A divisor given inline, by name from "divisors", or as "K".
  Divisor divisor(const Node& n, const std::string& space = "X") const {
    if (n.j.is_string()) {
      auto name = n.str();
      if (name == "K") return variety(n).canonical();
      auto it = doc_.divisors.find(name);
      if (it == doc_.divisors.end()) n.fail("unknown divisor \"" + name + "\"");
      return it->second.with_space(space);
    }
    Divisor d = divisor_object(n, space);
    if (space == "X" && doc_.variety)
      for (const auto& [k, v] : d.coeffs()) {
        (void)v;
        check_prime(n, k);
      }
    return d;
  }

  const toric::ToricVariety& variety(const Node& n) const {
    if (!doc_.variety) n.fail("needs \"variety\"");
    return *doc_.variety;
  }

  void check_prime(const Node& n, const std::string& k) const {
    const auto& names = variety(n).names();
    if (std::find(names.begin(), names.end(), k) == names.end()) n.fail("\"" + k + "\" is not a ray of the fan");
  }

  toric::ToricVariety read_variety(const Node& n) const {
    n.only({"rays", "max_cones", "names"});
    std::vector<IntVec> rays;
    auto rn = n.at("rays");
    std::size_t dim = 0;
    for (std::size_t i = 0; i < rn.size(); ++i) {
      IntVec r;
      auto row = rn.at(i);
      for (std::size_t k = 0; k < row.size(); ++k) r.push_back(row.at(k).integer().convert_to<long>());
      if (i == 0) dim = r.size();
      if (r.size() != dim) row.fail("rays differ in length");
      rays.push_back(r);
    }
    std::vector<std::vector<std::size_t>> cones;
    auto cn = n.at("max_cones");
    for (std::size_t i = 0; i < cn.size(); ++i) {
      std::vector<std::size_t> c;
      auto row = cn.at(i);
      for (std::size_t k = 0; k < row.size(); ++k) {
        long idx = row.at(k).count();
        if (idx < 0 || static_cast<std::size_t>(idx) >= rays.size()) row.at(k).fail("ray index out of range");
        c.push_back(static_cast<std::size_t>(idx));
      }
      cones.push_back(c);
    }
    std::vector<std::string> names;
    if (auto nn = n.opt("names")) names = nn->names();
    try {
      return toric::ToricVariety(dim, rays, cones, names);
    } catch (const Error& e) {
      n.fail(e.what());
    }
  }

  CharacteristicSystem read_system(const Node& n) const {
    n.only({"cone", "pieces", "K", "A", "boundary"});
    auto cone_of = [](const Node& g) {
      auto gens = g.ratmat();
      if (gens.empty()) g.fail("cone needs generators");
      return cone::Cone(gens[0].size(), gens);
    };
    cone::Cone c = cone_of(n.at("cone"));
    std::vector<LinearPiece> pieces;
    auto pn = n.at("pieces");
    for (std::size_t i = 0; i < pn.size(); ++i) {
      auto p = pn.at(i);
      p.only({"cone", "map", "r"});
      LinearPiece lp;
      lp.cone = cone_of(p.at("cone"));
      auto mn = p.at("map");
      if (!mn.j.is_object()) mn.fail("expected {prime: [coefficients]}");
      for (auto it = mn.j.begin(); it != mn.j.end(); ++it) {
        Node row{it.value(), mn.path + "." + it.key()};
        check_prime(row, it.key());
        lp.map.emplace(it.key(), row.ratvec());
      }
      if (auto r = p.opt("r")) lp.r = r->ratvec();
      pieces.push_back(std::move(lp));
    }
    Divisor K = variety(n).canonical(), A;
    if (auto k = n.opt("K")) K = divisor(*k);
    if (auto a = n.opt("A")) A = divisor(*a);
    std::vector<std::string> bnd;
    if (auto b = n.opt("boundary")) {
      bnd = b->names();
      for (const auto& s : bnd) check_prime(*b, s);
    }
    try {
      return CharacteristicSystem(c, pieces, K, A, bnd);
    } catch (const Error& e) {
      n.fail(e.what());
    }
  }

  ChopSpec read_chop(const Node& n) const {
    n.only({"K", "A", "base_point", "boundary"});
    ChopSpec s;
    s.K = n.opt("K") ? divisor(*n.opt("K")) : variety(n).canonical();
    s.A = divisor(n.at("A"));
    s.base_point = n.at("base_point").ratvec();
    s.boundary = n.at("boundary").names();
    for (const auto& b : s.boundary) check_prime(n.at("boundary"), b);
    return s;
  }

  LiftSpec read_lifting(const Node& n) const {
    n.only({"S", "A", "B", "p", "phi", "eps", "grid"});
    LiftSpec s;
    s.S = n.at("S").str();
    check_prime(n.at("S"), s.S);
    s.A = divisor(n.at("A"));
    s.B = divisor(n.at("B"));
    s.p = n.at("p").count();
    if (s.p <= 0) n.at("p").fail("p must be positive");
    if (auto ph = n.opt("phi"))
      for (std::size_t i = 0; i < ph->size(); ++i) s.phi.push_back(divisor_object(ph->at(i), "S"));
    if (auto e = n.opt("eps")) s.eps = e->rat();
    if (auto g = n.opt("grid")) s.grid = static_cast<int>(g->count());
    return s;
  }

  RegionSpec read_regions(const Node& n) const {
    n.only({"V", "A", "S"});
    RegionSpec s;
    s.V = n.at("V").names();
    for (const auto& v : s.V) check_prime(n.at("V"), v);
    s.A = divisor(n.at("A"));
    if (auto sn = n.opt("S")) {
      s.S = sn->str();
      check_prime(*sn, *s.S);
    }
    return s;
  }

  CertSpec read_certificate(const Node& n) const {
    n.only({"S", "x", "w", "theta", "mu", "p", "eps", "delta", "C", "M"});
    CertSpec s;
    s.S = n.at("S").str();
    check_prime(n.at("S"), s.S);
    auto& c = s.cert;
    c.x = quadvec(n.at("x"));
    c.w = n.at("w").ratmat();
    auto th = n.at("theta");
    for (std::size_t i = 0; i < th.size(); ++i) c.theta.push_back(divisor_object(th.at(i), "S"));
    auto mu = n.at("mu");
    for (std::size_t i = 0; i < mu.size(); ++i) c.mu.push_back(quadnum(mu.at(i), c.x.d));
    auto p = n.at("p");
    for (std::size_t i = 0; i < p.size(); ++i) c.p.push_back(p.at(i).integer());
    c.eps = n.at("eps").rat();
    c.delta = n.at("delta").rat();
    c.C = n.at("C").rat();
    c.M = n.at("M").count();
    return s;
  }

  dioph::DioCertificate read_dio(const Node& n) const {
    n.only({"x", "subspace", "points", "weights", "denominators", "eps", "M"});
    dioph::DioCertificate c;
    c.x = quadvec(n.at("x"));
    auto sn = n.at("subspace");
    sn.only({"base_point", "directions", "relations", "rhs"});
    c.subspace.base_point = sn.at("base_point").ratvec();
    c.subspace.direction_basis = sn.at("directions").ratmat();
    c.subspace.relations = sn.at("relations").ratmat();
    c.subspace.relation_rhs = sn.at("rhs").ratvec();
    c.points = n.at("points").ratmat();
    auto wn = n.at("weights");
    for (std::size_t i = 0; i < wn.size(); ++i) c.weights.push_back(quadnum(wn.at(i), c.x.d));
    auto dn = n.at("denominators");
    for (std::size_t i = 0; i < dn.size(); ++i) c.denominators.push_back(dn.at(i).integer());
    c.eps = n.at("eps").rat();
    c.M = n.at("M").count();
    return c;
  }

 private:
  InstanceDoc& doc_;
};

inline std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline InstanceDoc parse_instance_text(const std::string& text, const std::string& origin = "<input>") {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, origin + ": " + detail::line_context(text, e.byte) + ": malformed JSON");
  }
  detail::Node root{j, origin};
  root.only({"version", "name", "variety", "divisors", "system", "chop", "lifting", "regions", "target", "point",
             "certificate", "dio_certificate"});
  InstanceDoc doc;
  doc.version = static_cast<int>(root.at("version").count());
  if (doc.version != kVersion)
    root.at("version").fail("unsupported version " + std::to_string(doc.version) + " (expected 1)");
  if (auto n = root.opt("name")) doc.name = n->str();
  detail::Reader rd(doc);
  if (auto n = root.opt("variety")) doc.variety = rd.read_variety(*n);
  if (auto n = root.opt("divisors")) {
    if (!n->j.is_object()) n->fail("expected {name: divisor}");
    for (auto it = n->j.begin(); it != n->j.end(); ++it) {
      detail::Node d{it.value(), n->path + "." + it.key()};
      if (it.key() == "K") d.fail("\"K\" is reserved for the canonical divisor");
      doc.divisors.emplace(it.key(), rd.divisor(d));
    }
  }
  if (auto n = root.opt("system")) doc.system = rd.read_system(*n);
  if (auto n = root.opt("chop")) doc.chop = rd.read_chop(*n);
  if (auto n = root.opt("lifting")) doc.lifting = rd.read_lifting(*n);
  if (auto n = root.opt("regions")) doc.regions = rd.read_regions(*n);
  if (auto n = root.opt("target")) doc.target = rd.divisor(*n);
  if (auto n = root.opt("point")) doc.point = detail::quadvec(*n);
  if (auto n = root.opt("certificate")) doc.certificate = rd.read_certificate(*n);
  if (auto n = root.opt("dio_certificate")) doc.dio_certificate = rd.read_dio(*n);
  return doc;
}

inline InstanceDoc parse_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Writing

inline json to_json(const Rat& q) { return to_string(q); }

inline json to_json(const RatVec& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

inline json to_json(const IntVec& v) { return to_json(to_ratvec(v)); }

inline json to_json(const std::vector<RatVec>& m) {
  json a = json::array();
  for (const auto& v : m) a.push_back(to_json(v));
  return a;
}

inline json to_json(const Divisor& d) {
  json o = json::object();
  for (const auto& [k, v] : d.coeffs()) o[k] = to_string(v);
  return o;
}

inline json to_json(const QuadNum& q) { return json::array({to_string(q.rational_part()), to_string(q.irrational_part())}); }

inline json to_json(const QuadVec& x) {
  return json{{"d", x.d}, {"rational", to_json(x.rational_parts())}, {"irrational", to_json(x.irrational_parts())}};
}

inline json to_json(const toric::ToricVariety& x) {
  json rays = json::array(), cones = json::array();
  for (const auto& r : x.rays()) rays.push_back(to_json(r));
  for (const auto& c : x.max_cones()) cones.push_back(c);
  return json{{"rays", rays}, {"max_cones", cones}, {"names", x.names()}};
}

inline json to_json(const CharacteristicSystem& s) {
  json pieces = json::array();
  for (const auto& p : s.pieces()) {
    json m = json::object();
    for (const auto& [k, v] : p.map) m[k] = to_json(v);
    json o{{"cone", to_json(p.cone.generators())}, {"map", m}};
    if (!p.r.empty()) o["r"] = to_json(p.r);
    pieces.push_back(o);
  }
  json o{{"cone", to_json(s.cone().generators())}, {"pieces", pieces}, {"K", to_json(s.K())}, {"A", to_json(s.A())}};
  if (!s.boundary().empty()) o["boundary"] = s.boundary();
  return o;
}

inline json to_json(const CertSpec& s) {
  const auto& c = s.cert;
  json th = json::array(), mu = json::array(), p = json::array();
  for (const auto& t : c.theta) th.push_back(to_json(t));
  for (const auto& m : c.mu) mu.push_back(to_json(m));
  for (const auto& q : c.p) p.push_back(q.str());
  return json{{"S", s.S},         {"x", to_json(c.x)},         {"w", to_json(c.w)},        {"theta", th},
              {"mu", mu},         {"p", p},                    {"eps", to_json(c.eps)},    {"delta", to_json(c.delta)},
              {"C", to_json(c.C)}, {"M", c.M}};
}

inline json to_json(const dioph::DioCertificate& c) {
  json w = json::array(), p = json::array();
  for (const auto& r : c.weights) w.push_back(to_json(r));
  for (const auto& q : c.denominators) p.push_back(q.str());
  json sub{{"base_point", to_json(c.subspace.base_point)},
           {"directions", to_json(c.subspace.direction_basis)},
           {"relations", to_json(c.subspace.relations)},
           {"rhs", to_json(c.subspace.relation_rhs)}};
  return json{{"x", to_json(c.x)},      {"subspace", sub}, {"points", to_json(c.points)}, {"weights", w},
              {"denominators", p},        {"eps", to_json(c.eps)}, {"M", c.M}};
}

/// Serializes every populated block; parse_instance_text(dump(doc)) == doc.
inline json to_json(const InstanceDoc& d) {
  json o{{"version", d.version}};
  if (!d.name.empty()) o["name"] = d.name;
  if (d.variety) o["variety"] = to_json(*d.variety);
  if (!d.divisors.empty()) {
    json m = json::object();
    for (const auto& [k, v] : d.divisors) m[k] = to_json(v);
    o["divisors"] = m;
  }
  if (d.system) o["system"] = to_json(*d.system);
  if (d.chop)
    o["chop"] = json{{"K", to_json(d.chop->K)},
                     {"A", to_json(d.chop->A)},
                     {"base_point", to_json(d.chop->base_point)},
                     {"boundary", d.chop->boundary}};
  if (d.lifting) {
    const auto& l = *d.lifting;
    json lo{{"S", l.S}, {"A", to_json(l.A)}, {"B", to_json(l.B)}, {"p", l.p}, {"grid", l.grid}};
    if (!l.phi.empty()) {
      json ph = json::array();
      for (const auto& f : l.phi) ph.push_back(to_json(f));
      lo["phi"] = ph;
    }
    if (l.eps) lo["eps"] = to_json(*l.eps);
    o["lifting"] = lo;
  }
  if (d.regions) {
    json r{{"V", d.regions->V}, {"A", to_json(d.regions->A)}};
    if (d.regions->S) r["S"] = *d.regions->S;
    o["regions"] = r;
  }
  if (d.target) o["target"] = to_json(*d.target);
  if (d.point) o["point"] = to_json(*d.point);
  if (d.certificate) o["certificate"] = to_json(*d.certificate);
  if (d.dio_certificate) o["dio_certificate"] = to_json(*d.dio_certificate);
  return o;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace adjoint::io
