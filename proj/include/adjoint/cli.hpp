#pragma once

// Command dispatch for the adjoint_kernel tool. Exit codes: 0 pass,
// 2 mathematical check failed, 1 usage or parse error.

#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adjoint/io.hpp"
#include "adjoint/main_construction.hpp"

namespace adjoint::cli {

using io::json;

enum Exit { kPass = 0, kUsage = 1, kFail = 2 };

struct Options {
  std::uint64_t seed = 1;
  int bound = 10;
  int nmax = toric::kDefaultLadder;
  std::string mode = "simple";
  std::string eps;
  long modulus = 1;
  bool as_json = false;
  std::string cone;
  std::string file;
};

/// Text lines plus a JSON body; the command decides the exit code.
struct Report {
  std::string command;
  std::vector<std::string> lines;
  json body = json::object();
  int code = kPass;

  void line(const std::string& s) { lines.push_back(s); }
  void fail(const std::string& s) {
    code = kFail;
    lines.push_back("FAIL " + s);
  }
};

inline std::vector<RatVec> parse_rows(const std::string& spec) {
  std::vector<RatVec> rows;
  std::stringstream ss(spec);
  std::string row;
  while (std::getline(ss, row, ';')) {
    RatVec v;
    std::stringstream rs(row);
    std::string e;
    while (std::getline(rs, e, ',')) {
      e.erase(0, e.find_first_not_of(' '));
      e.erase(e.find_last_not_of(' ') + 1);
      v.push_back(parse_rat(e));
    }
    if (v.empty()) throw Error(ErrorKind::Parse, "--cone: empty generator in \"" + spec + "\"");
    if (!rows.empty() && v.size() != rows[0].size()) throw Error(ErrorKind::Parse, "--cone: generators differ in length");
    rows.push_back(v);
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, "--cone needs generators such as \"1,0;1,2\"");
  return rows;
}

namespace cmd {

inline std::string vec_line(const std::vector<RatVec>& vs) {
  std::string s;
  for (const auto& v : vs) s += (s.empty() ? "" : " ") + to_string(v);
  return s;
}

inline std::string vec_line(const std::vector<IntVec>& vs) {
  std::string s;
  for (const auto& v : vs) s += (s.empty() ? "" : " ") + to_string(v);
  return s;
}

inline const Divisor& need_target(const io::InstanceDoc& d) {
  if (!d.target) throw Error(ErrorKind::Parse, "instance has no \"target\" divisor");
  return *d.target;
}

inline void hilbert(const Options& o, Report& r) {
  auto rows = parse_rows(o.cone);
  auto basis = cone::hilbert_basis(cone::Cone(rows[0].size(), rows));
  r.line(vec_line(basis));
  r.body["basis"] = io::to_json(basis);
}

inline void sections(const io::InstanceDoc& d, Report& r) {
  auto s = toric::sections(d.need_variety(), need_target(d));
  r.line("dim H0 = " + std::to_string(s.monomials.size()));
  r.line(vec_line(s.monomials));
  json ms = json::array();
  for (const auto& m : s.monomials) ms.push_back(io::to_json(m));
  r.body["dim"] = s.monomials.size();
  r.body["monomials"] = ms;
}

inline void fixmob(const io::InstanceDoc& d, Report& r) {
  auto fm = toric::fix_mob(d.need_variety(), need_target(d));
  r.line("Fix = " + fm.fix.str());
  r.line("Mob = " + fm.mob.str());
  r.body["fix"] = io::to_json(fm.fix);
  r.body["mob"] = io::to_json(fm.mob);
}

inline void sbl(const io::InstanceDoc& d, const Options& o, Report& r) {
  auto b = toric::stable_base_locus(d.need_variety(), need_target(d), o.nmax);
  std::string s;
  for (const auto& n : b.divisorial) s += (s.empty() ? "" : " ") + n;
  r.line(b.whole_x ? "B = X" : "divisorial part: {" + s + "}");
  if (!b.ladder_consistent) r.fail("base loci of the multiples disagree with the LP");
  r.body["divisorial"] = b.divisorial;
  r.body["whole_x"] = b.whole_x;
  r.body["ladder_consistent"] = b.ladder_consistent;
}

inline void asymfix(const io::InstanceDoc& d, const Options& o, Report& r) {
  auto a = toric::asymptotic_fixed(d.need_variety(), need_target(d), o.nmax);
  r.line("F = " + a.value.str());
  r.line(a.ladder_stabilized ? "ladder stabilized at n = " + std::to_string(*a.stabilized_at)
                             : "ladder not stabilized up to n = " + std::to_string(o.nmax));
  if (a.on_boundary) r.line("pseudo-effective but not big" + (a.note.empty() ? "" : ": " + a.note));
  r.body["value"] = io::to_json(a.value);
  r.body["on_boundary"] = a.on_boundary;
  r.body["ladder_stabilized"] = a.ladder_stabilized;
  if (a.stabilized_at) r.body["stabilized_at"] = *a.stabilized_at;
}

inline json region_json(const toric::RegionResult& g) {
  json ineq = json::array();
  for (const auto& h : g.inequalities) ineq.push_back(json{{"a", io::to_json(h.a)}, {"c", io::to_json(h.c)}});
  return json{{"inequalities", ineq}, {"vertices", io::to_json(g.vertices)}};
}

/// Regions plus seeded membership probes against per-point oracles.
inline void regions(const io::InstanceDoc& d, const Options& o, Report& r) {
  if (!d.regions) throw Error(ErrorKind::Parse, "instance has no \"regions\" block");
  const auto& x = d.need_variety();
  const auto& spec = *d.regions;
  auto reg = toric::adjoint_regions(x, spec.V, spec.A, spec.S);
  const std::size_t n = spec.V.size();
  auto divisor_at = [&](const RatVec& b) {
    Divisor B({}, "X");
    for (std::size_t j = 0; j < n; ++j) B.set(spec.V[j], b[j]);
    return x.canonical() + spec.A + B;
  };
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<long> u(0, 60);
  const int probes = 200;
  int bad = 0;
  for (int t = 0; t < probes; ++t) {
    RatVec b;
    for (std::size_t j = 0; j < n; ++j) b.emplace_back(u(rng), 60);
    Divisor D = divisor_at(b);
    bool pe = toric::is_pseudo_effective(x, D);
    if (reg.E.contains(b) != pe) ++bad, r.fail("E disagrees at " + to_string(b));
    if (spec.S) {
      std::size_t s = x.ray_index(*spec.S);
      bool ok = !toric::in_stable_base_locus(x, D, s);
      if (reg.BS.contains(b) != ok) ++bad, r.fail("B_S disagrees at " + to_string(b));
      std::size_t j = static_cast<std::size_t>(std::find(spec.V.begin(), spec.V.end(), *spec.S) - spec.V.begin());
      b[j] = 1;
      bool ok1 = !toric::in_stable_base_locus(x, divisor_at(b), s);
      if (reg.BS1.contains(b) != ok1) ++bad, r.fail("B_S^1 disagrees at " + to_string(b));
    }
  }
  r.line("E: " + std::to_string(reg.E.inequalities.size()) + " inequalities, vertices " + vec_line(reg.E.vertices));
  r.body["L"] = region_json(reg.L);
  r.body["E"] = region_json(reg.E);
  if (spec.S) {
    r.line("B_S: vertices " + vec_line(reg.BS.vertices));
    r.line("B_S^1: vertices " + vec_line(reg.BS1.vertices));
    r.body["BS"] = region_json(reg.BS);
    r.body["BS1"] = region_json(reg.BS1);
  }
  r.line(std::to_string(probes) + " probes, " + std::to_string(bad) + " disagreements (seed " + std::to_string(o.seed) + ")");
  r.body["probes"] = probes;
  r.body["disagreements"] = bad;
}

inline mc::ChopInstance chop_instance(const io::InstanceDoc& d) {
  if (!d.chop) throw Error(ErrorKind::Parse, "instance has no \"chop\" block");
  const auto& c = *d.chop;
  return mc::make_chop_instance(d.need_variety(), c.K, c.A, c.base_point, c.boundary);
}

inline void chop(const io::InstanceDoc& d, Report& r) {
  auto inst = chop_instance(d);
  auto res = mc::chop_backfaces(inst);
  r.line("parent cone: " + vec_line(res.parent.generators()));
  json ps = json::array();
  for (const auto& p : res.pieces) {
    r.line("piece " + std::to_string(p.j) + " (strictly dlt with " + p.strictly_dlt_with + "): " +
           vec_line(p.cone.generators()));
    ps.push_back(json{{"j", p.j}, {"strictly_dlt_with", p.strictly_dlt_with}, {"cone", io::to_json(p.cone.generators())}});
  }
  r.body["parent"] = io::to_json(res.parent.generators());
  r.body["pieces"] = ps;
}

inline void degree_bound(const io::InstanceDoc& d, Report& r) {
  auto inst = chop_instance(d);
  auto res = mc::chop_backfaces(inst);
  auto nb = mc::degree_bound(res.parent, mc::backface_directions(res));
  r.line("N = " + std::to_string(nb.N));
  r.line("LP bound = " + to_string(nb.lp_bound));
  if (nb.witness) r.line("N - 1 fails at m = " + to_string(*nb.witness) + " in piece " + std::to_string(nb.witness_piece));
  r.body["N"] = nb.N;
  r.body["lp_bound"] = io::to_json(nb.lp_bound);
  if (nb.witness) r.body["witness"] = io::to_json(*nb.witness);
}

inline void verify_fg(const io::InstanceDoc& d, const Options& o, Report& r) {
  if (!d.system) throw Error(ErrorKind::Parse, "instance has no \"system\"");
  auto cert = mc::run_pipeline(d.need_variety(), *d.system, o.bound);
  r.line("N = " + std::to_string(cert.N) + ", delta = " + to_string(cert.delta));
  r.line("generators (" + std::to_string(cert.G.size()) + "):");
  json g = json::array();
  for (const auto& e : cert.G) {
    r.line("  deg " + to_string(e.deg) + " mono " + to_string(e.mono));
    g.push_back(json{{"deg", io::to_json(e.deg)}, {"mono", io::to_json(e.mono)}});
  }
  r.line("generation verified up to total degree " + std::to_string(cert.verified_bound));
  if (!cert.ok()) r.fail("generation fails at " + to_string(*cert.report.first_failure));
  r.body["N"] = cert.N;
  r.body["delta"] = io::to_json(cert.delta);
  r.body["tau"] = io::to_json(cert.tau);
  r.body["generators"] = g;
  r.body["verified_bound"] = cert.verified_bound;
}

inline void lift_check(const io::InstanceDoc& d, const Options& o, Report& r) {
  if (!d.lifting) throw Error(ErrorKind::Parse, "instance has no \"lifting\" block");
  const auto& l = *d.lifting;
  auto inst = lifting::make_lifting_instance(d.need_variety(), l.S, l.A, l.B, l.p);
  r.body["mode"] = o.mode;
  if (o.mode == "simple") {
    auto rep = lifting::simple_lifting_check(inst);
    r.line("Phi_p = " + rep.phi.str() + ", Theta_p = " + rep.theta.str());
    r.line(std::to_string(rep.lhs.size()) + " restricted sections, " + std::to_string(rep.rhs.size()) + " on S");
    if (rep.holds) r.line("equality holds");
    else r.fail("equality fails: " + rep.detail);
    r.body["phi"] = io::to_json(rep.phi);
    r.body["holds"] = rep.holds;
    return;
  }
  lifting::LiftMode mode;
  Rat eps = 0;
  if (o.mode == "sharp") mode = lifting::LiftMode::Sharp;
  else if (o.mode == "tinker") {
    mode = lifting::LiftMode::Tinker;
    if (!o.eps.empty()) eps = parse_rat(o.eps);
    else if (l.eps) eps = *l.eps;
    else throw Error(ErrorKind::Parse, "tinker mode needs --eps or lifting.eps");
  } else throw Error(ErrorKind::Parse, "--mode must be simple, sharp or tinker");
  auto lower = lifting::admissible_lower(inst, mode, eps);
  auto phis = l.phi.empty() ? lifting::phi_grid(lower, inst.omega, l.p, l.grid) : l.phi;
  json rows = json::array();
  bool all = true;
  for (const auto& phi : phis) {
    auto rep = lifting::sharp_lifting_check(inst, phi, mode, eps);
    all = all && rep.holds;
    r.line("Phi = " + phi.str() + ": " + (rep.holds ? "holds" : "FAILS " + rep.detail));
    rows.push_back(json{{"phi", io::to_json(phi)}, {"holds", rep.holds}});
  }
  r.line("admissible range [" + lower.str() + ", " + inst.omega.str() + "], " + std::to_string(phis.size()) + " values");
  if (all) r.line("inclusion holds");
  else r.fail("inclusion fails");
  r.body["lower"] = io::to_json(lower);
  r.body["omega"] = io::to_json(inst.omega);
  r.body["checks"] = rows;
  r.body["holds"] = all;
}

/// Emits an instance document holding the certificate, so the JSON output
/// feeds straight into check-cert.
inline void dioph(const io::InstanceDoc& d, const Options& o, Report& r) {
  if (!d.point) throw Error(ErrorKind::Parse, "instance has no \"point\"");
  Rat eps = o.eps.empty() ? Rat(1, 10) : parse_rat(o.eps);
  auto c = dioph::approximate(*d.point, eps, o.modulus);
  auto rep = dioph::check_certificate(c);
  for (std::size_t i = 0; i < c.points.size(); ++i)
    r.line("w_" + std::to_string(i + 1) + " = " + to_string(c.points[i]) + "  p = " + c.denominators[i].str() +
           "  r = " + c.weights[i].str());
  if (rep.ok) r.line("certificate valid");
  for (const auto& f : rep.details) r.fail(f);
  io::InstanceDoc out;
  out.dio_certificate = c;
  r.body = io::to_json(out);
}

inline void check_cert(const io::InstanceDoc& d, Report& r) {
  if (!d.certificate && !d.dio_certificate) throw Error(ErrorKind::Parse, "instance has no certificate");
  if (d.dio_certificate) {
    auto rep = dioph::check_certificate(*d.dio_certificate);
    if (rep.ok) r.line("approximation certificate valid");
    for (const auto& f : rep.details) r.fail(f);
    r.body["approximation"] = json{{"ok", rep.ok}, {"failures", rep.failures}};
  }
  if (d.certificate) {
    if (!d.system) throw Error(ErrorKind::Parse, "checking a Theta certificate needs \"system\"");
    auto rep = lifting::verify_lemma3(d.need_variety(), d.certificate->S, *d.system, d.certificate->cert);
    std::stringstream ss(rep.str());
    for (std::string line; std::getline(ss, line);) r.line(line);
    if (!rep.pass) r.code = kFail;
    r.body["theta"] = json{{"pass", rep.pass},
                           {"failed_items", rep.failed_items},
                           {"key_checked", rep.key_checked},
                           {"conclusion_checked", rep.conclusion_checked},
                           {"affine_points", rep.affine_points}};
  }
}

}  // namespace cmd

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"hilbert", "sections", "fixmob",      "sbl",       "asymfix", "regions",
                                          "chop",    "degree-bound", "verify-fg", "lift-check", "dioph", "check-cert"};
  return c;
}

inline int execute(const std::string& name, const Options& o, std::ostream& out) {
  Report r;
  r.command = name;
  if (name == "hilbert") cmd::hilbert(o, r);
  else {
    auto doc = io::parse_instance(o.file);
    if (name == "sections") cmd::sections(doc, r);
    else if (name == "fixmob") cmd::fixmob(doc, r);
    else if (name == "sbl") cmd::sbl(doc, o, r);
    else if (name == "asymfix") cmd::asymfix(doc, o, r);
    else if (name == "regions") cmd::regions(doc, o, r);
    else if (name == "chop") cmd::chop(doc, r);
    else if (name == "degree-bound") cmd::degree_bound(doc, r);
    else if (name == "verify-fg") cmd::verify_fg(doc, o, r);
    else if (name == "lift-check") cmd::lift_check(doc, o, r);
    else if (name == "dioph") cmd::dioph(doc, o, r);
    else if (name == "check-cert") cmd::check_cert(doc, r);
  }
  if (o.as_json) {
    json j = r.body;
    if (name != "dioph") {
      j["command"] = name;
      j["exit"] = r.code;
    }
    out << io::dump(j);
  } else {
    for (const auto& l : r.lines) out << l << "\n";
  }
  return r.code;
}

/// Entry point shared by the tool and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks for adjoint rings on toric instances"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "seed for randomized property checks");
  app.add_option("--bound", o.bound, "verify-fg: verify generation up to N + bound");
  app.add_option("--nmax", o.nmax, "length of stabilization ladders");
  app.add_option("--mode", o.mode, "lift-check mode: simple, sharp or tinker");
  app.add_option("--eps", o.eps, "rational epsilon, e.g. 1/10");
  app.add_option("--modulus", o.modulus, "denominator modulus M");
  app.add_flag("--json", o.as_json, "print the report as JSON");
  for (const auto& c : commands()) {
    auto* s = app.add_subcommand(c);
    if (c == "hilbert") s->add_option("--cone", o.cone, "generators, e.g. \"1,0;1,2\"")->required();
    else s->add_option("file", o.file, "instance file")->required();
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (o.modulus < 1) throw Error(ErrorKind::Parse, "--modulus must be >= 1");
    if (o.nmax < 1) throw Error(ErrorKind::Parse, "--nmax must be >= 1");
    return execute(name, o, out);
  } catch (const Error& e) {
    err << name << ": " << kind_name(e.kind()) << " error" << (e.stage().empty() ? "" : " at " + e.stage()) << ": "
        << e.what() << "\n";
    return e.kind() == ErrorKind::Parse ? kUsage : kFail;
  }
}

}  // namespace adjoint::cli
