#pragma once

// Restricted section rings, Theta/Phi/Omega data, the lifting inclusions as
// monomial-set checks, and the certificate verifier for the affineness lemma.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adjoint/affine.hpp"
#include "adjoint/graded_ring.hpp"
#include "adjoint/quadratic.hpp"
#include "adjoint/system.hpp"
#include "adjoint/toric.hpp"

namespace adjoint::lifting {

// ---------------------------------------------------------------------------
// Facet charts and restricted rings

/// Integral parametrization of { m : <m, v_S> = s }: m = s w + sum u_i k_i.
/// For dim X >= 2 the coordinates u agree with Restriction's S-characters.
struct FacetChart {
  std::size_t rho = 0;
  IntVec w;
  std::vector<IntVec> kernel;

  IntVec lift(const IntVec& u, long s) const {
    IntVec m(w.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      m[i] = s * w[i];
      for (std::size_t k = 0; k < kernel.size(); ++k) m[i] += u[k] * kernel[k][i];
    }
    return m;
  }
};

inline FacetChart facet_chart(const toric::ToricVariety& x, const std::string& s) {
  FacetChart ch;
  ch.rho = x.ray_index(s);
  const std::size_t n = x.dim();
  if (n == 1) {
    ch.w = x.rays()[ch.rho];  // primitive in Z, so +-1
    return ch;
  }
  toric::Restriction r(x, s);
  ch.w = to_intvec(r.lift_character(RatVec(n - 1, Rat(0)), Rat(1)));
  for (std::size_t i = 0; i < n - 1; ++i) {
    RatVec e(n - 1, Rat(0));
    e[i] = 1;
    ch.kernel.push_back(to_intvec(r.lift_character(e, Rat(0))));
  }
  return ch;
}

/// Graded pieces of the restricted ring over a linear system given by its
/// coefficient rows: monomials m of D(l) on the facet <m, v_S> = -D(l)_S, in
/// chart coordinates u.
struct RestrictedRing {
  cone::Cone cone;
  std::map<std::string, RatVec> rows;
  std::string s;
  FacetChart chart;
};

inline RestrictedRing restricted_ring(const toric::ToricVariety& x, const cone::Cone& c,
                                      const std::map<std::string, RatVec>& rows, const std::string& s) {
  for (auto& [k, row] : rows) {
    x.ray_index(k);
    if (row.size() != c.ambient_dim()) throw Error(ErrorKind::Dimension, "restricted ring: row width mismatch");
    if (!is_integral(row)) throw Error(ErrorKind::Domain, "restricted ring: coefficient rows must be integral");
  }
  return RestrictedRing{c, rows, s, facet_chart(x, s)};
}

namespace detail {

inline RatVec coeffs_at(const toric::ToricVariety& x, const std::map<std::string, RatVec>& rows, const IntVec& l) {
  RatVec c(x.num_rays(), Rat(0));
  for (auto& [k, row] : rows) c[x.ray_index(k)] = dot(row, l);
  return c;
}

}  // namespace detail

/// Lift of a restricted monomial (l, u) to the X-monomial on the S-facet.
inline IntVec lift_restricted(const toric::ToricVariety& x, const RestrictedRing& rr, const IntVec& l,
                              const IntVec& u) {
  RatVec c = detail::coeffs_at(x, rr.rows, l);
  long s = -numer(c[rr.chart.rho]).convert_to<long>();
  IntVec m = rr.chart.lift(u, s);
  for (std::size_t i = 0; i < x.num_rays(); ++i)
    if (Rat(dot(m, x.rays()[i])) + c[i] < 0)
      throw Error(ErrorKind::Check, "restricted monomial " + to_string(to_ratvec(u)) + " at " + to_string(to_ratvec(l)) +
                                        " has no lift to X");
  return m;
}

/// Monomials of the restricted piece at l, in chart coordinates.
inline std::vector<IntVec> restricted_piece(const toric::ToricVariety& x, const RestrictedRing& rr, const IntVec& l) {
  RatVec c = detail::coeffs_at(x, rr.rows, l);
  std::vector<IntVec> out;
  for (const auto& m : toric::lattice_points(x, c, {rr.chart.rho})) {
    IntVec u;
    if (x.dim() > 1) {
      // solve m = s w + K u; the chart is unimodular so u is integral
      RatMat a;
      for (std::size_t i = 0; i < x.dim(); ++i) {
        RatVec row{Rat(rr.chart.w[i])};
        for (const auto& k : rr.chart.kernel) row.push_back(Rat(k[i]));
        a.push_back(row);
      }
      auto t = linalg::solve(a, to_ratvec(m), x.dim());
      u = to_intvec(RatVec(t->begin() + 1, t->end()));
    }
    out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Hilbert basis of the restricted ring's monoid {(l, u)}: l in the cone and
/// the lifted m in the polytope of D(l). Each element is a ring generator.
inline ring::GeneratorSet restricted_ring_generators(const toric::ToricVariety& x, const RestrictedRing& rr) {
  const std::size_t r = rr.cone.ambient_dim(), k = rr.chart.kernel.size(), d = r + k;
  std::vector<RatVec> gens;
  for (const auto& g : rr.cone.generators()) {
    RatVec v = g;
    v.resize(d, Rat(0));
    gens.push_back(v);
  }
  for (std::size_t i = 0; i < k; ++i) {
    RatVec e(d, Rat(0));
    e[r + i] = 1;
    gens.push_back(e);
    gens.push_back(Rat(-1) * e);
  }
  cone::Cone q(d, gens);
  RatVec row_s(r, Rat(0));
  if (auto it = rr.rows.find(x.names()[rr.chart.rho]); it != rr.rows.end()) row_s = it->second;
  for (std::size_t i = 0; i < x.num_rays(); ++i) {
    if (i == rr.chart.rho) continue;
    const auto& v = x.rays()[i];
    RatVec f(d, Rat(0));
    RatVec row_i(r, Rat(0));
    if (auto it = rr.rows.find(x.names()[i]); it != rr.rows.end()) row_i = it->second;
    Rat wv = Rat(dot(rr.chart.w, v));
    for (std::size_t j = 0; j < r; ++j) f[j] = row_i[j] - wv * row_s[j];
    for (std::size_t t = 0; t < k; ++t) f[r + t] = Rat(dot(rr.chart.kernel[t], v));
    q = cone::intersect_halfspace(q, f);
  }
  ring::GeneratorSet out;
  for (const auto& h : cone::hilbert_basis(q, d)) {
    IntVec hv = to_intvec(h);
    out.push_back({IntVec(hv.begin(), hv.begin() + static_cast<long>(r)), IntVec(hv.begin() + static_cast<long>(r), hv.end())});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Lifting instances

/// Delta = S + A + B with A ample. A stands for a general member of its
/// class, so only S + B is held to the plt coefficient shape.
struct LiftingInstance {
  toric::ToricVariety variety;
  std::string s;
  Divisor A, B;
  long p = 1;
  Divisor delta, omega;  // omega = (A + B)|_S
  Divisor K_S;           // (K_X + S)|_S

  Divisor adjoint() const { return variety.canonical() + delta; }
};

inline LiftingInstance make_lifting_instance(const toric::ToricVariety& x, const std::string& s, const Divisor& A,
                                             const Divisor& B, long p) {
  if (p <= 0) throw Error(ErrorKind::Domain, "p must be positive");
  x.ray_index(s);
  if (A[s] != 0 || B[s] != 0) throw Error(ErrorKind::Domain, "A + B must not contain S");
  for (auto& [k, v] : B.coeffs())
    if (v < 0 || v >= 1) throw Error(ErrorKind::Domain, "boundary coefficient of " + k + " outside [0,1)");
  if (!toric::is_ample(x, A)) throw Error(ErrorKind::Precondition, "A is not ample");
  LiftingInstance inst{x, s, A, B, p, {}, {}, {}};
  inst.delta = x.prime(s) + A + B;
  if (!is_integral(Rat(p) * inst.delta)) throw Error(ErrorKind::Domain, "p * Delta is not integral");
  toric::Restriction r(inst.variety, s);
  inst.omega = r.restrict(A + B);
  inst.K_S = r.restrict(x.canonical() + x.prime(s));
  if (!(inst.K_S == r.variety().canonical())) throw Error(ErrorKind::Check, "adjunction failed on " + s);
  return inst;
}

struct LiftingReport {
  bool holds = false;
  std::vector<IntVec> lhs;  // |p(K_X + Delta)|_S as S-characters
  std::vector<IntVec> rhs;  // |p(K_S + Theta)| (+ p Phi) as S-characters
  Divisor phi, theta, lower;
  std::string detail;
};

namespace detail {

inline std::vector<IntVec> section_chars(const toric::ToricVariety& s, const Divisor& d) {
  auto m = toric::sections(s, d).monomials;
  std::sort(m.begin(), m.end());
  return m;
}

inline std::string first_difference(const std::vector<IntVec>& a, const std::vector<IntVec>& b) {
  for (const auto& u : a)
    if (!std::binary_search(b.begin(), b.end(), u)) return to_string(to_ratvec(u));
  return {};
}

}  // namespace detail

/// |p(K+Delta)|_S = |p(K_S+Theta_p)| + p Phi_p with Phi_p = Omega ∧ F_p.
inline LiftingReport simple_lifting_check(const LiftingInstance& inst) {
  const auto& x = inst.variety;
  toric::Restriction r(x, inst.s);
  Divisor kd = inst.adjoint();
  if (toric::in_stable_base_locus(x, kd, r.ray()))
    throw Error(ErrorKind::Precondition, "S lies in the stable base locus of K + Delta");
  auto rs = toric::restricted_system(r, Rat(inst.p) * kd);
  if (!rs.fix) throw Error(ErrorKind::Precondition, "|p(K + Delta)|_S is empty for p = " + std::to_string(inst.p));
  LiftingReport rep;
  Divisor fp = Rat(1, inst.p) * *rs.fix;
  rep.lower = fp;
  rep.phi = wedge(inst.omega, fp);
  rep.theta = inst.omega - rep.phi;
  rep.lhs = rs.monomials;
  rep.rhs = detail::section_chars(r.variety(), Rat(inst.p) * (inst.K_S + rep.theta));
  rep.holds = rep.lhs == rep.rhs;
  if (!rep.holds) {
    auto a = detail::first_difference(rep.rhs, rep.lhs), b = detail::first_difference(rep.lhs, rep.rhs);
    rep.detail = !a.empty() ? "right side has " + a + " not on the left" : "left side has " + b + " not on the right";
  }
  return rep;
}

enum class LiftMode { Simple, Sharp, Tinker };

/// Admissible lower end for Phi: Omega ∧ F_S(K+Delta+A/p) (sharp) or
/// Omega ∧ (1 - eps/p) F_S(K+Delta) (tinkering).
inline Divisor admissible_lower(const LiftingInstance& inst, LiftMode mode, const Rat& eps = 0) {
  const auto& x = inst.variety;
  toric::Restriction r(x, inst.s);
  Divisor kd = inst.adjoint();
  if (mode == LiftMode::Sharp) {
    Divisor d = kd + Rat(1, inst.p) * inst.A;
    if (toric::in_stable_base_locus(x, d, r.ray()))
      throw Error(ErrorKind::Precondition, "S lies in the stable base locus of K + Delta + A/p");
    return wedge(inst.omega, toric::restricted_fixed_lp(r, d));
  }
  if (mode == LiftMode::Tinker) {
    if (toric::in_stable_base_locus(x, kd, r.ray()))
      throw Error(ErrorKind::Precondition, "S lies in the stable base locus of K + Delta");
    if (eps <= 0 || !toric::is_ample(x, eps * kd + inst.A))
      throw Error(ErrorKind::Precondition, "eps (K + Delta) + A is not ample for eps = " + to_string(eps));
    return wedge(inst.omega, (1 - eps / inst.p) * toric::restricted_fixed_lp(r, kd));
  }
  throw Error(ErrorKind::Domain, "admissible_lower: simple mode has no Phi range");
}

/// |p(K_S + Theta)| + p Phi ⊆ |p(K+Delta)|_S for Phi in the admissible range.
inline LiftingReport sharp_lifting_check(const LiftingInstance& inst, const Divisor& phi, LiftMode mode,
                                         const Rat& eps = 0) {
  if (mode == LiftMode::Simple) return simple_lifting_check(inst);
  LiftingReport rep;
  rep.lower = admissible_lower(inst, mode, eps);
  if (!(rep.lower <= phi) || !(phi <= inst.omega))
    throw Error(ErrorKind::Domain, "Phi = " + phi.str() + " is outside [" + rep.lower.str() + ", " + inst.omega.str() + "]");
  if (!is_integral(Rat(inst.p) * phi)) throw Error(ErrorKind::Domain, "p * Phi is not integral");
  toric::Restriction r(inst.variety, inst.s);
  rep.phi = phi;
  rep.theta = inst.omega - phi;
  rep.lhs = toric::restricted_system(r, Rat(inst.p) * inst.adjoint()).monomials;
  rep.rhs = detail::section_chars(r.variety(), Rat(inst.p) * (inst.K_S + rep.theta));
  rep.holds = std::includes(rep.lhs.begin(), rep.lhs.end(), rep.rhs.begin(), rep.rhs.end());
  if (!rep.holds) rep.detail = "right side has " + detail::first_difference(rep.rhs, rep.lhs) + " not on the left";
  return rep;
}

/// Divisors Phi with p Phi integral on the segment from lower to omega,
/// coordinatewise rounded up to the 1/p lattice; at least `count` when the
/// segment allows it.
inline std::vector<Divisor> phi_grid(const Divisor& lower, const Divisor& omega, long p, int count) {
  std::set<Divisor::Map> seen;
  std::vector<Divisor> out;
  for (int k = 0; k <= 4 * count; ++k) {
    Rat t(k, 4 * count);
    Divisor d = lower + t * (omega - lower);
    Divisor::Map m;
    for (auto& [name, v] : d.coeffs()) m.emplace(name, Rat(ceil_rat(v * p), p));
    Divisor q(m, omega.space());
    // clamp into [lower, omega]
    Divisor::Map c;
    for (auto& [name, v] : q.coeffs()) c.emplace(name, std::min(v, omega[name]));
    Divisor cq(c, omega.space());
    if (lower <= cq && cq <= omega && seen.insert(cq.coeffs()).second) out.push_back(cq);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theta, Phi, Omega along an adjoint system with S of coefficient one

/// F_S is normalized to degree 0: F_S(w) = F_S(D(w)) / r(w) = F_S(K+Delta(w)).
struct ThetaData {
  RatVec w;
  Divisor omega, fs, phi, theta;
};

inline Divisor omega_at(const toric::ToricVariety& x, const std::string& s, const CharacteristicSystem& sys,
                        const RatVec& w) {
  Divisor b = sys.boundary_at(w);
  if (b[s] != 1) throw Error(ErrorKind::Precondition, "S does not have coefficient 1 at " + to_string(w));
  toric::Restriction r(x, s);
  return r.restrict(sys.A() + b - x.prime(s));
}

inline ThetaData theta_phi_omega(const toric::ToricVariety& x, const std::string& s, const CharacteristicSystem& sys,
                                 const RatVec& w) {
  toric::Restriction r(x, s);
  Divisor d = sys.eval(w);
  if (toric::in_stable_base_locus(x, d, r.ray()))
    throw Error(ErrorKind::Precondition, "S lies in the stable base locus of D(" + to_string(w) + ")");
  ThetaData t;
  t.w = w;
  t.omega = omega_at(x, s, sys, w);
  t.fs = Rat(1) / sys.r_of(w) * toric::restricted_fixed_lp(r, d);
  t.phi = wedge(t.omega, t.fs);
  t.theta = t.omega - t.phi;
  Divisor zero({}, t.omega.space());
  if (!(zero <= t.theta) || !(t.theta <= t.omega) || !(t.theta + t.phi == t.omega))
    throw Error(ErrorKind::Check, "Theta/Phi invariants fail at " + to_string(w));
  return t;
}

/// Least n <= nmax with Phi(l) = Omega(l) ∧ Fix(|D(n l)|_S) / (n r(l)).
inline std::optional<int> lemma6_search(const toric::ToricVariety& x, const std::string& s,
                                        const CharacteristicSystem& sys, const IntVec& l, int nmax) {
  RatVec w = to_ratvec(l);
  auto t = theta_phi_omega(x, s, sys, w);
  toric::Restriction r(x, s);
  Rat rl = sys.r_of(w);
  for (int n = 1; n <= nmax; ++n) {
    Divisor dn = sys.eval(Rat(n) * w);
    if (!is_integer(dn[s])) continue;
    auto rs = toric::restricted_system(r, dn);
    if (!rs.fix) continue;
    if (wedge(t.omega, Rat(1) / (rl * n) * *rs.fix) == t.phi) return n;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Convex degree-1 extension

struct ConvexExtension {
  std::vector<cone::Cone> pieces;
  std::vector<std::map<std::string, RatVec>> maps;  // one linear map per piece
  std::string space;
  std::vector<RatVec> flagged;  // boundary samples that disagree with the interior limit

  Divisor operator()(const RatVec& w) const {
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (pieces[i].contains_h(w)) {
        Divisor::Map m;
        for (auto& [k, row] : maps[i]) m.emplace(k, dot(row, w));
        return Divisor(m, space);
      }
    throw Error(ErrorKind::Domain, "extend_convex: point outside the decomposition");
  }
};

/// Interpolates samples by one linear map per piece, fitted on the samples in
/// the piece's relative interior. Samples on the boundary of the whole cone
/// are compared with the interior limit and flagged when they differ.
inline ConvexExtension extend_convex(const std::vector<std::pair<RatVec, Divisor>>& samples,
                                     const cone::ConeDecomposition& dec) {
  if (samples.empty()) throw Error(ErrorKind::Domain, "extend_convex: no samples");
  const std::size_t r = dec.parent.ambient_dim();
  ConvexExtension out;
  out.pieces = dec.pieces;
  out.space = samples.front().second.space();
  std::set<std::string> names;
  for (auto& [w, d] : samples)
    for (auto& [k, v] : d.coeffs()) names.insert(k);
  for (const auto& pc : dec.pieces) {
    std::vector<const std::pair<RatVec, Divisor>*> inner;
    for (const auto& sm : samples)
      if (pc.contains_h(sm.first) && dec.parent.contains_relint(sm.first)) inner.push_back(&sm);
    // greedy basis of interior samples
    RatMat basis;
    std::vector<const std::pair<RatVec, Divisor>*> chosen;
    for (auto* sm : inner) {
      auto trial = basis;
      trial.push_back(sm->first);
      if (linalg::rank(trial) > basis.size()) {
        basis = trial;
        chosen.push_back(sm);
      }
    }
    if (basis.size() < pc.dim())
      throw Error(ErrorKind::Domain, "extend_convex: not enough interior samples on a piece");
    std::map<std::string, RatVec> m;
    for (const auto& n : names) {
      RatVec rhs;
      for (auto* sm : chosen) rhs.push_back(sm->second[n]);
      RatMat a = basis;
      for (const auto& e : pc.equations()) a.push_back(e), rhs.push_back(Rat(0));
      auto sol = linalg::solve(a, rhs, r);
      if (!sol) throw Error(ErrorKind::Domain, "extend_convex: samples are not linear on a piece");
      m.emplace(n, *sol);
    }
    out.maps.push_back(std::move(m));
  }
  for (const auto& [w, d] : samples) {
    Divisor v = out(w);
    if (v == d) continue;
    if (dec.parent.contains_relint(w))
      throw Error(ErrorKind::Domain, "extend_convex: samples are not piecewise linear at " + to_string(w));
    out.flagged.push_back(w);
  }
  // convexity: each piece's map is >= every other piece's map on its own rays
  for (std::size_t i = 0; i < out.pieces.size(); ++i)
    for (const auto& g : out.pieces[i].generators())
      for (std::size_t j = 0; j < out.pieces.size(); ++j)
        for (const auto& n : names)
          if (dot(out.maps[j].at(n), g) > dot(out.maps[i].at(n), g))
            throw Error(ErrorKind::Domain, "extend_convex: samples violate convexity at " + to_string(g));
  return out;
}

}  // namespace adjoint::lifting
