#pragma once

// Verifier for local affineness certificates of Theta at a quadratic point:
// features, conditions, the key inclusion and the concluding chain, each
// failure tagged with its item id and witness prime.

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adjoint/diophantine.hpp"
#include "adjoint/lifting.hpp"

namespace adjoint::lifting {

struct Lemma3Certificate {
  QuadVec x;
  std::vector<RatVec> w;
  std::vector<Divisor> theta;  // on S
  std::vector<QuadNum> mu;
  std::vector<Int> p;
  Rat eps, delta, C;
  long M = 1;
};

/// Exact Omega, F_S, Phi, Theta (all on S) and Delta (on X) at a point.
struct PointData {
  QuadDivisor omega, fs, phi, theta, delta;
};

namespace detail {

inline QuadDivisor quad_div(const Divisor& a, const Divisor& b, long d) {
  QuadDivisor::Map m;
  for (const auto& k : a.support()) m.emplace(k, QuadNum(a[k], b[k], d));
  for (const auto& k : b.support()) m.emplace(k, QuadNum(a[k], b[k], d));
  std::string sp = a.space().empty() ? b.space() : a.space();
  return QuadDivisor(m, sp);
}

inline Divisor part(const QuadDivisor& q, bool irrational) {
  Divisor::Map m;
  for (auto& [k, v] : q.coeffs()) m.emplace(k, irrational ? v.irrational_part() : v.rational_part());
  return Divisor(m, q.space());
}

inline long radicand(const QuadDivisor& q) {
  for (auto& [k, v] : q.coeffs())
    if (!v.is_rational()) return v.radicand();
  return 0;
}

inline QuadDivisor restrict_quad(const toric::Restriction& r, const QuadDivisor& q) {
  long d = radicand(q);
  if (d == 0) return to_quad(r.restrict(part(q, false)));
  return quad_div(r.restrict(part(q, false)), r.restrict(part(q, true)), d);
}

inline PointData finish(const toric::Restriction& r, const CharacteristicSystem& sys, const std::string& s,
                        const QuadDivisor& D, const QuadNum& rw, const QuadDivisor& g) {
  PointData pd;
  QuadNum inv = QuadNum(1) / rw;
  pd.delta = inv * D - to_quad(sys.K());
  QuadDivisor b = pd.delta - to_quad(sys.A());
  if (!(b[s] == QuadNum(1))) throw Error(ErrorKind::Precondition, "S does not have coefficient 1 along the certificate");
  pd.omega = restrict_quad(r, b + to_quad(sys.A()) - to_quad(r.ambient().prime(s)));
  pd.fs = inv * g;
  pd.phi = wedge(pd.omega, pd.fs);
  pd.theta = pd.omega - pd.phi;
  return pd;
}

}  // namespace detail

inline PointData point_data(const toric::ToricVariety& x, const std::string& s, const CharacteristicSystem& sys,
                            const RatVec& w) {
  toric::Restriction r(x, s);
  Divisor D = sys.eval(w);
  if (toric::in_stable_base_locus(x, D, r.ray()))
    throw Error(ErrorKind::Precondition, "S lies in the stable base locus of D(" + to_string(w) + ")");
  return detail::finish(r, sys, s, to_quad(D), QuadNum(sys.r_of(w)), to_quad(toric::restricted_fixed_lp(r, D)));
}

/// Exact data at an irrational point x = a + sqrt(d) b of Q(sqrt d)^r. A
/// rational bracket [a + s0 b, a + s1 b] around x inside one linearity region
/// on which F_S o D is affine (convex and affine at the midpoint) gives every
/// homogeneous quantity at x by interpolation.
inline PointData point_data(const toric::ToricVariety& x, const std::string& s, const CharacteristicSystem& sys,
                            const QuadVec& xq, int max_halvings = 60) {
  if (xq.is_rational()) return point_data(x, s, sys, xq.rational_parts());
  toric::Restriction r(x, s);
  RatVec a = xq.rational_parts(), b = xq.irrational_parts();
  QuadNum root = sqrt_of(xq.d);
  for (int k = 0; k <= max_halvings; ++k) {
    Rat h(Int(1), Int(1) << k);
    Rat s0 = Rat(floor_quad(root / QuadNum(h))) * h, s1 = s0 + h;
    RatVec y0 = a + s0 * b, y1 = a + s1 * b, ym = a + ((s0 + s1) / 2) * b;
    if (!sys.cone().contains(y0) || !sys.cone().contains(y1)) continue;
    const auto& piece = sys.pieces()[sys.piece_of(y0)];
    if (!piece.cone.contains(y1)) continue;
    Divisor D0 = sys.eval(y0), D1 = sys.eval(y1);
    if (toric::in_stable_base_locus(x, D0, r.ray()) || toric::in_stable_base_locus(x, D1, r.ray())) continue;
    Divisor g0 = toric::restricted_fixed_lp(r, D0), g1 = toric::restricted_fixed_lp(r, D1);
    if (!(Rat(2) * toric::restricted_fixed_lp(r, sys.eval(ym)) == g0 + g1)) continue;
    QuadNum u = (root - QuadNum(s0)) / QuadNum(h);
    auto lerp = [&](const Divisor& p0, const Divisor& p1) { return to_quad(p0) + u * to_quad(p1 - p0); };
    QuadNum rw = QuadNum(sys.r_of(y0)) + u * QuadNum(sys.r_of(y1) - sys.r_of(y0));
    return detail::finish(r, sys, s, lerp(D0, D1), rw, lerp(g0, g1));
  }
  throw Error(ErrorKind::Check, "no affine bracket for F_S around the certificate point");
}

struct CertificateItem {
  std::string id;     // (a)..(f), (1)..(4), additional, key, conclusion
  std::string prime;  // witness prime on S, when there is one
  int index = -1;     // approximant index, when there is one
  std::string what;
};

struct Lemma3Report {
  bool pass = true;
  std::vector<std::string> failed_items;  // distinct ids, in check order
  std::vector<CertificateItem> failures;
  bool key_checked = false, conclusion_checked = false;
  int affine_points = 0;
  int case2_chains = 0;

  void fail(std::string id, std::string prime, int index, std::string what) {
    pass = false;
    if (std::find(failed_items.begin(), failed_items.end(), id) == failed_items.end()) failed_items.push_back(id);
    failures.push_back({std::move(id), std::move(prime), index, std::move(what)});
  }
  bool failed(const std::string& id) const {
    return std::find(failed_items.begin(), failed_items.end(), id) != failed_items.end();
  }
  std::string str() const {
    std::ostringstream o;
    o << (pass ? "pass" : "fail");
    for (const auto& f : failures) {
      o << "\n" << f.id;
      if (f.index >= 0) o << " i=" << f.index;
      if (!f.prime.empty()) o << " P=" << f.prime;
      o << ": " << f.what;
    }
    if (!key_checked) o << "\nkey inclusion: skipped";
    if (!conclusion_checked) o << "\nconclusion: skipped";
    return o.str();
  }
};

namespace detail {

inline QuadNum norm_diff(const QuadVec& x, const RatVec& w) { return max_norm_diff(x.entries, w); }

// Position of w along the line a + s b.
inline Rat line_param(const RatVec& w, const RatVec& a, const RatVec& b) {
  return dot(w - a, b) / dot(b, b);
}

}  // namespace detail

/// Checks every feature and condition; the key inclusion runs only when they
/// all hold, and the conclusion only when the key inclusion holds.
inline Lemma3Report verify_lemma3(const toric::ToricVariety& X, const std::string& s, const CharacteristicSystem& sys,
                                  const Lemma3Certificate& c) {
  const std::size_t m = c.w.size();
  if (m == 0 || c.theta.size() != m || c.mu.size() != m || c.p.size() != m)
    throw Error(ErrorKind::Precondition, "certificate: w, Theta, mu and p must have equal nonzero length");
  if (c.x.is_rational()) throw Error(ErrorKind::Precondition, "certificate point is rational");
  auto U = rational_affine_hull(c.x);
  RatVec a = c.x.rational_parts(), b = c.x.irrational_parts();
  for (const auto& w : c.w)
    if (!U.contains(w) || !sys.cone().contains(w))
      throw Error(ErrorKind::Precondition, "approximant " + to_string(w) + " is not in the cone on the slice");
  const auto& rpiece = sys.pieces()[sys.piece_of(c.w[0])];
  if (rpiece.r.empty() || dot(rpiece.r, b) != 0)
    throw Error(ErrorKind::Precondition, "r is not constant on the slice through the certificate point");

  toric::Restriction res(X, s);
  const auto& Sv = res.variety();
  const auto& primes = Sv.names();
  const Divisor KS = Sv.canonical();
  Lemma3Report rep;

  PointData px = point_data(X, s, sys, c.x);
  std::vector<PointData> pw;
  for (const auto& w : c.w) pw.push_back(point_data(X, s, sys, w));
  const QuadNum eps(c.eps), delta(c.delta), C(c.C);

  // additional assumption
  for (const auto& P : primes)
    if (px.omega[P] == px.fs[P]) rep.fail("additional", P, -1, "mult Omega(x) = mult F_S(x)");

  // (a) concavity on the hull of the approximants
  {
    auto lo = std::min_element(c.w.begin(), c.w.end(), [&](const RatVec& u, const RatVec& v) {
      return detail::line_param(u, a, b) < detail::line_param(v, a, b);
    });
    auto hi = std::max_element(c.w.begin(), c.w.end(), [&](const RatVec& u, const RatVec& v) {
      return detail::line_param(u, a, b) < detail::line_param(v, a, b);
    });
    if (!rpiece.cone.contains(*lo) || !rpiece.cone.contains(*hi)) {
      rep.fail("(a)", "", -1, "hull of the approximants crosses a linearity region");
    } else {
      PointData e0 = point_data(X, s, sys, *lo), e1 = point_data(X, s, sys, *hi);
      PointData mid = point_data(X, s, sys, Rat(1, 2) * (*lo + *hi));
      for (const auto& P : primes) {
        bool below = e0.fs[P] <= e0.omega[P] && e1.fs[P] <= e1.omega[P];
        bool above = e0.fs[P] >= e0.omega[P] && e1.fs[P] >= e1.omega[P] &&
                     QuadNum(2) * mid.fs[P] == e0.fs[P] + e1.fs[P];
        if (!below && !above) rep.fail("(a)", P, -1, "Omega - Omega ∧ F_S may fail to be concave on the hull");
      }
    }
  }

  // (b) Lipschitz constant on the certificate points
  for (std::size_t i = 0; i < m; ++i)
    if (max_norm(pw[i].theta - px.theta) > C * detail::norm_diff(c.x, c.w[i]))
      rep.fail("(b)", "", static_cast<int>(i), "||Theta(w) - Theta(x)|| > C ||w - x||");

  // (c) margin
  if (!(c.delta > 0 && c.delta < 1)) rep.fail("(c)", "", -1, "delta not in (0,1)");
  if (!(c.eps > 0 && c.eps < c.delta)) rep.fail("(c)", "", -1, "eps not in (0, delta)");
  for (const auto& P : primes) {
    if (!(px.phi[P] > QuadNum(0))) continue;
    if (!(px.phi[P] > delta)) rep.fail("(c)", P, -1, "mult (Omega - Theta)(x) <= delta");
    for (std::size_t i = 0; i < m; ++i)
      if (!(pw[i].phi[P] > delta)) rep.fail("(c)", P, static_cast<int>(i), "mult (Omega - Theta)(w) <= delta");
  }

  // (d) Delta(w_i) - Delta(x) + A/p_i ample
  for (std::size_t i = 0; i < m; ++i) {
    if (c.p[i] <= 0) continue;
    QuadDivisor d = pw[i].delta - px.delta + to_quad(Rat(1) / Rat(c.p[i]) * sys.A());
    if (!toric::is_ample(X, d)) rep.fail("(d)", "", static_cast<int>(i), "Delta(w) - Delta(x) + A/p is not ample");
  }

  // (e) (C+1)(eps/delta)(K + Delta(w)) + A ample at x and every w_i
  if (c.delta > 0) {
    QuadNum t = (C + QuadNum(1)) * eps / delta;
    auto check_e = [&](const PointData& pd, int i) {
      QuadDivisor d = t * (to_quad(sys.K()) + pd.delta) + to_quad(sys.A());
      if (!toric::is_ample(X, d)) rep.fail("(e)", "", i, "(C+1)(eps/delta)(K + Delta) + A is not ample");
    };
    check_e(px, -1);
    for (std::size_t i = 0; i < m; ++i) check_e(pw[i], static_cast<int>(i));
  }

  // (f) and (4) on S
  for (std::size_t i = 0; i < m; ++i) {
    Divisor ks = KS + c.theta[i];
    if (!toric::is_pseudo_effective(Sv, ks)) {
      rep.fail("(f)", "", static_cast<int>(i), "K_S + Theta_i is not pseudo-effective");
      continue;
    }
    Divisor F = toric::fixed_part_lp(Sv, ks);
    for (const auto& P : c.theta[i].support())
      if (F[P] != 0) rep.fail("(f)", P, static_cast<int>(i), "component of Theta_i in F(K_S + Theta_i)");
    if (c.p[i] <= 0) continue;
    auto sec = toric::sections(Sv, Rat(c.p[i]) * ks);
    if (sec.monomials.empty()) {
      rep.fail("(4)", "", static_cast<int>(i), "|p_i (K_S + Theta_i)| is empty");
      continue;
    }
    Divisor fix = Rat(1) / Rat(c.p[i]) * toric::fix_mob(Sv, Rat(c.p[i]) * ks).fix;
    if (!(fix == F)) {
      for (const auto& P : primes)
        if (fix[P] != F[P]) rep.fail("(4)", P, static_cast<int>(i), "F(K_S + Theta_i) != Fix|p_i (K_S + Theta_i)| / p_i");
    }
  }

  // (1)
  {
    QuadNum sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
      sum += c.mu[i];
      if (!(c.mu[i] > QuadNum(0) && c.mu[i] < QuadNum(1)) && m > 1)
        rep.fail("(1)", "", static_cast<int>(i), "mu_i not in (0,1)");
    }
    if (!(sum == QuadNum(1))) rep.fail("(1)", "", -1, "sum mu_i = " + sum.str());
    for (std::size_t k = 0; k < c.x.size(); ++k) {
      QuadNum v = 0;
      for (std::size_t i = 0; i < m; ++i) v += c.mu[i] * QuadNum(c.w[i][k]);
      if (!(v == c.x.entries[k])) {
        rep.fail("(1)", "", -1, "sum mu_i w_i != x");
        break;
      }
    }
    for (const auto& P : primes) {
      QuadNum v = 0;
      for (std::size_t i = 0; i < m; ++i) v += c.mu[i] * QuadNum(c.theta[i][P]);
      if (!(v == px.theta[P])) rep.fail("(1)", P, -1, "sum mu_i Theta_i != Theta(x)");
    }
  }

  // (2)
  for (std::size_t i = 0; i < m; ++i) {
    const int ii = static_cast<int>(i);
    const Int& p = c.p[i];
    if (p <= 0 || p % c.M != 0) {
      rep.fail("(2)", "", ii, "p_i is not a positive multiple of M");
      continue;
    }
    if (!is_integral(Rat(p) * c.w[i])) rep.fail("(2)", "", ii, "p_i w_i is not integral");
    if (!is_integral(Rat(p) * c.theta[i])) rep.fail("(2)", "", ii, "p_i Theta_i is not integral");
    QuadNum bound(c.eps / Rat(p));
    if (!(detail::norm_diff(c.x, c.w[i]) < bound)) rep.fail("(2)", "", ii, "||x - w_i|| >= eps / p_i");
    if (!(max_norm(px.theta - to_quad(c.theta[i])) < bound)) rep.fail("(2)", "", ii, "||Theta(x) - Theta_i|| >= eps / p_i");
  }

  // (3)
  for (const auto& P : primes)
    for (std::size_t i = 0; i < m; ++i) {
      const int ii = static_cast<int>(i);
      QuadNum ti(c.theta[i][P]);
      if (px.theta[P] < px.omega[P] && !(ti < pw[i].omega[P]))
        rep.fail("(3)", P, ii, "Theta(x) < Omega(x) but Theta_i >= Omega(w_i)");
      if (px.theta[P] == px.omega[P] && !(ti == pw[i].omega[P]))
        rep.fail("(3)", P, ii, "Theta(x) = Omega(x) but Theta_i != Omega(w_i)");
      if (px.theta[P].is_zero() && !ti.is_zero()) rep.fail("(3)", P, ii, "Theta(x) = 0 but Theta_i != 0");
    }

  if (!rep.pass) return rep;

  // key inclusion, with the case analysis replayed per prime
  rep.key_checked = true;
  for (std::size_t i = 0; i < m; ++i) {
    const int ii = static_cast<int>(i);
    const Rat p(c.p[i]);
    Divisor kd = sys.K() + detail::part(pw[i].delta, false);
    Divisor Fi = toric::restricted_fixed_lp(res, kd + Rat(1) / p * sys.A());
    Divisor om = detail::part(pw[i].omega, false), thw = detail::part(pw[i].theta, false),
            fsw = detail::part(pw[i].fs, false);
    Divisor need = wedge(om, Fi);
    Divisor room = om - c.theta[i];
    for (const auto& P : primes) {
      if (px.theta[P] == px.omega[P]) {
        if (Fi[P] != 0) rep.fail("key", P, ii, "case 1: mult F_i != 0");
        continue;
      }
      ++rep.case2_chains;
      Rat q = (c.C + 1) * c.eps / (p * c.delta);
      bool step1 = Fi[P] <= (1 - q) * fsw[P];
      bool step2 = max_norm(thw - c.theta[i]) <= (c.C + 1) * c.eps / p;
      bool step3 = std::min(om[P], Fi[P]) <= (1 - q) * (om[P] - thw[P]);
      bool step4 = (1 - q) * (om[P] - thw[P]) <= om[P] - c.theta[i][P];
      if (!step1) rep.fail("key", P, ii, "case 2: mult F_i > (1 - (C+1) eps/(p delta)) mult F_S(w_i)");
      if (!step2) rep.fail("key", P, ii, "case 2: ||Theta(w_i) - Theta_i|| > (C+1) eps / p_i");
      if (step1 && step2 && !(step3 && step4))
        throw Error(ErrorKind::Check, "case 2 chain breaks at " + P + " although its premises hold");
    }
    if (!(need <= room)) rep.fail("key", "", ii, "Omega(w_i) ∧ F_i > Omega(w_i) - Theta_i");
    auto lhs = toric::restricted_system(res, p * kd).monomials;
    auto rhs = detail::section_chars(Sv, p * (KS + c.theta[i]));
    if (!std::includes(lhs.begin(), lhs.end(), rhs.begin(), rhs.end()))
      rep.fail("key", "", ii, "|p_i (K_S + Theta_i)| + p_i (Omega - Theta_i) has " + detail::first_difference(rhs, lhs) +
                                  " outside |p_i (K + Delta(w_i))|_S");
  }
  if (!rep.pass) return rep;

  // conclusion: Theta_i <= Theta(w_i), then affineness on the hull
  rep.conclusion_checked = true;
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& P : primes)
      if (QuadNum(c.theta[i][P]) > pw[i].theta[P]) rep.fail("conclusion", P, static_cast<int>(i), "Theta_i > Theta(w_i)");
  for (const auto& P : primes) {
    QuadNum v = 0;
    for (std::size_t i = 0; i < m; ++i) v += c.mu[i] * pw[i].theta[P];
    if (!(v == px.theta[P])) rep.fail("conclusion", P, -1, "sum mu_i Theta(w_i) != Theta(x)");
  }
  std::vector<RatVec> ws = c.w;
  std::sort(ws.begin(), ws.end(),
            [&](const RatVec& u, const RatVec& v) { return detail::line_param(u, a, b) < detail::line_param(v, a, b); });
  const RatVec &w0 = ws.front(), &w1 = ws.back();
  const PointData &t0 = pw[std::find(c.w.begin(), c.w.end(), w0) - c.w.begin()],
                  &t1 = pw[std::find(c.w.begin(), c.w.end(), w1) - c.w.begin()];
  Rat s0 = detail::line_param(w0, a, b), s1 = detail::line_param(w1, a, b);
  auto affine_at = [&](const QuadNum& s, const PointData& pd, const std::string& where) {
    QuadNum u = (s - QuadNum(s0)) / QuadNum(s1 - s0);
    for (const auto& P : primes)
      if (!(pd.theta[P] == t0.theta[P] + u * (t1.theta[P] - t0.theta[P])))
        rep.fail("conclusion", P, -1, "Theta is not affine at " + where);
    ++rep.affine_points;
  };
  for (int k = 1; k <= 5; ++k) {
    RatVec y = w0 + Rat(k, 6) * (w1 - w0);
    affine_at(QuadNum(detail::line_param(y, a, b)), point_data(X, s, sys, y), to_string(y));
  }
  for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
    RatVec y = Rat(1, 2) * (ws[i] + ws[i + 1]);
    affine_at(QuadNum(detail::line_param(y, a, b)), point_data(X, s, sys, y), to_string(y));
  }
  affine_at(sqrt_of(c.x.d), px, "x");
  return rep;
}

/// Certificate from a joint approximation of (x, Theta(x)) inside its
/// rational affine hull.
inline Lemma3Certificate build_lemma3_certificate(const toric::ToricVariety& X, const std::string& s,
                                                  const CharacteristicSystem& sys, const QuadVec& x, const Rat& eps,
                                                  const Rat& delta, const Rat& C, long M) {
  toric::Restriction res(X, s);
  const auto& primes = res.variety().names();
  PointData px = point_data(X, s, sys, x);
  QuadVec y = x;
  for (const auto& P : primes) y.entries.push_back(px.theta[P]);
  auto dc = dioph::approximate(y, eps, M);
  Lemma3Certificate c;
  c.x = x;
  c.eps = eps;
  c.delta = delta;
  c.C = C;
  c.M = M;
  c.mu = dc.weights;
  c.p = dc.denominators;
  const std::size_t r = x.size();
  for (const auto& pt : dc.points) {
    c.w.emplace_back(pt.begin(), pt.begin() + static_cast<long>(r));
    Divisor::Map th;
    for (std::size_t k = 0; k < primes.size(); ++k) th.emplace(primes[k], pt[r + k]);
    c.theta.emplace_back(th, res.variety().space());
  }
  return c;
}

}  // namespace adjoint::lifting
