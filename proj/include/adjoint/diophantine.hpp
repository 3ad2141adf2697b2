#pragma once

// Continued fractions over Q(sqrt d) and simultaneous rational approximation
// of a point inside its rational affine hull, with a certificate checker.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "adjoint/affine.hpp"
#include "adjoint/linalg.hpp"
#include "adjoint/quadratic.hpp"

namespace adjoint::dioph {

/// Partial quotients of alpha; stops early when alpha is rational.
inline std::vector<Int> partial_quotients(QuadNum alpha, std::size_t k) {
  std::vector<Int> out;
  while (out.size() < k) {
    Int a = floor_quad(alpha);
    out.push_back(a);
    QuadNum frac = alpha - QuadNum(Rat(a));
    if (frac.is_zero()) break;
    alpha = QuadNum(1) / frac;
  }
  return out;
}

/// First k convergents h_n / k_n (fewer when alpha is rational).
inline std::vector<Rat> convergents(const QuadNum& alpha, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::Domain, "convergents: k must be >= 1");
  std::vector<Rat> out;
  Int h1 = 1, h2 = 0, q1 = 0, q2 = 1;
  for (const auto& a : partial_quotients(alpha, k)) {
    Int h = a * h1 + h2, q = a * q1 + q2;
    out.emplace_back(Rat(h, q));
    h2 = h1, h1 = h, q2 = q1, q1 = q;
  }
  return out;
}

struct DioCertificate {
  QuadVec x;
  AffineSubspaceQ subspace;
  std::vector<RatVec> points;
  std::vector<QuadNum> weights;
  std::vector<Int> denominators;
  Rat eps;
  long M = 1;
};

inline QuadVec quad_point(const QuadVec& like, const RatVec& w) {
  QuadVec v;
  v.d = like.d;
  v.entries = to_quad(w);
  return v;
}

/// Points on the line x = a + theta v from convergents of theta, taking the
/// first consecutive pair with denominator > M / eps that meets the bound.
inline DioCertificate approximate(const QuadVec& x, const Rat& eps, long M) {
  if (eps <= 0) throw Error(ErrorKind::Domain, "approximate: eps must be positive");
  if (M < 1) throw Error(ErrorKind::Domain, "approximate: M must be >= 1");
  DioCertificate c;
  c.x = x;
  c.subspace = rational_affine_hull(x);
  c.eps = eps;
  c.M = M;
  RatVec a = x.rational_parts();
  Int L = common_denominator(a);
  if (x.is_rational()) {
    c.points = {a};
    c.weights = {QuadNum(1)};
    c.denominators = {L * M};
    return c;
  }
  RatVec b = x.irrational_parts();
  RatVec v = c.subspace.direction_basis.at(0);
  std::size_t j = 0;
  while (v[j] == 0) ++j;
  QuadNum theta(Rat(0), b[j] / v[j], x.d);
  Rat vn = 0;
  for (const auto& t : v) vn = std::max(vn, Rat(abs(t)));
  auto ok = [&](const Rat& s) {
    Int p = Int(M) * lcm_int(L, denom(s));
    return abs(theta - QuadNum(s)) * QuadNum(vn) < QuadNum(eps / Rat(p));
  };
  Rat threshold = Rat(M) / eps;
  for (std::size_t k = 8;; k *= 2) {
    auto cs = convergents(theta, k);
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      if (Rat(denom(cs[i])) <= threshold || !ok(cs[i]) || !ok(cs[i + 1])) continue;
      for (const auto& s : {cs[i], cs[i + 1]}) {
        c.points.push_back(a + s * v);
        c.denominators.push_back(Int(M) * lcm_int(L, denom(s)));
      }
      QuadNum s1(cs[i]), s2(cs[i + 1]);
      QuadNum r1 = (s2 - theta) / (s2 - s1);
      c.weights = {r1, QuadNum(1) - r1};
      return c;
    }
    if (k > 4096) throw Error(ErrorKind::Check, "approximate: no convergent pair found");
  }
}

struct DioReport {
  bool ok = true;
  std::vector<std::string> failures;  // invariant ids, in check order
  std::vector<std::string> details;

  void fail(const std::string& id, const std::string& what) {
    ok = false;
    if (failures.empty() || failures.back() != id) failures.push_back(id);
    details.push_back(id + ": " + what);
  }
  bool failed(const std::string& id) const {
    return std::find(failures.begin(), failures.end(), id) != failures.end();
  }
};

/// True when x is an affine combination of the given rational points.
inline bool in_affine_hull(const QuadVec& x, const std::vector<RatVec>& pts) {
  if (pts.empty()) return false;
  const std::size_t n = x.size(), m = pts.size();
  linalg::Mat<QuadNum> a(n + 1, std::vector<QuadNum>(m));
  std::vector<QuadNum> rhs(n + 1);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) a[i][j] = QuadNum(pts[j][i]);
    a[n][j] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] = x.entries[i];
  rhs[n] = 1;
  return linalg::solve(a, rhs, m).has_value();
}

inline DioReport check_certificate(const DioCertificate& c) {
  DioReport r;
  const std::size_t m = c.points.size();
  if (m == 0 || c.weights.size() != m || c.denominators.size() != m) {
    r.fail("shape", "points, weights and denominators must have equal nonzero length");
    return r;
  }
  auto hull = rational_affine_hull(c.x);
  if (hull.relations != c.subspace.relations || hull.relation_rhs != c.subspace.relation_rhs)
    r.fail("subspace", "recorded subspace is not the rational affine hull of x");
  QuadNum sum = 0;
  for (const auto& w : c.weights) sum += w;
  if (!(sum == QuadNum(1))) r.fail("weights", "weights sum to " + sum.str());
  if (m > 1)
    for (std::size_t i = 0; i < m; ++i)
      if (!(c.weights[i] > QuadNum(0) && c.weights[i] < QuadNum(1)))
        r.fail("weights", "weight " + std::to_string(i) + " = " + c.weights[i].str() + " not in (0,1)");
  for (std::size_t k = 0; k < c.x.size(); ++k) {
    QuadNum s = 0;
    for (std::size_t i = 0; i < m; ++i) s += c.weights[i] * QuadNum(c.points[i].at(k));
    if (!(s == c.x.entries[k])) {
      r.fail("combination", "sum r_i w_i differs from x in coordinate " + std::to_string(k));
      break;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& w = c.points[i];
    if (!hull.contains(w)) r.fail("subspace", "w_" + std::to_string(i) + " = " + to_string(w) + " is off the subspace");
    const Int& p = c.denominators[i];
    if (p <= 0 || p % c.M != 0) r.fail("denominator", "p_" + std::to_string(i) + " = " + p.str() + " not a positive multiple of M");
    if (!is_integral(Rat(p) * w)) r.fail("integrality", "p_" + std::to_string(i) + " w_" + std::to_string(i) + " is not integral");
    // ||x - w|| < eps / p, compared exactly (the sign test of a - b sqrt d squares both sides)
    if (p > 0 && !(max_norm_diff(c.x.entries, w) < QuadNum(c.eps / Rat(p))))
      r.fail("bound", "||x - w_" + std::to_string(i) + "|| >= eps / p_" + std::to_string(i));
  }
  if (m != hull.dim() + 1) r.fail("minimality", "m = " + std::to_string(m) + " but dim U + 1 = " + std::to_string(hull.dim() + 1));
  if (!c.x.is_rational())
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<RatVec> rest;
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) rest.push_back(c.points[j]);
      if (in_affine_hull(c.x, rest)) r.fail("interiority", "x stays in the hull without w_" + std::to_string(i));
    }
  return r;
}

}  // namespace adjoint::dioph
