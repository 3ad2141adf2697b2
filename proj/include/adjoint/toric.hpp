#pragma once

// Smooth complete toric varieties as an exact oracle: sections are lattice
// points of divisor polytopes, and every asymptotic invariant reduces to LPs
// over those polytopes.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adjoint/divisor.hpp"
#include "adjoint/linalg.hpp"
#include "adjoint/lp.hpp"

namespace adjoint::toric {

inline constexpr int kDefaultLadder = 12;

struct Wall {
  std::size_t cone_a, cone_b;  // adjacent maximal cones
  std::size_t ray_a, ray_b;    // the ray of each cone off the common facet
};

class ToricVariety {
 public:
  ToricVariety() = default;

  /// Validates primitivity, smoothness and completeness. Default ray names
  /// are D1..Dk.
  ToricVariety(std::size_t n, std::vector<IntVec> rays, std::vector<std::vector<std::size_t>> max_cones,
               std::vector<std::string> names = {}, std::string space = "X")
      : n_(n), rays_(std::move(rays)), cones_(std::move(max_cones)), names_(std::move(names)), space_(std::move(space)) {
    if (n_ == 0) throw Error(ErrorKind::Domain, "toric variety must have positive dimension");
    if (names_.empty())
      for (std::size_t i = 0; i < rays_.size(); ++i) names_.push_back("D" + std::to_string(i + 1));
    if (names_.size() != rays_.size()) throw Error(ErrorKind::Parse, "ray names and rays differ in number");
    validate();
  }

  std::size_t dim() const { return n_; }
  const std::vector<IntVec>& rays() const { return rays_; }
  RatVec ray(std::size_t i) const { return to_ratvec(rays_[i]); }
  const std::vector<std::vector<std::size_t>>& max_cones() const { return cones_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& space() const { return space_; }
  const std::vector<Wall>& walls() const { return walls_; }
  std::size_t num_rays() const { return rays_.size(); }

  std::size_t ray_index(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw Error(ErrorKind::Domain, "\"" + name + "\" is not a ray of the fan");
    return static_cast<std::size_t>(it - names_.begin());
  }

  Divisor prime(std::size_t i) const { return Divisor::prime(names_[i], space_); }
  Divisor prime(const std::string& name) const { return prime(ray_index(name)); }

  /// K = -sum D_rho.
  Divisor canonical() const {
    Divisor k({}, space_);
    for (std::size_t i = 0; i < rays_.size(); ++i) k.set(names_[i], Rat(-1));
    return k;
  }

  Divisor boundary_sum() const { return Rat(-1) * canonical(); }

  template <class T>
  std::vector<T> coeff_vector(const BasicDivisor<T>& d) const {
    if (!d.space().empty() && d.space() != space_)
      throw Error(ErrorKind::Domain, "divisor lives on " + d.space() + ", not on " + space_);
    std::vector<T> out(rays_.size(), T(0));
    for (auto& [k, v] : d.coeffs()) out[ray_index(k)] = v;
    return out;
  }

  template <class T>
  BasicDivisor<T> from_vector(const std::vector<T>& c) const {
    typename BasicDivisor<T>::Map m;
    for (std::size_t i = 0; i < c.size(); ++i) m.emplace(names_[i], c[i]);
    return BasicDivisor<T>(m, space_);
  }

  /// div(chi^m) = sum <m, v_rho> D_rho.
  Divisor principal(const RatVec& m) const {
    RatVec c;
    for (const auto& v : rays_) c.push_back(dot(m, v));
    return from_vector(c);
  }

  /// The rational m with div(chi^m) = d, if d is principal over Q.
  std::optional<RatVec> principal_solution(const Divisor& d) const {
    RatMat a;
    for (const auto& v : rays_) a.push_back(to_ratvec(v));
    return linalg::solve(a, coeff_vector(d), n_);
  }

  bool linearly_equivalent(const Divisor& a, const Divisor& b) const {
    auto m = principal_solution(a - b);
    return m && is_integral(*m);
  }

  bool q_linearly_equivalent(const Divisor& a, const Divisor& b) const { return principal_solution(a - b).has_value(); }

  /// Inverse of the matrix whose columns are the rays of maximal cone s.
  const RatMat& cone_inverse(std::size_t s) const { return inverses_[s]; }

  /// The linear function agreeing with the support function of `a` on cone s:
  /// <m_s, v_rho> = -a_rho for rho in s.
  template <class T>
  std::vector<T> cone_character(std::size_t s, const std::vector<T>& a) const {
    const auto& inv = inverses_[s];
    std::vector<T> m(n_, T(0));
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < n_; ++i) m[k] = m[k] - T(inv[i][k]) * a[cones_[s][i]];
    return m;
  }

 private:
  void validate() {
    std::set<IntVec> seen;
    for (const auto& v : rays_) {
      if (v.size() != n_) throw Error(ErrorKind::Dimension, "ray " + to_string(v) + " has wrong dimension");
      RatVec r = to_ratvec(v);
      if (is_zero(r) || primitive(r) != r) throw Error(ErrorKind::Domain, "ray " + to_string(v) + " is not primitive");
      if (!seen.insert(v).second) throw Error(ErrorKind::Domain, "duplicate ray " + to_string(v));
    }
    std::set<std::string> nm(names_.begin(), names_.end());
    if (nm.size() != names_.size()) throw Error(ErrorKind::Parse, "duplicate ray names");
    for (auto& c : cones_) {
      std::sort(c.begin(), c.end());
      if (c.size() != n_ || std::adjacent_find(c.begin(), c.end()) != c.end())
        throw Error(ErrorKind::Domain, "maximal cone must have exactly dim distinct rays");
      for (auto i : c)
        if (i >= rays_.size()) throw Error(ErrorKind::Domain, "maximal cone refers to a missing ray");
      RatMat b(n_, RatVec(n_));
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = 0; i < n_; ++i) b[i][j] = Rat(rays_[c[j]][i]);
      Rat det = linalg::determinant(b);
      if (det != 1 && det != -1)
        throw Error(ErrorKind::Domain, "not smooth: a maximal cone has determinant " + to_string(det));
      inverses_.push_back(*linalg::inverse(b));
    }
    if (cones_.empty()) throw Error(ErrorKind::Domain, "not complete: no maximal cones");
    std::map<std::vector<std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> faces;
    for (std::size_t s = 0; s < cones_.size(); ++s)
      for (std::size_t i = 0; i < n_; ++i) {
        auto f = cones_[s];
        std::size_t off = f[i];
        f.erase(f.begin() + static_cast<long>(i));
        faces[f].push_back({s, off});
      }
    for (auto& [f, owners] : faces) {
      if (owners.size() != 2) throw Error(ErrorKind::Domain, "not complete: a wall lies in " +
                                                                  std::to_string(owners.size()) + " maximal cones");
      RatMat rows;
      for (auto i : f) rows.push_back(ray(i));
      RatVec normal = linalg::nullspace(rows, n_).front();
      Rat sa = dot(normal, ray(owners[0].second)), sb = dot(normal, ray(owners[1].second));
      if (sa * sb >= 0) throw Error(ErrorKind::Domain, "not complete: cones overlap across a wall");
      walls_.push_back({owners[0].first, owners[1].first, owners[0].second, owners[1].second});
    }
    // A generic point must lie in exactly one maximal cone.
    for (long t = 1009;; t += 2) {
      RatVec p(n_);
      Rat x = 1;
      for (std::size_t i = 0; i < n_; ++i, x /= t) p[i] = x;
      bool generic = true;
      int count = 0;
      for (std::size_t s = 0; s < cones_.size() && generic; ++s) {
        auto c = linalg::mat_vec(inverses_[s], p);
        bool inside = true;
        for (const auto& ci : c) {
          if (ci == 0) generic = false;
          if (ci < 0) inside = false;
        }
        count += inside;
      }
      if (!generic) continue;
      if (count != 1) throw Error(ErrorKind::Domain, "not complete: generic point covered " + std::to_string(count) + " times");
      break;
    }
  }

  std::size_t n_ = 0;
  std::vector<IntVec> rays_;
  std::vector<std::vector<std::size_t>> cones_;
  std::vector<std::string> names_;
  std::string space_ = "X";
  std::vector<RatMat> inverses_;
  std::vector<Wall> walls_;
};

inline ToricVariety projective_space(std::size_t n) {
  std::vector<IntVec> rays;
  for (std::size_t i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    rays.push_back(e);
  }
  rays.push_back(IntVec(n, -1));
  std::vector<std::vector<std::size_t>> cones;
  for (std::size_t skip = 0; skip <= n; ++skip) {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i <= n; ++i)
      if (i != skip) c.push_back(i);
    cones.push_back(c);
  }
  return ToricVariety(n, rays, cones);
}

/// Hirzebruch surface F_a with rays (1,0),(0,1),(-1,a),(0,-1).
inline ToricVariety hirzebruch(long a) {
  return ToricVariety(2, {{1, 0}, {0, 1}, {-1, a}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

// ---------------------------------------------------------------------------
// Polytopes and sections

/// LP over the real polytope P_c = { u : <u, v_rho> >= -c_rho }, with optional
/// extra equalities <u, v_rho> = -c_rho for rho in `tight`.
inline lp::Problem<Rat> polytope_problem(const ToricVariety& x, const RatVec& c, const std::vector<std::size_t>& tight = {}) {
  lp::Problem<Rat> p(x.dim());
  for (std::size_t i = 0; i < x.num_rays(); ++i) p.add(x.ray(i), lp::Relation::GreaterEq, -c[i]);
  for (auto i : tight) p.add(x.ray(i), lp::Relation::Equal, -c[i]);
  return p;
}

inline bool polytope_nonempty(const ToricVariety& x, const RatVec& c, const std::vector<std::size_t>& tight = {}) {
  return lp::feasible(polytope_problem(x, c, tight));
}

/// min <u, v_rho> over the real polytope (with optional tight rays); nullopt when empty.
inline std::optional<Rat> min_pairing(const ToricVariety& x, const RatVec& c, std::size_t rho,
                                      const std::vector<std::size_t>& tight = {}) {
  auto p = polytope_problem(x, c, tight);
  p.objective = x.ray(rho);
  p.maximize = false;
  auto r = lp::solve(p);
  if (r.status == lp::Status::Infeasible) return std::nullopt;
  if (r.status == lp::Status::Unbounded) throw Error(ErrorKind::Unbounded, "divisor polytope is unbounded");
  return r.value;
}

struct SectionSpace {
  Divisor divisor;
  std::vector<IntVec> monomials;  // lattice points of P_{floor d}, lexicographic
  std::size_t dim() const { return monomials.size(); }
};

/// Lattice points of { m : <m, v_rho> >= -c_rho } for integral c, optionally on
/// the faces <m, v_rho> = -c_rho for rho in `tight`.
inline std::vector<IntVec> lattice_points(const ToricVariety& x, const RatVec& c, const std::vector<std::size_t>& tight = {}) {
  const std::size_t n = x.dim();
  auto base = polytope_problem(x, c, tight);
  if (!lp::feasible(base)) return {};
  std::vector<long> lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    RatVec e(n, Rat(0));
    e[j] = 1;
    auto p = base;
    p.objective = e;
    p.maximize = true;
    auto r = lp::solve(p);
    if (r.status != lp::Status::Optimal) throw Error(ErrorKind::Unbounded, "divisor polytope is unbounded");
    hi[j] = floor_rat(r.value).convert_to<long>();
    p.maximize = false;
    r = lp::solve(p);
    lo[j] = ceil_rat(r.value).convert_to<long>();
  }
  std::vector<IntVec> rays = x.rays();
  std::vector<long> ci(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) ci[i] = floor_rat(c[i]).convert_to<long>();
  std::vector<bool> is_tight(c.size(), false);
  for (auto t : tight) is_tight[t] = true;
  std::vector<IntVec> out;
  IntVec m(n);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == n) {
      for (std::size_t i = 0; i < rays.size(); ++i) {
        long s = dot(m, rays[i]);
        if (s < -ci[i] || (is_tight[i] && s != -ci[i])) return;
      }
      out.push_back(m);
      return;
    }
    for (long v = lo[j]; v <= hi[j]; ++v) {
      m[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

inline SectionSpace sections(const ToricVariety& x, const Divisor& d) {
  RatVec c = x.coeff_vector(d);
  for (auto& v : c) v = Rat(floor_rat(v));
  return SectionSpace{d, lattice_points(x, c)};
}

struct FixMob {
  Divisor fix, mob;
};

/// mult_rho Fix = d_rho + min over sections of <m, v_rho>; Mob = d - Fix.
inline FixMob fix_mob(const ToricVariety& x, const Divisor& d) {
  auto s = sections(x, d);
  if (s.monomials.empty()) throw Error(ErrorKind::Domain, "empty linear system: |" + d.str() + "| has no sections");
  RatVec c = x.coeff_vector(d), f(x.num_rays());
  for (std::size_t i = 0; i < x.num_rays(); ++i) {
    long best = dot(s.monomials[0], x.rays()[i]);
    for (const auto& m : s.monomials) best = std::min(best, dot(m, x.rays()[i]));
    f[i] = c[i] + Rat(best);
  }
  Divisor fix = x.from_vector(f);
  return {fix, d - fix};
}

inline bool is_pseudo_effective(const ToricVariety& x, const Divisor& d) {
  return polytope_nonempty(x, x.coeff_vector(d));
}

/// Big iff the polytope has interior: some u clears every facet by t > 0.
inline bool is_big(const ToricVariety& x, const Divisor& d) {
  RatVec c = x.coeff_vector(d);
  lp::Problem<Rat> p(x.dim() + 1);
  for (std::size_t i = 0; i < x.num_rays(); ++i) {
    RatVec row = x.ray(i);
    row.push_back(Rat(-1));
    p.add(row, lp::Relation::GreaterEq, -c[i]);
  }
  RatVec t(x.dim() + 1, Rat(0));
  t.back() = 1;
  p.add(t, lp::Relation::LessEq, Rat(1));
  p.objective = t;
  auto r = lp::solve(p);
  return r.status == lp::Status::Optimal && r.value > 0;
}

// ---------------------------------------------------------------------------
// Ampleness

/// Strict convexity of the support function across every wall.
template <class T>
bool is_ample_coeffs(const ToricVariety& x, const std::vector<T>& a) {
  for (const auto& w : x.walls()) {
    auto m = x.cone_character(w.cone_a, a);
    T s(0);
    for (std::size_t k = 0; k < x.dim(); ++k) s = s + m[k] * T(Rat(x.rays()[w.ray_b][k]));
    if (!(s > T(0) - a[w.ray_b])) return false;
    auto m2 = x.cone_character(w.cone_b, a);
    T s2(0);
    for (std::size_t k = 0; k < x.dim(); ++k) s2 = s2 + m2[k] * T(Rat(x.rays()[w.ray_a][k]));
    if (!(s2 > T(0) - a[w.ray_a])) return false;
  }
  return true;
}

template <class T>
bool is_ample(const ToricVariety& x, const BasicDivisor<T>& d) {
  return is_ample_coeffs(x, x.coeff_vector(d));
}

/// An integral ample divisor: sum D_rho when that is ample, else an LP solution
/// with wall margins >= 1.
inline Divisor ample_divisor(const ToricVariety& x) {
  Divisor s = x.boundary_sum();
  if (is_ample(x, s)) return s;
  const std::size_t k = x.num_rays();
  lp::Problem<Rat> p(k);
  p.all_nonneg();
  for (const auto& w : x.walls()) {
    // <m_a(a), v_b> + a_b >= 1, linear in a
    RatVec row(k, Rat(0));
    const auto& inv = x.cone_inverse(w.cone_a);
    const auto& ca = x.max_cones()[w.cone_a];
    for (std::size_t i = 0; i < x.dim(); ++i)
      for (std::size_t kk = 0; kk < x.dim(); ++kk) row[ca[i]] -= inv[i][kk] * Rat(x.rays()[w.ray_b][kk]);
    row[w.ray_b] += 1;
    p.add(row, lp::Relation::GreaterEq, Rat(1));
  }
  p.objective = RatVec(k, Rat(1));
  p.maximize = false;
  auto r = lp::solve(p);
  if (r.status != lp::Status::Optimal) throw Error(ErrorKind::Domain, "fan is not projective");
  RatVec a = r.x;
  Rat l = Rat(common_denominator(a));
  return x.from_vector(l * a);
}

// ---------------------------------------------------------------------------
// Asymptotic invariants

struct AsymptoticFixed {
  Divisor value;                    // exact LP value
  bool on_boundary = false;         // d pseudo-effective but not big
  bool ladder_stabilized = false;   // independent ladder agrees
  std::vector<Divisor> ladder;      // running infima (multiples) or extrapolations (boundary)
  std::optional<int> stabilized_at;
  bool ample_independent = true;    // boundary case: two ample choices agree
  std::string note;
};

inline Divisor fixed_part_lp(const ToricVariety& x, const Divisor& d) {
  RatVec c = x.coeff_vector(d), f(x.num_rays());
  for (std::size_t i = 0; i < x.num_rays(); ++i) {
    auto mn = min_pairing(x, c, i);
    if (!mn) throw Error(ErrorKind::Domain, "divisor " + d.str() + " is not pseudo-effective");
    f[i] = c[i] + *mn;
  }
  return x.from_vector(f);
}

namespace detail {

/// Running infimum of (1/n) fix(nd) over n = k*den(d), k = 1..nmax; accepted
/// once three consecutive values agree with the target.
inline void run_ladder(const std::function<std::optional<Divisor>(const Divisor&)>& fix, const Divisor& d,
                       const Divisor& target, int nmax, AsymptoticFixed& out) {
  Rat den = 1;
  for (auto& [k, v] : d.coeffs()) den = Rat(lcm_int(numer(den), denom(v)));
  std::optional<Divisor> inf;
  int streak = 0;
  for (int k = 1; k <= nmax; ++k) {
    Rat n = den * k;
    auto f = fix(n * d);
    if (f) {
      Divisor scaled = Rat(1) / n * *f;
      inf = inf ? wedge(*inf, scaled) : scaled;
    }
    if (!inf) continue;
    out.ladder.push_back(*inf);
    streak = (*inf == target) ? streak + 1 : 0;
    if (streak >= 3) {
      out.ladder_stabilized = true;
      out.stabilized_at = k - 2;
      return;
    }
  }
  out.note = "not stabilized within the ladder";
}

/// Value at epsilon = 0 of an eventually affine function, from samples at
/// decreasing epsilons: three collinear consecutive samples fix the tail.
inline std::optional<Divisor> extrapolate_affine(const std::vector<std::pair<Rat, Divisor>>& s) {
  for (std::size_t i = 0; i + 2 < s.size(); ++i) {
    const auto& [e0, f0] = s[i];
    const auto& [e1, f1] = s[i + 1];
    const auto& [e2, f2] = s[i + 2];
    Divisor slope = Rat(1) / (e0 - e1) * (f0 - f1);
    if (!(Rat(1) / (e1 - e2) * (f1 - f2) == slope)) continue;
    // all later samples must stay on the line as well
    bool ok = true;
    for (std::size_t j = i + 3; j < s.size(); ++j)
      if (!(s[j].second == f2 + (s[j].first - e2) * slope)) ok = false;
    if (ok) return f2 - e2 * slope;
  }
  return std::nullopt;
}

}  // namespace detail

/// Asymptotic fixed part. The LP value over the real polytope is exact; the
/// ladder of multiples (or, on the pseudo-effective boundary, the epsilon
/// ladder D + eps A) is computed independently and must agree.
inline AsymptoticFixed asymptotic_fixed(const ToricVariety& x, const Divisor& d, int nmax = kDefaultLadder) {
  if (!is_pseudo_effective(x, d)) throw Error(ErrorKind::Domain, "divisor " + d.str() + " is not pseudo-effective");
  AsymptoticFixed out;
  out.value = fixed_part_lp(x, d);
  out.on_boundary = !is_big(x, d);
  if (!out.on_boundary) {
    detail::run_ladder(
        [&](const Divisor& nd) -> std::optional<Divisor> {
          if (sections(x, nd).monomials.empty()) return std::nullopt;
          return fix_mob(x, nd).fix;
        },
        d, out.value, nmax, out);
    return out;
  }
  Divisor a1 = ample_divisor(x);
  Divisor a2 = Rat(2) * a1;
  for (std::size_t i = 0; i < x.num_rays(); ++i) {
    Divisor cand = Rat(3) * a1 + x.prime(i);
    if (is_ample(x, cand)) {
      a2 = cand;
      break;
    }
  }
  std::vector<std::optional<Divisor>> limits;
  for (const auto& a : {a1, a2}) {
    std::vector<std::pair<Rat, Divisor>> samples;
    for (int k = 1; k <= nmax; ++k) {
      Rat eps(1, k);
      samples.emplace_back(eps, fixed_part_lp(x, d + eps * a));
    }
    auto lim = detail::extrapolate_affine(samples);
    limits.push_back(lim);
    if (lim) out.ladder.push_back(*lim);
  }
  out.ample_independent = limits[0] && limits[1] && *limits[0] == *limits[1];
  out.ladder_stabilized = limits[0] && *limits[0] == out.value;
  if (out.ladder_stabilized) out.stabilized_at = 1;
  else out.note = "epsilon ladder did not stabilize";
  return out;
}

struct StableBaseLocus {
  std::vector<std::string> divisorial;  // rays whose divisor lies in B(d)
  bool whole_x = false;                 // every |pd| is empty
  bool ladder_consistent = true;        // base loci of multiples agree
  bool higher_codim_computed = false;   // non-divisorial strata are not computed
};

inline StableBaseLocus stable_base_locus(const ToricVariety& x, const Divisor& d, int nmax = kDefaultLadder) {
  StableBaseLocus out;
  if (!is_pseudo_effective(x, d)) {
    out.whole_x = true;
    return out;
  }
  Divisor f = fixed_part_lp(x, d);
  std::set<std::string> lp_set;
  for (auto& [k, v] : f.coeffs())
    if (v > 0) lp_set.insert(k);
  out.divisorial.assign(lp_set.begin(), lp_set.end());
  Rat den = 1;
  for (auto& [k, v] : d.coeffs()) den = Rat(lcm_int(numer(den), denom(v)));
  std::optional<std::set<std::string>> meet;
  for (int k = 1; k <= nmax; ++k) {
    Divisor nd = (den * k) * d;
    if (sections(x, nd).monomials.empty()) continue;
    std::set<std::string> bs;
    for (auto& [name, v] : fix_mob(x, nd).fix.coeffs())
      if (v > 0) bs.insert(name);
    if (!meet) meet = bs;
    else {
      std::set<std::string> t;
      std::set_intersection(meet->begin(), meet->end(), bs.begin(), bs.end(), std::inserter(t, t.begin()));
      meet = t;
    }
  }
  out.ladder_consistent = meet && *meet == lp_set;
  return out;
}

// ---------------------------------------------------------------------------
// Restriction to a boundary divisor S = D_rho

/// S is the toric variety of the star of rho. Coordinates come from a
/// unimodular basis [v_rho, w_2, .., w_n] of a maximal cone containing rho:
/// a character m on the facet <m, v_rho> = const maps to u = (B^T m)[1:].
class Restriction {
 public:
  Restriction(const ToricVariety& x, const std::string& s_name) : x_(&x), rho_(x.ray_index(s_name)), name_(s_name) {
    const std::size_t n = x.dim();
    if (n < 2) throw Error(ErrorKind::Domain, "restriction needs dim X >= 2");
    std::size_t first = x.max_cones().size();
    for (std::size_t s = 0; s < x.max_cones().size(); ++s) {
      const auto& c = x.max_cones()[s];
      if (std::find(c.begin(), c.end(), rho_) != c.end()) {
        first = s;
        break;
      }
    }
    std::vector<std::size_t> cols{rho_};
    for (auto i : x.max_cones()[first])
      if (i != rho_) cols.push_back(i);
    basis_.assign(n, RatVec(n));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) basis_[i][j] = Rat(x.rays()[cols[j]][i]);
    basis_inv_ = *linalg::inverse(basis_);
    // S fan: projected star of rho
    std::map<std::size_t, std::size_t> index;
    std::vector<IntVec> rays;
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> cones;
    for (const auto& c : x.max_cones()) {
      if (std::find(c.begin(), c.end(), rho_) == c.end()) continue;
      std::vector<std::size_t> sc;
      for (auto i : c) {
        if (i == rho_) continue;
        if (!index.count(i)) {
          index[i] = rays.size();
          adjacent_.push_back(i);
          rays.push_back(to_intvec(project_ray(x.ray(i))));
          names.push_back("S." + x.names()[i]);
        }
        sc.push_back(index[i]);
      }
      cones.push_back(sc);
    }
    s_ = ToricVariety(n - 1, rays, cones, names, "S");
  }

  const ToricVariety& ambient() const { return *x_; }
  const ToricVariety& variety() const { return s_; }
  std::size_t ray() const { return rho_; }
  const std::string& name() const { return name_; }
  /// X-ray index of each ray of S.
  const std::vector<std::size_t>& adjacent() const { return adjacent_; }

  RatVec project_ray(const RatVec& v) const {
    RatVec c = linalg::mat_vec(basis_inv_, v);
    return RatVec(c.begin() + 1, c.end());
  }

  /// u = (B^T m)[1:].
  IntVec project_character(const IntVec& m) const {
    IntVec u;
    for (std::size_t j = 1; j < x_->dim(); ++j) {
      Rat s = 0;
      for (std::size_t i = 0; i < x_->dim(); ++i) s += basis_[i][j] * Rat(m[i]);
      u.push_back(numer(s).convert_to<long>());
    }
    return u;
  }

  /// The character m with <m, v_rho> = s_value and (B^T m)[1:] = u.
  RatVec lift_character(const RatVec& u, const Rat& s_value) const {
    RatVec t{s_value};
    t.insert(t.end(), u.begin(), u.end());
    RatVec m(x_->dim(), Rat(0));
    for (std::size_t k = 0; k < x_->dim(); ++k)
      for (std::size_t i = 0; i < x_->dim(); ++i) m[k] += basis_inv_[i][k] * t[i];
    return m;
  }

  /// D|_S, computed on D + div(chi^{m0}) where m0 cancels the S-coefficient
  /// and pairs to zero with the other basis rays.
  Divisor restrict(const Divisor& d) const {
    RatVec c = x_->coeff_vector(d);
    RatVec m0 = lift_character(RatVec(x_->dim() - 1, Rat(0)), -c[rho_]);
    RatVec out;
    for (auto i : adjacent_) out.push_back(c[i] + dot(m0, x_->ray(i)));
    return s_.from_vector(out);
  }

  Divisor from_s_vector(const RatVec& v) const { return s_.from_vector(v); }

 private:
  const ToricVariety* x_;
  std::size_t rho_;
  std::string name_;
  RatMat basis_, basis_inv_;
  std::vector<std::size_t> adjacent_;
  ToricVariety s_;
};

struct RestrictedSystem {
  std::vector<IntVec> monomials;  // S coordinates, lexicographic
  std::optional<Divisor> fix;     // Fix(|d|_S) on S; empty when |d|_S is empty
};

/// Image of |d| in S: sections of floor(d) whose divisor does not contain S.
inline RestrictedSystem restricted_system(const Restriction& r, const Divisor& d) {
  const auto& x = r.ambient();
  RatVec c = x.coeff_vector(d);
  if (!is_integer(c[r.ray()])) throw Error(ErrorKind::Domain, "restricted system needs an integral S-coefficient");
  RatVec fl = c;
  for (auto& v : fl) v = Rat(floor_rat(v));
  auto ms = lattice_points(x, fl, {r.ray()});
  RestrictedSystem out;
  for (const auto& m : ms) out.monomials.push_back(r.project_character(m));
  std::sort(out.monomials.begin(), out.monomials.end());
  if (ms.empty()) return out;
  RatVec f;
  for (auto i : r.adjacent()) {
    long best = dot(ms[0], x.rays()[i]);
    for (const auto& m : ms) best = std::min(best, dot(m, x.rays()[i]));
    f.push_back(c[i] + Rat(best));
  }
  out.fix = r.from_s_vector(f);
  return out;
}

/// F_S(d) by LP over the real facet of P_d.
inline Divisor restricted_fixed_lp(const Restriction& r, const Divisor& d) {
  const auto& x = r.ambient();
  RatVec c = x.coeff_vector(d), f;
  for (auto i : r.adjacent()) {
    auto mn = min_pairing(x, c, i, {r.ray()});
    if (!mn) throw Error(ErrorKind::Precondition, "S = " + r.name() + " lies in the stable base locus of " + d.str());
    f.push_back(c[i] + *mn);
  }
  return r.from_s_vector(f);
}

inline bool in_stable_base_locus(const ToricVariety& x, const Divisor& d, std::size_t rho) {
  RatVec c = x.coeff_vector(d);
  return !polytope_nonempty(x, c, {rho});
}

struct RestrictedFixed {
  Divisor value;
  bool ladder_stabilized = false;
  std::vector<Divisor> ladder;
  std::optional<int> stabilized_at;
  std::string note;
};

/// F_S(d) = inf (1/n) Fix(|nd|_S): LP value plus the independent ladder.
inline RestrictedFixed restricted_fixed(const Restriction& r, const Divisor& d, int nmax = kDefaultLadder) {
  if (in_stable_base_locus(r.ambient(), d, r.ray()))
    throw Error(ErrorKind::Precondition, "S = " + r.name() + " lies in the stable base locus of " + d.str());
  RestrictedFixed out;
  out.value = restricted_fixed_lp(r, d);
  AsymptoticFixed tmp;
  detail::run_ladder([&](const Divisor& nd) { return restricted_system(r, nd).fix; }, d, out.value, nmax, tmp);
  out.ladder_stabilized = tmp.ladder_stabilized;
  out.ladder = tmp.ladder;
  out.stabilized_at = tmp.stabilized_at;
  out.note = tmp.note;
  return out;
}

// ---------------------------------------------------------------------------
// Regions in the boundary coefficient space

struct Halfspace {
  RatVec a;  // a . b >= c
  Rat c;
};

struct RegionResult {
  std::vector<Halfspace> inequalities;
  std::vector<RatVec> vertices;
  bool empty() const { return vertices.empty(); }
  bool contains(const RatVec& b) const {
    for (const auto& h : inequalities)
      if (dot(h.a, b) < h.c) return false;
    return true;
  }
};

namespace detail {

/// Rows [alpha | beta] >= gamma over (u, b); eliminates u by Fourier-Motzkin.
struct Ineq {
  RatVec coef;
  Rat rhs;
};

inline bool redundant_free(std::vector<Ineq>& rows, std::size_t nvars) {
  // drop rows implied by the others (exact LP), keeps the system small
  for (std::size_t i = 0; i < rows.size();) {
    lp::Problem<Rat> p(nvars);
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (j != i) p.add(rows[j].coef, lp::Relation::GreaterEq, rows[j].rhs);
    p.objective = rows[i].coef;
    p.maximize = false;
    auto r = lp::solve(p);
    if (r.status == lp::Status::Optimal && r.value >= rows[i].rhs) rows.erase(rows.begin() + static_cast<long>(i));
    else ++i;
  }
  return true;
}

inline std::vector<Ineq> fourier_motzkin(std::vector<Ineq> rows, std::size_t eliminate, std::size_t total) {
  for (std::size_t k = 0; k < eliminate; ++k) {
    std::vector<Ineq> pos, neg, out;
    for (auto& r : rows) {
      if (r.coef[k] > 0) pos.push_back(r);
      else if (r.coef[k] < 0) neg.push_back(r);
      else out.push_back(r);
    }
    for (auto& p : pos)
      for (auto& q : neg) {
        Rat a = p.coef[k], b = -q.coef[k];
        Ineq s{b * p.coef + a * q.coef, b * p.rhs + a * q.rhs};
        out.push_back(s);
      }
    for (auto& r : out) {
      Rat l = Rat(common_denominator(r.coef));
      r.coef = l * r.coef;
      r.rhs *= l;
    }
    rows = out;
    std::vector<Ineq> keep;
    bool infeasible = false;
    for (auto& r : rows) {
      if (is_zero(r.coef)) {
        if (r.rhs > 0) infeasible = true;
        continue;
      }
      keep.push_back(r);
    }
    if (infeasible) return {Ineq{RatVec(total, Rat(0)), Rat(1)}};
    rows = keep;
    redundant_free(rows, total);
  }
  return rows;
}

inline RegionResult finish_region(std::vector<Halfspace> hs, std::size_t r) {
  RegionResult out;
  for (auto& h : hs) {
    if (is_zero(h.a)) {
      if (h.c > 0) {
        out.inequalities = {h};
        return out;
      }
      continue;
    }
    out.inequalities.push_back(h);
  }
  std::set<RatVec> verts;
  const std::size_t m = out.inequalities.size();
  std::vector<std::size_t> idx(r);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == r) {
      RatMat a;
      RatVec b;
      for (auto i : idx) {
        a.push_back(out.inequalities[i].a);
        b.push_back(out.inequalities[i].c);
      }
      if (linalg::rank(a) < r) return;
      auto s = linalg::solve(a, b, r);
      if (s && out.contains(*s)) verts.insert(*s);
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  if (r == 0) {
    if (out.contains({})) verts.insert(RatVec{});
  } else {
    rec(0, 0);
  }
  out.vertices.assign(verts.begin(), verts.end());
  return out;
}

}  // namespace detail

struct AdjointRegions {
  RegionResult L;    // unit box
  RegionResult E;    // K + A + B pseudo-effective
  RegionResult BS;   // S not in the stable base locus (when S given)
  RegionResult BS1;  // additionally b_S = 1
};

/// Regions in b in R^r (B = sum b_j B_j). E and the S-regions come from
/// projecting { (u, b) : <u, v_rho> >= -(K + A + B)_rho } onto b.
inline AdjointRegions adjoint_regions(const ToricVariety& x, const std::vector<std::string>& V, const Divisor& A,
                                      const std::optional<std::string>& S = std::nullopt) {
  if (!is_ample(x, A)) throw Error(ErrorKind::Precondition, "A = " + A.str() + " is not ample");
  const std::size_t n = x.dim(), r = V.size(), total = n + r;
  std::vector<std::size_t> vidx;
  for (const auto& v : V) vidx.push_back(x.ray_index(v));
  RatVec base = x.coeff_vector(x.canonical() + A);
  std::vector<Halfspace> box;
  for (std::size_t j = 0; j < r; ++j) {
    RatVec e(r, Rat(0));
    e[j] = 1;
    box.push_back({e, Rat(0)});
    box.push_back({Rat(-1) * e, Rat(-1)});
  }
  auto polytope_rows = [&]() {
    std::vector<detail::Ineq> rows;
    for (std::size_t i = 0; i < x.num_rays(); ++i) {
      // <u, v_i> + sum_j [B_j = D_i] b_j >= -base_i
      RatVec row = x.ray(i);
      row.resize(total, Rat(0));
      for (std::size_t j = 0; j < r; ++j)
        if (vidx[j] == i) row[n + j] = 1;
      rows.push_back({row, -base[i]});
    }
    for (auto& h : box) {
      RatVec row(n, Rat(0));
      row.insert(row.end(), h.a.begin(), h.a.end());
      rows.push_back({row, h.c});
    }
    return rows;
  };
  auto project = [&](std::vector<detail::Ineq> rows, std::vector<Halfspace> extra) {
    auto el = detail::fourier_motzkin(std::move(rows), n, total);
    std::vector<Halfspace> hs = box;
    for (auto& e : el) hs.push_back({RatVec(e.coef.begin() + static_cast<long>(n), e.coef.end()), e.rhs});
    for (auto& e : extra) hs.push_back(e);
    return detail::finish_region(hs, r);
  };
  AdjointRegions out;
  out.L = detail::finish_region(box, r);
  out.E = project(polytope_rows(), {});
  if (S) {
    std::size_t s = x.ray_index(*S);
    auto sj = std::find(vidx.begin(), vidx.end(), s);
    if (sj == vidx.end()) throw Error(ErrorKind::Domain, "S must be one of the boundary components");
    std::size_t j = static_cast<std::size_t>(sj - vidx.begin());
    auto rows = polytope_rows();
    RatVec row = Rat(-1) * x.ray(s);
    row.resize(total, Rat(0));
    row[n + j] = -1;
    rows.push_back({row, base[s]});  // <u, v_S> + b_S <= -base_S
    out.BS = project(rows, {});
    RatVec e(r, Rat(0));
    e[j] = 1;
    out.BS1 = project(rows, {{e, Rat(1)}, {Rat(-1) * e, Rat(-1)}});
  }
  return out;
}

}  // namespace adjoint::toric
