#pragma once

// Finite rational cones: generator and facet descriptions, exact membership,
// half-space cuts, triangulations and Hilbert bases.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adjoint/linalg.hpp"
#include "adjoint/lp.hpp"
#include "adjoint/rational.hpp"

namespace adjoint::cone {

/// Default bound on the ambient dimension accepted by hilbert_basis.
inline constexpr std::size_t kDefaultDimLimit = 6;

/// A finite rational cone { sum t_i g_i : t_i >= 0 }. Generators are stored
/// as primitive integer vectors; the facet description is computed eagerly
/// on construction, so a Cone is immutable and safe to share across threads.
class Cone {
 public:
  Cone() = default;

  Cone(std::size_t ambient_dim, const std::vector<RatVec>& gens) : dim_(ambient_dim) {
    std::set<RatVec> seen;
    for (const auto& g : gens) {
      if (g.size() != dim_) throw Error(ErrorKind::Dimension, "cone generator has wrong dimension");
      if (is_zero(g)) continue;
      auto p = primitive(g);
      if (seen.insert(p).second) gens_.push_back(p);
    }
    std::sort(gens_.begin(), gens_.end());
    compute_hrep();
  }

  static Cone orthant(std::size_t n) {
    std::vector<RatVec> g;
    for (std::size_t i = 0; i < n; ++i) {
      RatVec e(n, Rat(0));
      e[i] = 1;
      g.push_back(e);
    }
    return Cone(n, g);
  }

  std::size_t ambient_dim() const { return dim_; }
  /// Dimension of the linear span.
  std::size_t dim() const { return span_rank_; }
  bool full_dimensional() const { return span_rank_ == dim_; }
  const std::vector<RatVec>& generators() const { return gens_; }
  /// Primitive inward normals f with f.x >= 0 on the cone, one per facet.
  const std::vector<RatVec>& facets() const { return facets_; }
  /// Rows e with e.x = 0 on the span.
  const std::vector<RatVec>& equations() const { return equations_; }
  bool is_pointed() const { return pointed_; }

  /// Membership decided by LP feasibility of G t = v, t >= 0.
  bool contains(const RatVec& v) const {
    if (v.size() != dim_) throw Error(ErrorKind::Dimension, "contains: dimension mismatch");
    if (is_zero(v)) return true;
    if (gens_.empty()) return false;
    lp::Problem<Rat> p(gens_.size());
    p.all_nonneg();
    for (std::size_t i = 0; i < dim_; ++i) {
      RatVec row;
      for (const auto& g : gens_) row.push_back(g[i]);
      p.add(row, lp::Relation::Equal, v[i]);
    }
    return lp::feasible(p);
  }

  /// Membership decided by the facet description.
  bool contains_h(const RatVec& v) const {
    if (v.size() != dim_) throw Error(ErrorKind::Dimension, "contains: dimension mismatch");
    for (const auto& e : equations_)
      if (dot(e, v) != 0) return false;
    for (const auto& f : facets_)
      if (dot(f, v) < 0) return false;
    return true;
  }

  /// Strict relative interior.
  bool contains_relint(const RatVec& v) const {
    if (!contains_h(v)) return false;
    for (const auto& f : facets_)
      if (dot(f, v) == 0) return false;
    return true;
  }

  /// Extreme rays (pointed cones only); sorted.
  std::vector<RatVec> rays() const {
    if (!pointed_) throw Error(ErrorKind::Domain, "rays: cone is not pointed");
    std::vector<RatVec> out;
    for (const auto& g : gens_) {
      if (span_rank_ <= 1) {
        out.push_back(g);
        continue;
      }
      linalg::Mat<Rat> tight = equations_;
      for (const auto& f : facets_)
        if (dot(f, g) == 0) tight.push_back(f);
      if (linalg::rank(tight) == dim_ - 1) out.push_back(g);
    }
    return out;
  }

  RatVec interior_point() const {
    RatVec s(dim_, Rat(0));
    for (const auto& g : gens_) s = s + g;
    return s;
  }

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.dim_ == b.dim_ && a.equations_ == b.equations_ && a.facets_ == b.facets_;
  }

 private:
  void compute_hrep() {
    span_rank_ = linalg::rank(gens_);
    equations_.clear();
    for (auto& e : linalg::nullspace(gens_, dim_)) equations_.push_back(primitive(e));
    facets_.clear();
    pointed_ = true;
    if (span_rank_ == 0) return;
    std::set<RatVec> found;
    const std::size_t k = span_rank_ - 1;
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
      if (depth == k) {
        linalg::Mat<Rat> rows = equations_;
        for (auto i : idx) rows.push_back(gens_[i]);
        if (k > 0 && linalg::rank(linalg::Mat<Rat>(rows.end() - static_cast<long>(k), rows.end())) < k) return;
        auto ns = linalg::nullspace(rows, dim_);
        if (ns.size() != 1) return;
        RatVec f = primitive(ns[0]);
        bool pos = false, neg = false;
        for (const auto& g : gens_) {
          Rat s = dot(f, g);
          if (s > 0) pos = true;
          if (s < 0) neg = true;
        }
        if (pos && neg) return;
        if (neg) f = Rat(-1) * f;
        found.insert(f);
        return;
      }
      for (std::size_t i = start; i < gens_.size(); ++i) {
        idx[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);
    facets_.assign(found.begin(), found.end());
    // Pointed iff no nonzero nonnegative combination of generators vanishes.
    lp::Problem<Rat> p(gens_.size());
    p.all_nonneg();
    for (std::size_t i = 0; i < dim_; ++i) {
      RatVec row;
      for (const auto& g : gens_) row.push_back(g[i]);
      p.add(row, lp::Relation::Equal, Rat(0));
    }
    p.add(RatVec(gens_.size(), Rat(1)), lp::Relation::Equal, Rat(1));
    pointed_ = !lp::feasible(p);
    // Cross-check: every generator satisfies the facet description.
    for (const auto& g : gens_)
      if (!contains_h(g)) throw Error(ErrorKind::Check, "cone: facet description excludes a generator");
  }

  std::size_t dim_ = 0;
  std::vector<RatVec> gens_;
  std::size_t span_rank_ = 0;
  std::vector<RatVec> equations_;
  std::vector<RatVec> facets_;
  bool pointed_ = true;
};

/// Keeps only extreme rays of a pointed cone.
inline Cone prune(const Cone& c) {
  if (!c.is_pointed()) return c;
  return Cone(c.ambient_dim(), c.rays());
}

/// { w in c : f(w) >= 0 }. One double-description step followed by pruning.
inline Cone intersect_halfspace(const Cone& c, const RatVec& f) {
  if (f.size() != c.ambient_dim()) throw Error(ErrorKind::Dimension, "intersect_halfspace: dimension mismatch");
  std::vector<RatVec> pos, neg, out;
  for (const auto& g : c.generators()) {
    Rat s = dot(f, g);
    if (s >= 0) out.push_back(g);
    if (s > 0) pos.push_back(g);
    if (s < 0) neg.push_back(g);
  }
  for (const auto& p : pos)
    for (const auto& n : neg) out.push_back(dot(f, p) * n - dot(f, n) * p);
  return prune(Cone(c.ambient_dim(), out));
}

inline bool is_simplicial(const Cone& c) { return linalg::rank(c.generators()) == c.generators().size(); }

/// Coefficients of v in the generators of a simplicial cone.
inline RatVec simplicial_coords(const Cone& c, const RatVec& v) {
  auto gt = linalg::transpose(c.generators());
  auto sol = linalg::solve(gt, v, c.generators().size());
  if (!sol) throw Error(ErrorKind::Domain, "point outside the span of the simplicial cone");
  return *sol;
}

struct ConeDecomposition {
  Cone parent;
  std::vector<Cone> pieces;
};

struct CoverReport {
  bool covered = true;
  std::optional<RatVec> witness;  // a point of the parent in no piece
  std::string reason;
};

/// Splits cells along the hyperplane f = 0, keeping full cells of rank `rank`.
inline std::vector<Cone> split_cells(const std::vector<Cone>& cells, const RatVec& f, std::size_t rank) {
  std::vector<Cone> out;
  for (const auto& c : cells) {
    bool pos = false, neg = false;
    for (const auto& g : c.generators()) {
      Rat s = dot(f, g);
      if (s > 0) pos = true;
      if (s < 0) neg = true;
    }
    if (!(pos && neg)) {
      out.push_back(c);
      continue;
    }
    Cone a = intersect_halfspace(c, f);
    Cone b = intersect_halfspace(c, Rat(-1) * f);
    if (a.dim() == rank) out.push_back(a);
    if (b.dim() == rank) out.push_back(b);
  }
  return out;
}

/// Exact check that the union of `pieces` equals `parent`. The parent is cut
/// by every facet hyperplane of every piece; each resulting cell lies either
/// inside or outside each piece, so testing one interior point per cell decides
/// coverage.
inline CoverReport verify_cover(const Cone& parent, const std::vector<Cone>& pieces) {
  CoverReport rep;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (const auto& g : pieces[i].generators())
      if (!parent.contains_h(g)) {
        rep.covered = false;
        rep.witness = g;
        rep.reason = "piece " + std::to_string(i) + " leaves the parent";
        return rep;
      }
  std::vector<Cone> cells{parent};
  for (const auto& p : pieces) {
    for (const auto& f : p.facets()) cells = split_cells(cells, f, parent.dim());
    for (const auto& e : p.equations()) cells = split_cells(cells, e, parent.dim());
  }
  for (const auto& cell : cells) {
    RatVec x = cell.interior_point();
    bool hit = false;
    for (const auto& p : pieces)
      if (p.dim() == parent.dim() && p.contains_h(x)) {
        hit = true;
        break;
      }
    if (!hit) {
      rep.covered = false;
      rep.witness = x;
      rep.reason = "cell not covered";
      return rep;
    }
  }
  return rep;
}

/// Pulling triangulation of a pointed cone, pulling rays in lexicographic
/// order. Using one global order makes triangulations of adjacent cells of a
/// polyhedral complex agree on their common faces.
inline std::vector<Cone> pulling_triangulation(const Cone& c) {
  if (!c.is_pointed()) throw Error(ErrorKind::Domain, "triangulate: cone is not pointed");
  if (c.dim() == 0) return {};
  auto rays = c.rays();
  if (c.dim() == rays.size()) return {Cone(c.ambient_dim(), rays)};
  const RatVec& apex = rays.front();
  std::vector<Cone> out;
  for (const auto& f : c.facets()) {
    if (dot(f, apex) == 0) continue;
    std::vector<RatVec> face;
    for (const auto& r : rays)
      if (dot(f, r) == 0) face.push_back(r);
    for (const auto& s : pulling_triangulation(Cone(c.ambient_dim(), face))) {
      auto g = s.generators();
      g.push_back(apex);
      out.emplace_back(c.ambient_dim(), g);
    }
  }
  return out;
}

/// Stellar subdivision of a simplicial complex at ray v.
inline std::vector<Cone> stellar_subdivide(const std::vector<Cone>& pieces, const RatVec& v) {
  RatVec pv = primitive(v);
  std::vector<Cone> out;
  for (const auto& p : pieces) {
    if (!p.contains_h(pv)) {
      out.push_back(p);
      continue;
    }
    const auto& g = p.generators();
    if (std::find(g.begin(), g.end(), pv) != g.end()) {
      out.push_back(p);
      continue;
    }
    RatVec t = simplicial_coords(p, pv);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (t[i] <= 0) continue;
      auto ng = g;
      ng[i] = pv;
      out.emplace_back(p.ambient_dim(), ng);
    }
  }
  return out;
}

/// Simplicial refinement of a decomposition: pieces are simplicial, meet in
/// common faces, each lies inside one input piece, and every required ray is
/// a ray of the output.
inline ConeDecomposition triangulate(const ConeDecomposition& d, const std::vector<RatVec>& required_rays = {}) {
  const Cone& parent = d.parent;
  if (!parent.is_pointed()) throw Error(ErrorKind::Domain, "triangulate: cone is not pointed");
  for (const auto& r : required_rays) {
    if (r.size() != parent.ambient_dim()) throw Error(ErrorKind::Dimension, "triangulate: breakpoint has wrong dimension");
    if (is_zero(r) || !parent.contains_h(r))
      throw Error(ErrorKind::Precondition, "inconsistent breakpoint data: ray " + to_string(r) + " is not in the cone");
  }
  for (const auto& p : d.pieces)
    for (const auto& g : p.generators())
      if (!parent.contains_h(g))
        throw Error(ErrorKind::Precondition, "inconsistent breakpoint data: a linearity region leaves the cone");
  std::vector<Cone> cells{parent};
  for (const auto& p : d.pieces) {
    if (p.dim() != parent.dim()) continue;
    for (const auto& f : p.facets()) cells = split_cells(cells, f, parent.dim());
  }
  std::vector<Cone> simplices;
  for (const auto& c : cells)
    for (auto& s : pulling_triangulation(c)) simplices.push_back(std::move(s));
  for (const auto& r : required_rays) simplices = stellar_subdivide(simplices, r);
  ConeDecomposition out{parent, std::move(simplices)};
  if (!d.pieces.empty())
    for (const auto& s : out.pieces) {
      RatVec x = s.interior_point();
      bool inside = false;
      for (const auto& p : d.pieces)
        if (p.contains_h(x)) inside = true;
      if (!inside) throw Error(ErrorKind::Precondition, "inconsistent breakpoint data: regions do not cover the cone");
    }
  return out;
}

inline ConeDecomposition triangulate(const Cone& c, const std::vector<RatVec>& required_rays = {}) {
  return triangulate(ConeDecomposition{c, {}}, required_rays);
}

namespace detail {

/// Nonzero lattice points of the half-open parallelepiped sum [0,1) g_i of a
/// simplicial cone with primitive integer generators.
inline std::vector<RatVec> parallelepiped_points(const Cone& s) {
  const auto& g = s.generators();
  const std::size_t k = g.size(), n = s.ambient_dim();
  // pick k coordinates on which the generators are independent
  std::vector<std::size_t> coords;
  linalg::Mat<Rat> chosen;
  for (std::size_t i = 0; i < n && coords.size() < k; ++i) {
    RatVec row;
    for (const auto& v : g) row.push_back(v[i]);
    auto trial = chosen;
    trial.push_back(row);
    if (linalg::rank(trial) > chosen.size()) {
      chosen = trial;
      coords.push_back(i);
    }
  }
  auto inv = linalg::inverse(chosen);
  if (!inv) throw Error(ErrorKind::Check, "parallelepiped: singular generator block");
  Rat det = abs(linalg::determinant(chosen));
  if (det == 1) return {};
  // integer adjugate: t * det = adj * x_I
  std::vector<std::vector<long>> adj(k, std::vector<long>(k));
  long D = numer(det).convert_to<long>();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) adj[a][b] = numer((*inv)[a][b] * det).convert_to<long>();
  std::vector<long> lo(k, 0), hi(k, 0);
  for (std::size_t j = 0; j < k; ++j)
    for (const auto& v : g) {
      long c = numer(v[coords[j]]).convert_to<long>();
      if (c < 0) lo[j] += c;
      else hi[j] += c;
    }
  std::vector<std::vector<long>> gl(k, std::vector<long>(n));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) gl[i][j] = numer(g[i][j]).convert_to<long>();
  std::vector<RatVec> out;
  std::vector<long> x(k);
  std::vector<long> t(k);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == k) {
      for (std::size_t a = 0; a < k; ++a) {
        long s = 0;
        for (std::size_t b = 0; b < k; ++b) s += adj[a][b] * x[b];
        if (s < 0 || s >= D) return;
        t[a] = s;
      }
      // full point = sum t_a g_a / D must be integral
      RatVec p(n);
      bool nonzero = false;
      for (std::size_t c = 0; c < n; ++c) {
        long s = 0;
        for (std::size_t a = 0; a < k; ++a) s += t[a] * gl[a][c];
        if (s % D != 0) return;
        p[c] = Rat(s / D);
        if (s != 0) nonzero = true;
      }
      if (nonzero) out.push_back(std::move(p));
      return;
    }
    for (long v = lo[j]; v <= hi[j]; ++v) {
      x[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace detail

/// Unique minimal generating set of the monoid c ∩ Z^n of a pointed cone.
/// Candidates come from the fundamental parallelepipeds of a triangulation;
/// reducible candidates are removed by pairwise subtraction.
inline std::vector<RatVec> hilbert_basis(const Cone& c, std::size_t dim_limit = kDefaultDimLimit) {
  if (c.ambient_dim() > dim_limit)
    throw Error(ErrorKind::Limit, "hilbert_basis: ambient dimension " + std::to_string(c.ambient_dim()) +
                                      " exceeds the configured limit " + std::to_string(dim_limit));
  if (!c.is_pointed()) throw Error(ErrorKind::Domain, "hilbert_basis: cone is not pointed");
  if (c.dim() == 0) return {};
  std::set<RatVec> cand;
  for (const auto& s : pulling_triangulation(c)) {
    for (const auto& g : s.generators()) cand.insert(g);
    for (auto& p : detail::parallelepiped_points(s)) cand.insert(std::move(p));
  }
  std::vector<RatVec> out;
  for (const auto& x : cand) {
    bool reducible = false;
    for (const auto& y : cand) {
      if (y == x) continue;
      if (c.contains_h(x - y)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) out.push_back(x);
  }
  return out;
}

/// Bounding box of { x in c : ell(x) <= bound } by exact LP, or nullopt when
/// the region is unbounded.
inline std::optional<std::vector<std::pair<Int, Int>>> bounding_box(const Cone& c, const RatVec& ell, const Rat& bound) {
  const std::size_t n = c.ambient_dim(), m = c.generators().size();
  std::vector<std::pair<Int, Int>> box(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (int sense = 0; sense < 2; ++sense) {
      lp::Problem<Rat> p(m);
      p.all_nonneg();
      RatVec lrow;
      for (const auto& g : c.generators()) lrow.push_back(dot(ell, g));
      p.add(lrow, lp::Relation::LessEq, bound);
      RatVec obj;
      for (const auto& g : c.generators()) obj.push_back(g[j]);
      p.objective = obj;
      p.maximize = sense == 0;
      auto r = lp::solve(p);
      if (r.status == lp::Status::Unbounded) return std::nullopt;
      if (sense == 0) box[j].second = floor_rat(r.value);
      else box[j].first = ceil_rat(r.value);
    }
  }
  return box;
}

/// Lattice points x of c with ell(x) <= bound, sorted by (ell, lex).
inline std::vector<RatVec> lattice_points(const Cone& c, const RatVec& ell, const Rat& bound) {
  auto box = bounding_box(c, ell, bound);
  if (!box) throw Error(ErrorKind::Unbounded, "lattice_points: region is unbounded");
  const std::size_t n = c.ambient_dim();
  std::vector<RatVec> out;
  RatVec x(n);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == n) {
      if (dot(ell, x) <= bound && c.contains_h(x)) out.push_back(x);
      return;
    }
    for (Int v = (*box)[j].first; v <= (*box)[j].second; ++v) {
      x[j] = Rat(v);
      rec(j + 1);
    }
  };
  rec(0);
  std::stable_sort(out.begin(), out.end(), [&](const RatVec& a, const RatVec& b) { return dot(ell, a) < dot(ell, b); });
  return out;
}

}  // namespace adjoint::cone
