#pragma once

// Rational piecewise-linear characteristic systems lambda -> D(lambda) and
// their coefficient-level classification.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adjoint/cone.hpp"
#include "adjoint/divisor.hpp"

namespace adjoint {

/// D restricted to one linearity region: D(w)_P = map[P] . w, r(w) = r . w.
struct LinearPiece {
  cone::Cone cone;
  std::map<std::string, RatVec> map;
  RatVec r;
};

class CharacteristicSystem {
 public:
  CharacteristicSystem() = default;

  /// Validates face agreement of the pieces and the exact cover of `cone`.
  CharacteristicSystem(cone::Cone c, std::vector<LinearPiece> pieces, Divisor K = {}, Divisor A = {},
                       std::vector<std::string> boundary = {}, std::string space = "X")
      : cone_(std::move(c)), pieces_(std::move(pieces)), K_(std::move(K)), A_(std::move(A)),
        boundary_(std::move(boundary)), space_(std::move(space)) {
    const std::size_t r = cone_.ambient_dim();
    for (const auto& p : pieces_) {
      if (p.cone.ambient_dim() != r) throw Error(ErrorKind::Dimension, "system piece has wrong dimension");
      for (auto& [k, v] : p.map)
        if (v.size() != r) throw Error(ErrorKind::Dimension, "system map row for " + k + " has wrong width");
      if (!p.r.empty() && p.r.size() != r) throw Error(ErrorKind::Dimension, "r functional has wrong width");
    }
    if (pieces_.empty()) throw Error(ErrorKind::Precondition, "system has no pieces");
    auto cover = cone::verify_cover(cone_, piece_cones());
    if (!cover.covered)
      throw Error(ErrorKind::Precondition, "linearity regions do not cover the cone: " + cover.reason +
                                               (cover.witness ? " at " + to_string(*cover.witness) : ""));
    check_face_agreement();
  }

  /// Globally linear system with a single piece.
  static CharacteristicSystem linear(const cone::Cone& c, std::map<std::string, RatVec> map, RatVec r = {},
                                     Divisor K = {}, Divisor A = {}, std::vector<std::string> boundary = {}) {
    return CharacteristicSystem(c, {LinearPiece{c, std::move(map), std::move(r)}}, std::move(K), std::move(A),
                                std::move(boundary));
  }

  const cone::Cone& cone() const { return cone_; }
  const std::vector<LinearPiece>& pieces() const { return pieces_; }
  std::vector<cone::Cone> piece_cones() const {
    std::vector<cone::Cone> out;
    for (const auto& p : pieces_) out.push_back(p.cone);
    return out;
  }
  const Divisor& K() const { return K_; }
  const Divisor& A() const { return A_; }
  const std::vector<std::string>& boundary() const { return boundary_; }
  const std::string& space() const { return space_; }
  std::size_t rank() const { return cone_.ambient_dim(); }
  bool has_adjoint_data() const {
    for (const auto& p : pieces_)
      if (p.r.empty()) return false;
    return true;
  }

  std::size_t piece_of(const RatVec& w) const {
    if (w.size() != rank()) throw Error(ErrorKind::Dimension, "eval: dimension mismatch");
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      if (pieces_[i].cone.contains_h(w)) return i;
    throw Error(ErrorKind::Domain, "point " + to_string(w) + " is outside the cone");
  }

  static Divisor apply(const LinearPiece& p, const RatVec& w, const std::string& space) {
    Divisor::Map m;
    for (auto& [k, row] : p.map) m.emplace(k, dot(row, w));
    return Divisor(m, space);
  }

  Divisor eval(const RatVec& w) const { return apply(pieces_[piece_of(w)], w, space_); }

  Rat r_of(const RatVec& w) const {
    const auto& p = pieces_[piece_of(w)];
    if (p.r.empty()) throw Error(ErrorKind::Precondition, "system has no adjoint data");
    return dot(p.r, w);
  }

  /// B(w) = D(w)/r(w) - K - A, homogeneous of degree 0.
  Divisor boundary_at(const RatVec& w) const {
    Rat r = r_of(w);
    if (r <= 0) throw Error(ErrorKind::Precondition, "r(w) <= 0 at " + to_string(w));
    return Rat(1) / r * eval(w) - K_ - A_;
  }

  /// Same system on a finer decomposition.
  CharacteristicSystem refine(const std::vector<cone::Cone>& finer) const {
    std::vector<LinearPiece> ps;
    for (const auto& c : finer) {
      const auto& src = pieces_[piece_of(c.interior_point())];
      ps.push_back(LinearPiece{c, src.map, src.r});
    }
    return CharacteristicSystem(cone_, std::move(ps), K_, A_, boundary_, space_);
  }

 private:
  void check_face_agreement() const {
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      for (std::size_t j = i + 1; j < pieces_.size(); ++j) {
        cone::Cone meet = pieces_[i].cone;
        for (const auto& f : pieces_[j].cone.facets()) meet = cone::intersect_halfspace(meet, f);
        for (const auto& e : pieces_[j].cone.equations()) {
          meet = cone::intersect_halfspace(meet, e);
          meet = cone::intersect_halfspace(meet, Rat(-1) * e);
        }
        for (const auto& g : meet.generators()) {
          if (!(apply(pieces_[i], g, space_) == apply(pieces_[j], g, space_)))
            throw Error(ErrorKind::Precondition, "pieces " + std::to_string(i) + " and " + std::to_string(j) +
                                                     " disagree on their common face at " + to_string(g));
          if (!pieces_[i].r.empty() && !pieces_[j].r.empty() && dot(pieces_[i].r, g) != dot(pieces_[j].r, g))
            throw Error(ErrorKind::Precondition, "r is discontinuous at " + to_string(g));
        }
      }
  }

  cone::Cone cone_;
  std::vector<LinearPiece> pieces_;
  Divisor K_, A_;
  std::vector<std::string> boundary_;
  std::string space_ = "X";
};

/// Linear functional positive on every nonzero point of a pointed cone.
inline RatVec grading_functional(const cone::Cone& c) {
  RatVec ell(c.ambient_dim(), Rat(0));
  if (c.dim() == 1) return c.generators().front();
  for (const auto& f : c.facets()) ell = ell + f;
  return ell;
}

struct ShapeReport {
  bool concave = true;
  bool superadditive_mob = true;
  std::optional<std::pair<RatVec, RatVec>> superadditivity_witness;
  std::string concavity_detail;
};

using MobOracle = std::function<Divisor(const RatVec&)>;

/// Concavity is exact: a continuous PL map is concave iff on every piece it
/// is dominated by every other piece's linear extension. Superadditivity of
/// M (default: D itself) is tested on lattice pairs of grading degree <= bound.
inline ShapeReport check_shape(const CharacteristicSystem& sys, const MobOracle& mob = {}, int bound = 6) {
  ShapeReport rep;
  const auto& ps = sys.pieces();
  for (std::size_t i = 0; i < ps.size() && rep.concave; ++i)
    for (const auto& g : ps[i].cone.generators()) {
      Divisor own = CharacteristicSystem::apply(ps[i], g, sys.space());
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (!(own <= CharacteristicSystem::apply(ps[j], g, sys.space()))) {
          rep.concave = false;
          rep.concavity_detail = "piece " + std::to_string(j) + " undercuts piece " + std::to_string(i) + " at " +
                                 to_string(g);
          break;
        }
      }
      if (!rep.concave) break;
    }
  MobOracle m = mob ? mob : MobOracle([&](const RatVec& w) { return sys.eval(w); });
  auto pts = cone::lattice_points(sys.cone(), grading_functional(sys.cone()), Rat(bound));
  std::vector<Divisor> vals;
  for (const auto& p : pts) vals.push_back(m(p));
  for (std::size_t a = 0; a < pts.size() && rep.superadditive_mob; ++a)
    for (std::size_t b = a; b < pts.size(); ++b) {
      if (!(vals[a] + vals[b] <= m(pts[a] + pts[b]))) {
        rep.superadditive_mob = false;
        rep.superadditivity_witness = std::make_pair(pts[a], pts[b]);
        break;
      }
    }
  return rep;
}

struct AdjointClassification {
  bool is_divisorial = false;
  bool is_adjoint = false;
  bool is_big = false;
  bool is_klt = false;
  bool is_dlt = false;
  std::optional<std::string> strictly_dlt_with;
  std::optional<Rat> delta_margin;
};

namespace detail {

/// Points where the degree-0 boundary attains its extreme values: piece rays
/// and, where affordable, piece Hilbert bases.
inline std::vector<RatVec> classification_points(const CharacteristicSystem& sys) {
  std::set<RatVec> pts;
  for (const auto& p : sys.pieces()) {
    for (const auto& g : p.cone.generators()) pts.insert(g);
    try {
      for (auto& h : cone::hilbert_basis(p.cone)) pts.insert(std::move(h));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Limit) throw;
    }
  }
  return {pts.begin(), pts.end()};
}

inline std::vector<RatVec> piece_rays(const CharacteristicSystem& sys) {
  std::set<RatVec> pts;
  for (const auto& p : sys.pieces())
    for (const auto& g : p.cone.generators()) pts.insert(g);
  return {pts.begin(), pts.end()};
}

}  // namespace detail

/// Boundary primes examined by the coefficient criterion: the declared names
/// plus anything in the support of some B(w).
inline std::set<std::string> boundary_primes(const CharacteristicSystem& sys, const std::vector<RatVec>& pts) {
  std::set<std::string> names(sys.boundary().begin(), sys.boundary().end());
  for (const auto& w : pts)
    for (const auto& n : sys.boundary_at(w).support()) names.insert(n);
  return names;
}

/// delta = min over piece rays e and boundary primes i of 1 - b_i(e).
inline Rat delta_margin(const CharacteristicSystem& sys) {
  auto pts = detail::piece_rays(sys);
  Rat delta = 1;
  for (const auto& w : pts) {
    Divisor b = sys.boundary_at(w);
    for (const auto& n : boundary_primes(sys, pts)) delta = std::min(delta, Rat(1) - b[n]);
  }
  if (delta <= 0) throw Error(ErrorKind::Precondition, "system is not klt: delta = " + to_string(delta) + " <= 0");
  return delta;
}

inline AdjointClassification classify(const CharacteristicSystem& sys) {
  AdjointClassification c;
  c.is_divisorial = true;  // construction already validated cover and face agreement
  if (!sys.has_adjoint_data()) return c;
  auto pts = detail::classification_points(sys);
  for (const auto& w : pts)
    if (sys.r_of(w) <= 0) return c;
  auto names = boundary_primes(sys, pts);
  bool nonneg = true, below1 = true, atmost1 = true;
  std::map<std::string, bool> always_one;
  for (const auto& n : names) always_one[n] = true;
  for (const auto& w : pts) {
    Divisor b = sys.boundary_at(w);
    for (const auto& n : names) {
      Rat v = b[n];
      if (v < 0) nonneg = false;
      if (v >= 1) below1 = false;
      if (v > 1) atmost1 = false;
      if (v != 1) always_one[n] = false;
    }
    if (!(sys.A() + b).is_effective()) nonneg = false;
  }
  c.is_adjoint = nonneg;
  c.is_klt = nonneg && below1;
  c.is_dlt = nonneg && atmost1;
  c.is_big = c.is_adjoint && !sys.A().is_zero();
  if (c.is_dlt)
    for (const auto& n : sys.boundary())
      if (always_one[n]) {
        c.strictly_dlt_with = n;
        break;
      }
  if (c.is_dlt && !c.strictly_dlt_with)
    for (auto& [n, one] : always_one)
      if (one) {
        c.strictly_dlt_with = n;
        break;
      }
  if (c.is_klt) c.delta_margin = delta_margin(sys);
  return c;
}

}  // namespace adjoint
