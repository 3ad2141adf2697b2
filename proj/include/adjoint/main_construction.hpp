#pragma once

// Back-face chopping of the parallelepiped cone, the total-degree bound N,
// generator assembly from restricted rings, the delta-cover by parallelepiped
// cones and the end-to-end finite-generation driver.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adjoint/cone.hpp"
#include "adjoint/graded_ring.hpp"
#include "adjoint/lifting.hpp"
#include "adjoint/parallel.hpp"
#include "adjoint/system.hpp"
#include "adjoint/toric.hpp"

namespace adjoint::mc {

using ring::Element;
using ring::GeneratorSet;

/// Coordinates are indexed by the boundary primes B_1..B_r; K + A = sum c_i B_i.
struct ChopInstance {
  toric::ToricVariety variety;
  Divisor K, A;
  RatVec b;
  std::vector<std::string> boundary;
  RatVec c;
  std::vector<RatVec> raw_generators;  // c + vertices of the parallelepiped
  cone::Cone cone;

  std::size_t rank() const { return boundary.size(); }
  /// D(l) = sum l_i B_i.
  std::map<std::string, RatVec> rows() const {
    std::map<std::string, RatVec> m;
    for (std::size_t i = 0; i < rank(); ++i) {
      RatVec e(rank(), Rat(0));
      e[i] = 1;
      m.emplace(boundary[i], e);
    }
    return m;
  }
  Divisor divisor(const RatVec& l) const {
    Divisor d({}, variety.space());
    for (std::size_t i = 0; i < rank(); ++i) d.set(boundary[i], l[i]);
    return d;
  }
};

/// Coordinates of d on the named primes; nullopt if d has other support.
inline std::optional<RatVec> boundary_coords(const Divisor& d, const std::vector<std::string>& names) {
  RatVec out;
  for (const auto& n : names) out.push_back(d[n]);
  for (const auto& n : d.support())
    if (std::find(names.begin(), names.end(), n) == names.end()) return std::nullopt;
  return out;
}

namespace detail {

inline std::vector<RatVec> box_vertices(const RatVec& lo, std::optional<std::size_t> pinned = std::nullopt) {
  std::set<RatVec> out{RatVec{}};
  for (std::size_t i = 0; i < lo.size(); ++i) {
    std::set<RatVec> next;
    for (const auto& v : out) {
      for (const Rat& t : {lo[i], Rat(1)}) {
        if (pinned && *pinned == i && t != 1) continue;
        RatVec w = v;
        w.push_back(t);
        next.insert(w);
      }
    }
    out = std::move(next);
  }
  return {out.begin(), out.end()};
}

inline cone::Cone parallelepiped_cone(const RatVec& c, const RatVec& lo, std::vector<RatVec>* raw = nullptr,
                                      std::optional<std::size_t> pinned = std::nullopt) {
  std::vector<RatVec> g;
  for (const auto& v : box_vertices(lo, pinned)) g.push_back(c + v);
  if (raw) *raw = g;
  return cone::Cone(c.size(), g);
}

}  // namespace detail

inline ChopInstance make_chop_instance(const toric::ToricVariety& x, const Divisor& K, const Divisor& A, const RatVec& b,
                                       const std::vector<std::string>& boundary) {
  if (boundary.empty()) throw Error(ErrorKind::Domain, "chop instance needs at least one boundary prime");
  if (b.size() != boundary.size()) throw Error(ErrorKind::Dimension, "base point and boundary lengths differ");
  std::set<std::string> seen;
  for (const auto& n : boundary) {
    x.ray_index(n);
    if (!seen.insert(n).second) throw Error(ErrorKind::Domain, "boundary prime " + n + " repeated");
  }
  for (const auto& t : b)
    if (t < 0 || t > 1) throw Error(ErrorKind::Domain, "base point coordinates must lie in [0,1]");
  if (!toric::is_ample(x, A)) throw Error(ErrorKind::Precondition, "A is not ample");
  auto c = boundary_coords(K + A, boundary);
  if (!c) throw Error(ErrorKind::Precondition, "K + A is not supported on the boundary primes");
  ChopInstance inst{x, K, A, b, boundary, *c, {}, {}};
  inst.cone = detail::parallelepiped_cone(inst.c, b, &inst.raw_generators);
  // |p(K + A + B(b))| is nonempty for some p iff the real polytope is nonempty
  if (!toric::polytope_nonempty(x, x.coeff_vector(inst.divisor(inst.c + b))))
    throw Error(ErrorKind::Precondition, "|p(K+A+B)| is empty for every p at base point " + to_string(b));
  return inst;
}

struct ChopPiece {
  std::size_t j = 0;
  std::vector<RatVec> face;  // vertices of the back face t_j = 1
  cone::Cone cone;
  CharacteristicSystem sys;
  std::string strictly_dlt_with;
};

struct ChopResult {
  cone::Cone parent;
  std::vector<ChopPiece> pieces;
};

inline ChopResult chop_backfaces(const ChopInstance& inst) {
  const std::size_t r = inst.rank();
  for (const auto& g : inst.raw_generators)
    for (const auto& t : g)
      if (t < 0)
        throw Error(ErrorKind::Precondition, "cone is not inside the positive span of the boundary: witness " + to_string(g));
  ChopResult out{inst.cone, std::vector<ChopPiece>(r)};
  auto rows = inst.rows();
  parallel_for(r, [&](std::size_t j) {
    if (inst.c[j] + 1 <= 0) throw Error(ErrorKind::Precondition, "c_j + 1 <= 0 for " + inst.boundary[j]);
    ChopPiece& p = out.pieces[j];
    p.j = j;
    p.face = detail::box_vertices(inst.b, j);
    p.cone = detail::parallelepiped_cone(inst.c, inst.b, nullptr, j);
    RatVec rf(r, Rat(0));
    rf[j] = Rat(1) / (inst.c[j] + 1);
    p.sys = CharacteristicSystem::linear(p.cone, rows, rf, inst.K, inst.A, inst.boundary);
    auto cls = classify(p.sys);
    if (!cls.is_dlt) throw Error(ErrorKind::Check, "back-face piece " + inst.boundary[j] + " is not dlt");
    for (const auto& g : p.cone.generators())
      if (p.sys.boundary_at(g)[inst.boundary[j]] != 1)
        throw Error(ErrorKind::Check, "coefficient of " + inst.boundary[j] + " is not 1 on its back-face piece");
    p.strictly_dlt_with = inst.boundary[j];
  });
  auto cover = cone::verify_cover(out.parent, [&] {
    std::vector<cone::Cone> cs;
    for (const auto& p : out.pieces) cs.push_back(p.cone);
    return cs;
  }());
  if (!cover.covered)
    throw Error(ErrorKind::Check, "back-face cones do not cover: " + cover.reason +
                                      (cover.witness ? " at " + to_string(*cover.witness) : ""));
  return out;
}

// ---------------------------------------------------------------------------
// Total-degree bound

struct DegreeBound {
  long N = 0;
  Rat lp_bound = 0;              // max LP value over pieces and facets
  std::optional<IntVec> witness;  // integral m in a piece, tau(m) = N, m - e_j outside the parent
  std::size_t witness_piece = 0;
  long verified_to = 0;
};

/// Least N with: m in C_j integral, tau(m) > N  =>  m - e_j in the parent.
inline DegreeBound degree_bound(const cone::Cone& parent, const std::vector<std::pair<cone::Cone, RatVec>>& pieces,
                                std::optional<RatVec> tau = std::nullopt) {
  const std::size_t r = parent.ambient_dim();
  RatVec t = tau ? *tau : ring::total_degree(r);
  DegreeBound out;
  std::vector<RatVec> cuts = parent.facets();
  for (const auto& e : parent.equations()) {
    cuts.push_back(e);
    cuts.push_back(Rat(-1) * e);
  }
  for (const auto& [c, e] : pieces) {
    if (c.ambient_dim() != r || e.size() != r) throw Error(ErrorKind::Dimension, "degree_bound: dimension mismatch");
    const auto& g = c.generators();
    for (const auto& f : cuts) {
      // integral m violates f(m - e) >= 0 iff f(m) <= f(e) - 1
      lp::Problem<Rat> p(g.size());
      p.all_nonneg();
      RatVec row, obj;
      for (const auto& v : g) {
        row.push_back(dot(f, v));
        obj.push_back(dot(t, v));
      }
      p.add(row, lp::Relation::LessEq, dot(f, e) - 1);
      p.objective = obj;
      p.maximize = true;
      auto res = lp::solve(p);
      if (res.status == lp::Status::Unbounded)
        throw Error(ErrorKind::Unbounded, "degree_bound: no finite N exists (piece escapes facet " + to_string(f) + ")");
      if (res.status == lp::Status::Optimal) out.lp_bound = std::max(out.lp_bound, res.value);
    }
  }
  long lp_n = floor_rat(out.lp_bound).convert_to<long>();
  out.N = 0;
  long limit = lp_n + 3;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& [c, e] = pieces[k];
    for (const auto& m : cone::lattice_points(c, t, Rat(limit))) {
      if (parent.contains_h(m - e)) continue;
      long tm = floor_rat(dot(t, m)).convert_to<long>();
      if (tm > lp_n) throw Error(ErrorKind::Check, "degree_bound: lattice point beyond the LP bound violates the condition");
      if (!out.witness || tm > out.N) {
        out.N = tm;
        out.witness = to_intvec(m);
        out.witness_piece = k;
      }
    }
  }
  out.verified_to = out.N + 3 > limit ? out.N + 3 : limit;
  if (out.verified_to > limit)
    for (const auto& [c, e] : pieces)
      for (const auto& m : cone::lattice_points(c, t, Rat(out.verified_to)))
        if (dot(t, m) > out.N && !parent.contains_h(m - e))
          throw Error(ErrorKind::Check, "degree_bound: exhaustive check failed at " + to_string(m));
  return out;
}

inline std::vector<std::pair<cone::Cone, RatVec>> backface_directions(const ChopResult& chop) {
  std::vector<std::pair<cone::Cone, RatVec>> out;
  const std::size_t r = chop.parent.ambient_dim();
  for (const auto& p : chop.pieces) {
    RatVec e(r, Rat(0));
    e[p.j] = 1;
    out.emplace_back(p.cone, e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generator assembly

inline ring::GradedRing chop_ring(const ChopInstance& inst, const cone::Cone& c) {
  return ring::section_ring(inst.variety, CharacteristicSystem::linear(c, inst.rows()));
}

/// sigma_j: the monomial 1 in H^0(B_j), whose divisor is B_j.
inline Element vanishing_section(const ChopInstance& inst, std::size_t j) {
  IntVec deg(inst.rank(), 0);
  deg[j] = 1;
  return {deg, IntVec(inst.variety.dim(), 0)};
}

struct InductionReplay {
  bool ok = true;
  std::size_t checked = 0;
  std::string failure;
};

struct Assembled {
  GeneratorSet G;       // G_0, lifted G_j, sigma_j (sigma_j may lie outside the grading cone)
  GeneratorSet inside;  // generators of the ring proper, by inflation to the cone
  long N = 0;
  int bound = 0;
  ring::GenerationReport report;
  ring::GenerationReport inside_report;
  InductionReplay replay;
  bool ok() const { return report.ok() && inside_report.ok() && replay.ok; }
};

namespace detail {

/// For tau(l) = M+1 in (N, bound]: each x in R_l either restricts to a product
/// of lifted G_j, or x / sigma_j lies in R_{l - e_j} with tau one less.
inline InductionReplay replay_induction(const ChopInstance& inst, const ChopResult& chop, const ring::GradedRing& rg,
                                        const std::vector<GeneratorSet>& lifts, long N, int bound) {
  InductionReplay rep;
  const std::size_t r = inst.rank();
  RatVec t = ring::total_degree(r);
  std::vector<ring::Closure> cls;
  for (const auto& l : lifts) cls.emplace_back(l, t);
  for (const auto& lr : cone::lattice_points(chop.parent, t, Rat(bound))) {
    if (dot(t, lr) <= N) continue;
    IntVec l = to_intvec(lr);
    std::size_t j = 0;
    while (j < chop.pieces.size() && !chop.pieces[j].cone.contains_h(lr)) ++j;
    if (j == chop.pieces.size()) {
      rep.ok = false;
      rep.failure = "degree " + to_string(lr) + " lies in no back-face piece";
      return rep;
    }
    std::size_t rho = inst.variety.ray_index(inst.boundary[j]);
    IntVec lm = l;
    lm[j] -= 1;
    for (const auto& m : rg.piece(l)) {
      ++rep.checked;
      long on_s = dot(m, inst.variety.rays()[rho]) + l[j];
      if (on_s == 0) {
        if (!cls[j].at(l).count(m)) {
          rep.ok = false;
          rep.failure = "restriction of " + to_string(to_ratvec(m)) + " at " + to_string(lr) + " is not reached by G_" +
                        std::to_string(j);
          return rep;
        }
      } else if (!rg.contains(Element{lm, m})) {
        rep.ok = false;
        rep.failure = "quotient by sigma_" + std::to_string(j) + " of " + to_string(to_ratvec(m)) + " at " + to_string(lr) +
                      " is not in R";
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace detail

/// G = (all of R with 0 < tau <= N) + (lifts of the restricted generators) +
/// (sigma_j); verified to N + extra, then cut back to the grading cone.
inline Assembled assemble_generators(const ChopInstance& inst, const ChopResult& chop,
                                     const std::vector<GeneratorSet>& restricted_gens, long N, int extra = 10) {
  if (restricted_gens.size() != chop.pieces.size())
    throw Error(ErrorKind::Dimension, "assemble_generators: one restricted generator set per piece expected");
  const std::size_t r = inst.rank();
  Assembled out;
  out.N = N;
  out.bound = static_cast<int>(N) + extra;
  auto rg = chop_ring(inst, chop.parent);
  std::set<Element> g;
  if (N > 0)
    for (auto& e : ring::all_elements(rg, static_cast<int>(N))) g.insert(e);
  std::vector<GeneratorSet> lifts(chop.pieces.size());
  for (std::size_t j = 0; j < chop.pieces.size(); ++j) {
    auto rr = lifting::restricted_ring(inst.variety, chop.pieces[j].cone, inst.rows(), inst.boundary[j]);
    for (const auto& e : restricted_gens[j]) {
      IntVec m;
      try {
        m = lifting::lift_restricted(inst.variety, rr, e.deg, e.mono);
      } catch (const Error& err) {
        throw Error(ErrorKind::Check, std::string(err.what()) + " (piece " + inst.boundary[j] + ")", "assemble");
      }
      lifts[j].push_back({e.deg, m});
      g.insert({e.deg, m});
    }
    g.insert(vanishing_section(inst, j));
  }
  out.G.assign(g.begin(), g.end());
  out.report = ring::verify_generation(rg, out.G, out.bound);
  out.replay = detail::replay_induction(inst, chop, rg, lifts, N, out.bound);
  // the ambient ring contains every generator degree; cut it to the chop cone
  std::vector<RatVec> amb = chop.parent.generators();
  for (std::size_t j = 0; j < r; ++j) amb.push_back(to_ratvec(vanishing_section(inst, j).deg));
  auto ambient = chop_ring(inst, cone::Cone(r, amb));
  out.inside = ring::inflate(ambient, out.G, chop.parent);
  out.inside_report = ring::verify_generation(rg, out.inside, out.bound);
  return out;
}

// ---------------------------------------------------------------------------
// delta-cover by parallelepiped cones

struct CoverPoint {
  RatVec w;  // point of the slice r = 1, in grading coordinates
  RatVec b;  // its boundary coefficients
};

struct ThetaCover {
  Rat delta;
  Rat pitch;
  RatVec c;
  cone::Cone image;  // D(C) in boundary coordinates
  std::vector<CoverPoint> points;
  std::vector<ChopInstance> instances;
};

namespace detail {

inline cone::Cone clip(const cone::Cone& piece, const cone::Cone& parent) {
  cone::Cone out = piece;
  for (const auto& f : parent.facets()) out = cone::intersect_halfspace(out, f);
  for (const auto& e : parent.equations()) {
    out = cone::intersect_halfspace(out, e);
    out = cone::intersect_halfspace(out, Rat(-1) * e);
  }
  return out;
}

inline cone::CoverReport cover_by(const cone::Cone& image, const RatVec& c, const std::vector<CoverPoint>& pts) {
  std::vector<cone::Cone> pieces;
  for (const auto& p : pts) pieces.push_back(clip(parallelepiped_cone(c, p.b), image));
  return cone::verify_cover(image, pieces);
}

}  // namespace detail

/// Rational slice points whose parallelepiped cones cover D(C): the vertices
/// of (slice image) ∩ (grid cell), on a grid of pitch delta/2 (halved while the
/// exact cover check fails), then greedily thinned.
inline ThetaCover theoremA_cover(const toric::ToricVariety& x, const CharacteristicSystem& sys, int max_halvings = 3) {
  if (sys.pieces().size() != 1) throw Error(ErrorKind::Precondition, "theoremA_cover: system must be linear", "cover");
  const auto& bnames = sys.boundary();
  if (bnames.empty()) throw Error(ErrorKind::Precondition, "theoremA_cover: no boundary primes", "cover");
  ThetaCover out;
  try {
    out.delta = delta_margin(sys);
  } catch (const Error& e) {
    throw e.with_stage("cover");
  }
  auto c = boundary_coords(sys.K() + sys.A(), bnames);
  if (!c) throw Error(ErrorKind::Precondition, "K + A is not supported on the boundary primes", "cover");
  out.c = *c;
  const std::size_t rb = bnames.size();
  std::vector<RatVec> verts, bvals;
  std::vector<RatVec> img;
  for (const auto& g : sys.cone().generators()) {
    Rat rg = sys.r_of(g);
    if (rg <= 0) throw Error(ErrorKind::Precondition, "r <= 0 at " + to_string(g), "cover");
    auto bv = boundary_coords(sys.boundary_at(g), bnames);
    if (!bv) throw Error(ErrorKind::Precondition, "B(w) is not supported on the boundary primes", "cover");
    verts.push_back(Rat(1) / rg * g);
    bvals.push_back(*bv);
    img.push_back(out.c + *bv);
  }
  out.image = cone::Cone(rb, img);
  const std::size_t k = verts.size();
  Rat h = out.delta / 2;
  for (int attempt = 0; attempt <= max_halvings; ++attempt, h /= 2) {
    std::set<RatVec> seen;
    std::vector<CoverPoint> pts;
    long cells = ceil_rat(Rat(1) / h).convert_to<long>();
    IntVec idx(rb, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == rb) {
        // mu >= 0, sum mu = 1, h idx <= sum mu b <= h (idx + 1)
        std::vector<toric::Halfspace> hs;
        for (std::size_t a = 0; a < k; ++a) {
          RatVec e(k, Rat(0));
          e[a] = 1;
          hs.push_back({e, Rat(0)});
        }
        hs.push_back({RatVec(k, Rat(1)), Rat(1)});
        hs.push_back({RatVec(k, Rat(-1)), Rat(-1)});
        for (std::size_t q = 0; q < rb; ++q) {
          RatVec row;
          for (std::size_t a = 0; a < k; ++a) row.push_back(bvals[a][q]);
          hs.push_back({row, h * idx[q]});
          hs.push_back({Rat(-1) * row, -h * (idx[q] + 1)});
        }
        auto reg = toric::detail::finish_region(hs, k);
        for (const auto& mu : reg.vertices) {
          RatVec b(rb, Rat(0)), w(sys.rank(), Rat(0));
          for (std::size_t a = 0; a < k; ++a) {
            b = b + mu[a] * bvals[a];
            w = w + mu[a] * verts[a];
          }
          if (seen.insert(b).second) pts.push_back({w, b});
        }
        return;
      }
      for (long v = 0; v < cells; ++v) {
        idx[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
    if (!detail::cover_by(out.image, out.c, pts).covered) continue;
    for (std::size_t i = pts.size(); i-- > 0;) {
      auto rest = pts;
      rest.erase(rest.begin() + static_cast<long>(i));
      if (!rest.empty() && detail::cover_by(out.image, out.c, rest).covered) pts = std::move(rest);
    }
    out.pitch = h;
    out.points = pts;
    for (const auto& p : pts) {
      for (const auto& t : p.b)
        if (1 - t < out.delta) throw Error(ErrorKind::Check, "parallelepiped side shorter than delta", "cover");
      try {
        out.instances.push_back(make_chop_instance(x, sys.K(), sys.A(), p.b, bnames));
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (cover point " + to_string(p.w) + ")", "cover");
      }
    }
    return out;
  }
  throw Error(ErrorKind::Check, "parallelepiped cover not found after refinement", "cover");
}

// ---------------------------------------------------------------------------
// End-to-end driver

struct InstanceRun {
  CoverPoint point;
  long N = 0;
  std::optional<IntVec> witness;
  std::size_t generators = 0;
  bool ok = false;
};

struct PipelineCertificate {
  GeneratorSet G;  // in grading coordinates
  long N = 0;
  int verified_bound = 0;
  RatVec tau;
  Rat delta;
  std::vector<InstanceRun> runs;
  ring::GenerationReport report;
  bool ok() const { return report.ok() && report.generated_up_to == verified_bound; }
};

inline PipelineCertificate run_pipeline(const toric::ToricVariety& x, const CharacteristicSystem& sys, int extra = 10) {
  AdjointClassification cls;
  try {
    cls = classify(sys);
  } catch (const Error& e) {
    throw e.with_stage("classify");
  }
  if (!cls.is_dlt) throw Error(ErrorKind::Precondition, "system is not dlt", "classify");
  for (const auto& p : sys.pieces())
    for (const auto& g : p.cone.generators())
      if (!CharacteristicSystem::apply(p, g, sys.space()).is_effective())
        throw Error(ErrorKind::Precondition, "D is not effective at " + to_string(g), "classify");
  std::vector<cone::Cone> tri;
  try {
    tri = cone::triangulate(cone::ConeDecomposition{sys.cone(), sys.piece_cones()}).pieces;
  } catch (const Error& e) {
    throw e.with_stage("triangulate");
  }
  auto fine = sys.refine(tri);
  const auto& bnames = sys.boundary();
  const std::size_t rb = bnames.size();
  PipelineCertificate cert;
  std::set<Element> all;
  std::optional<RatMat> tau_map;
  for (const auto& piece : fine.pieces()) {
    auto lin = CharacteristicSystem::linear(piece.cone, piece.map, piece.r, sys.K(), sys.A(), sys.boundary());
    auto inj = ring::injectivize(lin);
    if (inj.degenerate) throw Error(ErrorKind::Precondition, inj.note, "injectivize");
    // grading coordinates -> boundary coordinates must be unimodular
    RatMat L;
    for (const auto& n : bnames) {
      auto it = piece.map.find(n);
      L.push_back(it == piece.map.end() ? RatVec(sys.rank(), Rat(0)) : it->second);
    }
    for (const auto& n : inj.primes)
      if (std::find(bnames.begin(), bnames.end(), n) == bnames.end())
        throw Error(ErrorKind::Precondition, "D has support off the boundary (" + n + ")", "injectivize");
    if (L.size() != sys.rank() || linalg::determinant(L) * linalg::determinant(L) != 1)
      throw Error(ErrorKind::Precondition, "D is not a unimodular map onto the boundary lattice", "injectivize");
    RatMat Linv = *linalg::inverse(L);
    if (!tau_map) tau_map = L;
    auto cover = theoremA_cover(x, lin);
    cert.delta = cover.delta;
    for (std::size_t k = 0; k < cover.instances.size(); ++k) {
      const auto& inst = cover.instances[k];
      InstanceRun run;
      run.point = cover.points[k];
      ChopResult chop;
      try {
        chop = chop_backfaces(inst);
      } catch (const Error& e) {
        throw e.with_stage("chop");
      }
      auto nb = degree_bound(chop.parent, backface_directions(chop));
      run.N = nb.N;
      run.witness = nb.witness;
      std::vector<GeneratorSet> rgens(chop.pieces.size());
      parallel_for(chop.pieces.size(), [&](std::size_t j) {
        auto rr = lifting::restricted_ring(x, chop.pieces[j].cone, inst.rows(), inst.boundary[j]);
        rgens[j] = lifting::restricted_ring_generators(x, rr);
      });
      auto as = assemble_generators(inst, chop, rgens, nb.N, extra);
      if (!as.ok())
        throw Error(ErrorKind::Check, "assembled generators fail: " + as.replay.failure, "assemble");
      // restrict to D(piece) ∩ chop cone, then back to grading coordinates
      auto meet = detail::clip(chop.parent, cover.image);
      std::vector<RatVec> amb = chop.parent.generators();
      for (const auto& e : as.inside) amb.push_back(to_ratvec(e.deg));
      auto cut = ring::inflate(chop_ring(inst, cone::Cone(rb, amb)), as.inside, meet);
      for (const auto& e : cut) {
        IntVec l = to_intvec(linalg::mat_vec(Linv, to_ratvec(e.deg)));
        all.insert({l, e.mono});
      }
      run.generators = as.G.size();
      run.ok = true;
      cert.N = std::max(cert.N, nb.N);
      cert.runs.push_back(run);
    }
  }
  cert.verified_bound = static_cast<int>(cert.N) + extra;
  // total degree in boundary coordinates when it is linear on the grading cone
  RatVec tau(sys.rank(), Rat(0));
  for (const auto& row : *tau_map) tau = tau + row;
  if (fine.pieces().size() > 1) tau = grading_functional(sys.cone());
  cert.tau = tau;
  cert.G = ring::minimize_generators(GeneratorSet(all.begin(), all.end()), tau);
  cert.report = ring::verify_generation(ring::section_ring(x, sys), cert.G, cert.verified_bound, tau);
  if (!cert.ok()) throw Error(ErrorKind::Check, "pipeline generators fail verification", "verify");
  return cert;
}

}  // namespace adjoint::mc
