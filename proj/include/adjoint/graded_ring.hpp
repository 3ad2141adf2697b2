#pragma once

// Monoid-graded monomial algebras: section rings over the toric oracle,
// Veronese subrings, inflation to subcones and finite-generation checks.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adjoint/cone.hpp"
#include "adjoint/parallel.hpp"
#include "adjoint/system.hpp"
#include "adjoint/toric.hpp"

namespace adjoint::ring {

/// A monomial of the graded piece at `deg`.
struct Element {
  IntVec deg;
  IntVec mono;
  friend auto operator<=>(const Element&, const Element&) = default;
};

using GeneratorSet = std::vector<Element>;

inline Element operator+(const Element& a, const Element& b) {
  Element e{a.deg, a.mono};
  for (std::size_t i = 0; i < e.deg.size(); ++i) e.deg[i] += b.deg[i];
  for (std::size_t i = 0; i < e.mono.size(); ++i) e.mono[i] += b.mono[i];
  return e;
}

inline Element scale(const Element& a, long k) {
  Element e = a;
  for (auto& v : e.deg) v *= k;
  for (auto& v : e.mono) v *= k;
  return e;
}

using PieceFn = std::function<std::vector<IntVec>(const IntVec&)>;

/// R = sum over lambda in cone ∩ L of R_lambda, with R_lambda given as a
/// sorted monomial list. Pieces are cached; cache access is serialized.
class GradedRing {
 public:
  GradedRing(cone::Cone c, PieceFn piece, std::size_t mono_dim, std::vector<RatMat> lattices = {})
      : cone_(std::move(c)), piece_fn_(std::move(piece)), mono_dim_(mono_dim), lattices_(std::move(lattices)),
        cache_(std::make_shared<Cache>()) {}

  const cone::Cone& cone() const { return cone_; }
  std::size_t rank() const { return cone_.ambient_dim(); }
  std::size_t mono_dim() const { return mono_dim_; }
  /// Sublattices (as column bases) the grading is restricted to.
  const std::vector<RatMat>& lattices() const { return lattices_; }

  /// lambda in the grading monoid: in the cone and in every sublattice.
  bool in_monoid(const IntVec& lambda) const {
    if (!cone_.contains_h(to_ratvec(lambda))) return false;
    for (const auto& l : lattices_) {
      auto t = linalg::solve(l, to_ratvec(lambda), l.front().size());
      if (!t || !is_integral(*t)) return false;
    }
    return true;
  }

  const std::vector<IntVec>& piece(const IntVec& lambda) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mu);
      auto it = cache_->pieces.find(lambda);
      if (it != cache_->pieces.end()) return it->second;
    }
    std::vector<IntVec> p;
    if (in_monoid(lambda)) {
      p = piece_fn_(lambda);
      std::sort(p.begin(), p.end());
    }
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->pieces.emplace(lambda, std::move(p)).first->second;
  }

  bool contains(const Element& e) const {
    const auto& p = piece(e.deg);
    return std::binary_search(p.begin(), p.end(), e.mono);
  }

  GradedRing with(cone::Cone c, std::vector<RatMat> lattices) const {
    return GradedRing(std::move(c), piece_fn_, mono_dim_, std::move(lattices));
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<IntVec, std::vector<IntVec>> pieces;
  };
  cone::Cone cone_;
  PieceFn piece_fn_;
  std::size_t mono_dim_;
  std::vector<RatMat> lattices_;
  std::shared_ptr<Cache> cache_;
};

/// R(X; D) = sum H^0(X, D(lambda)).
inline GradedRing section_ring(const toric::ToricVariety& x, const CharacteristicSystem& sys) {
  auto xs = std::make_shared<toric::ToricVariety>(x);
  auto ss = std::make_shared<CharacteristicSystem>(sys);
  return GradedRing(sys.cone(), [xs, ss](const IntVec& l) { return toric::sections(*xs, ss->eval(to_ratvec(l))).monomials; },
                    x.dim());
}

inline Element multiply(const GradedRing& r, const Element& a, const Element& b) {
  if (!r.contains(a)) throw Error(ErrorKind::Domain, "multiply: first factor is not in its declared piece");
  if (!r.contains(b)) throw Error(ErrorKind::Domain, "multiply: second factor is not in its declared piece");
  Element c = a + b;
  if (!r.contains(c)) throw Error(ErrorKind::Check, "multiply: product left the ring");
  return c;
}

/// Veronese subring on the finite-index sublattice spanned by the columns of L.
inline GradedRing veronese(const GradedRing& r, const RatMat& L) {
  if (L.size() != r.rank() || L.front().size() != r.rank())
    throw Error(ErrorKind::Dimension, "veronese: lattice matrix must be square of size rank");
  if (linalg::determinant(L) == 0) throw Error(ErrorKind::Domain, "veronese: sublattice is not of finite index");
  for (const auto& row : L)
    if (!is_integral(row)) throw Error(ErrorKind::Domain, "veronese: sublattice must be integral");
  auto ls = r.lattices();
  ls.push_back(L);
  return r.with(r.cone(), std::move(ls));
}

// ---------------------------------------------------------------------------
// Generation checks

struct GenerationReport {
  int generated_up_to = 0;
  std::optional<IntVec> first_failure;     // degree of the first bad piece
  std::optional<IntVec> missing_monomial;  // a monomial of R not reached
  std::optional<Element> foreign_element;  // a product outside R (unsound G)
  bool ok() const { return !first_failure && !foreign_element; }
};

/// Multiplicative closure of G, computed degreewise over the ambient lattice
/// (generators may sit outside the grading monoid).
class Closure {
 public:
  Closure(GeneratorSet g, RatVec tau) : g_(std::move(g)), tau_(std::move(tau)) {
    for (const auto& e : g_)
      if (dot(tau_, e.deg) <= 0) throw Error(ErrorKind::Precondition, "total degree must be positive on generator degrees");
  }

  const std::set<IntVec>& at(const IntVec& lambda) {
    auto it = memo_.find(lambda);
    if (it != memo_.end()) return it->second;
    std::set<IntVec> out;
    Rat t = dot(tau_, lambda);
    if (t == 0 && std::all_of(lambda.begin(), lambda.end(), [](long v) { return v == 0; })) {
      std::size_t md = g_.empty() ? 0 : g_.front().mono.size();
      out.insert(IntVec(md, 0));
    } else if (t > 0) {
      for (const auto& g : g_) {
        IntVec rest = lambda;
        for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= g.deg[i];
        for (const auto& m : at(rest)) {
          IntVec s = m;
          for (std::size_t i = 0; i < s.size(); ++i) s[i] += g.mono[i];
          out.insert(std::move(s));
        }
      }
    }
    return memo_.emplace(lambda, std::move(out)).first->second;
  }

 private:
  GeneratorSet g_;
  RatVec tau_;
  std::map<IntVec, std::set<IntVec>> memo_;
};

inline RatVec total_degree(std::size_t r) { return RatVec(r, Rat(1)); }

/// Compares closure(G) with R on every lambda of the monoid with
/// tau(lambda) <= bound; the first failure is the least in (tau, lex) order.
inline GenerationReport verify_generation(const GradedRing& r, const GeneratorSet& g, int bound,
                                          std::optional<RatVec> tau = std::nullopt) {
  if (bound < 1) throw Error(ErrorKind::Domain, "verify_generation: bound must be >= 1");
  RatVec t = tau ? *tau : total_degree(r.rank());
  GenerationReport rep;
  for (const auto& e : g)
    if (r.in_monoid(e.deg) && !r.contains(e)) {
      rep.foreign_element = e;
      return rep;
    }
  auto lambdas = cone::lattice_points(r.cone(), t, Rat(bound));
  std::vector<IntVec> ls;
  for (const auto& l : lambdas) {
    IntVec li = to_intvec(l);
    if (r.in_monoid(li)) ls.push_back(li);
  }
  std::stable_sort(ls.begin(), ls.end(), [&](const IntVec& a, const IntVec& b) {
    Rat ta = dot(t, a), tb = dot(t, b);
    return ta < tb || (ta == tb && a < b);
  });
  parallel_for(ls.size(), [&](std::size_t i) { r.piece(ls[i]); });
  Closure cl(g, t);
  for (const auto& l : ls) {
    const auto& want = r.piece(l);
    const auto& have = cl.at(l);
    for (const auto& m : want)
      if (!have.count(m)) {
        rep.first_failure = l;
        rep.missing_monomial = m;
        break;
      }
    if (!rep.first_failure)
      for (const auto& m : have)
        if (!std::binary_search(want.begin(), want.end(), m)) {
          rep.foreign_element = Element{l, m};
          break;
        }
    if (!rep.ok()) {
      rep.generated_up_to = static_cast<int>(ceil_rat(dot(t, l)).convert_to<long>()) - 1;
      return rep;
    }
  }
  rep.generated_up_to = bound;
  return rep;
}

/// Every element of R with tau <= bound: a (wasteful but valid) generating
/// set in low degrees.
inline GeneratorSet all_elements(const GradedRing& r, int bound, std::optional<RatVec> tau = std::nullopt) {
  RatVec t = tau ? *tau : total_degree(r.rank());
  GeneratorSet out;
  for (const auto& l : cone::lattice_points(r.cone(), t, Rat(bound))) {
    IntVec li = to_intvec(l);
    if (dot(t, li) <= 0 || !r.in_monoid(li)) continue;
    for (const auto& m : r.piece(li)) out.push_back({li, m});
  }
  return out;
}

/// Drops generators that are products of others. Products have strictly
/// larger tau, so one pass in tau order suffices.
inline GeneratorSet minimize_generators(const GeneratorSet& g, const RatVec& tau) {
  GeneratorSet sorted(g.begin(), g.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const Element& a, const Element& b) { return dot(tau, a.deg) < dot(tau, b.deg); });
  GeneratorSet kept;
  std::size_t i = 0;
  while (i < sorted.size()) {
    Rat level = dot(tau, sorted[i].deg);
    Closure cl(kept, tau);
    GeneratorSet fresh;
    for (; i < sorted.size() && dot(tau, sorted[i].deg) == level; ++i)
      if (!cl.at(sorted[i].deg).count(sorted[i].mono)) fresh.push_back(sorted[i]);
    kept.insert(kept.end(), fresh.begin(), fresh.end());
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// ---------------------------------------------------------------------------
// Inflation to a subcone

/// Hilbert basis of { x in N^k : c . x = 0 } by Contejean-Devie completion.
inline std::vector<IntVec> single_equation_basis(const IntVec& c) {
  const std::size_t k = c.size();
  std::vector<IntVec> basis, frontier;
  for (std::size_t i = 0; i < k; ++i) {
    IntVec e(k, 0);
    e[i] = 1;
    frontier.push_back(e);
  }
  auto dominated = [&](const IntVec& x) {
    for (const auto& b : basis) {
      bool ge = true;
      for (std::size_t i = 0; i < k && ge; ++i) ge = x[i] >= b[i];
      if (ge) return true;
    }
    return false;
  };
  while (!frontier.empty()) {
    std::vector<IntVec> next;
    std::set<IntVec> seen;
    for (const auto& x : frontier) {
      if (dot(c, x) == 0 && !dominated(x)) basis.push_back(x);
    }
    for (const auto& x : frontier) {
      long v = dot(c, x);
      if (v == 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (v * c[j] >= 0) continue;
        IntVec y = x;
        ++y[j];
        if (dominated(y) || !seen.insert(y).second) continue;
        next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

/// Generators of the subring over { f >= 0 }: products g^a with a running
/// over the Hilbert basis of { a in N^s : sum a_i f(deg g_i) >= 0 }.
inline GeneratorSet cut_by_halfspace(const GeneratorSet& g, const RatVec& f) {
  RatVec ff = primitive(f);
  IntVec w;
  bool all_nonneg = true;
  for (const auto& e : g) {
    long v = numer(dot(ff, e.deg)).convert_to<long>();
    w.push_back(v);
    if (v < 0) all_nonneg = false;
  }
  if (all_nonneg) return g;
  IntVec c = w;
  c.push_back(-1);  // slack: w . a - t = 0
  std::set<Element> out;
  for (const auto& h : single_equation_basis(c)) {
    if (std::all_of(h.begin(), h.end() - 1, [](long v) { return v == 0; })) continue;
    Element e{IntVec(g.front().deg.size(), 0), IntVec(g.front().mono.size(), 0)};
    for (std::size_t i = 0; i < g.size(); ++i)
      if (h[i]) e = e + scale(g[i], h[i]);
    out.insert(e);
  }
  return {out.begin(), out.end()};
}

/// Generators for sum over lambda in c of R'_lambda, given generators of R'.
inline GeneratorSet inflate(const GradedRing& parent, const GeneratorSet& g, const cone::Cone& c) {
  for (const auto& v : c.generators())
    if (!parent.cone().contains_h(v)) throw Error(ErrorKind::Domain, "inflate: subcone is not inside the parent cone");
  if (g.empty()) return g;
  GeneratorSet cur = g;
  for (const auto& f : c.facets()) cur = cut_by_halfspace(cur, f);
  for (const auto& e : c.equations()) {
    cur = cut_by_halfspace(cur, e);
    cur = cut_by_halfspace(cur, Rat(-1) * e);
  }
  return cur;
}

/// Monomial algebra generated by g, graded over cone c. Pieces are the
/// closure of g; intended as the abstract R' of inflation tests.
inline GradedRing monomial_algebra(const cone::Cone& c, const GeneratorSet& g, RatVec tau) {
  auto cl = std::make_shared<Closure>(g, tau);
  auto mu = std::make_shared<std::mutex>();
  std::size_t md = g.empty() ? 0 : g.front().mono.size();
  return GradedRing(c, [cl, mu](const IntVec& l) {
    std::lock_guard<std::mutex> lock(*mu);
    const auto& s = cl->at(l);
    return std::vector<IntVec>(s.begin(), s.end());
  }, md);
}

// ---------------------------------------------------------------------------
// Injectivization

struct Injectivized {
  std::vector<std::string> primes;     // coordinates of divisor space
  cone::Cone image;                    // D(C)
  RatMat lattice_map;                  // rows: primes, columns: lambda coordinates
  CharacteristicSystem pushed;         // identity system on the image cone
  bool degenerate = false;             // some generator maps to 0, or the image is not pointed
  std::string note;

  RatVec map(const RatVec& lambda) const { return linalg::mat_vec(lattice_map, lambda); }
};

/// Pushes a linear system forward to its image cone in divisor space.
inline Injectivized injectivize(const CharacteristicSystem& sys) {
  if (sys.pieces().size() != 1)
    throw Error(ErrorKind::Precondition, "injectivize: system is not linear on the given piece");
  const auto& p = sys.pieces().front();
  Injectivized out{};
  for (auto& [k, row] : p.map)
    if (!is_zero(row)) out.primes.push_back(k);
  if (out.primes.empty()) {
    out.degenerate = true;
    out.note = "D vanishes identically; degenerate ray";
    out.primes.push_back(p.map.empty() ? std::string("0") : p.map.begin()->first);
  }
  for (const auto& k : out.primes) {
    auto it = p.map.find(k);
    out.lattice_map.push_back(it == p.map.end() ? RatVec(sys.rank(), Rat(0)) : it->second);
  }
  std::vector<RatVec> imgs;
  for (const auto& g : sys.cone().generators()) {
    RatVec v = out.map(g);
    if (is_zero(v)) {
      out.degenerate = true;
      out.note = "a generator of the cone maps to 0";
    }
    imgs.push_back(v);
  }
  out.image = cone::Cone(out.primes.size(), imgs);
  if (!out.image.is_pointed()) {
    out.degenerate = true;
    out.note = "image cone is not pointed";
  }
  std::map<std::string, RatVec> idm;
  for (std::size_t i = 0; i < out.primes.size(); ++i) {
    RatVec e(out.primes.size(), Rat(0));
    e[i] = 1;
    idm.emplace(out.primes[i], e);
  }
  out.pushed = CharacteristicSystem::linear(out.image, idm, {}, sys.K(), sys.A(), sys.boundary());
  return out;
}

}  // namespace adjoint::ring
