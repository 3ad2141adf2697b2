#include <gtest/gtest.h>

#include <random>

#include "adjoint/graded_ring.hpp"

using namespace adjoint;
using namespace adjoint::ring;
using cone::Cone;

namespace {

Cone make(std::vector<IntVec> g) {
  std::vector<RatVec> r;
  for (auto& v : g) r.push_back(to_ratvec(v));
  return Cone(r.front().size(), r);
}

struct P2H {
  toric::ToricVariety x = toric::projective_space(2);
  CharacteristicSystem sys = CharacteristicSystem::linear(make({{1}}), {{"D3", {Rat(1)}}});
  GradedRing r = section_ring(x, sys);
};

}  // namespace

TEST(GradedRing, P2GeneratedInDegreeOne) {
  P2H p;
  GeneratorSet g;
  for (auto& m : p.r.piece({1})) g.push_back({{1}, m});
  ASSERT_EQ(g.size(), 3u);
  auto rep = verify_generation(p.r, g, 6);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.generated_up_to, 6);
  g.pop_back();
  auto bad = verify_generation(p.r, g, 6);
  ASSERT_TRUE(bad.first_failure);
  EXPECT_EQ(*bad.first_failure, IntVec{1});
  ASSERT_TRUE(bad.missing_monomial);
  EXPECT_EQ(bad.generated_up_to, 0);
}

TEST(GradedRing, Multiply) {
  P2H p;
  auto a = Element{{1}, p.r.piece({1})[0]}, b = Element{{1}, p.r.piece({1})[2]};
  auto c = multiply(p.r, a, b);
  EXPECT_EQ(c.deg, IntVec{2});
  EXPECT_TRUE(p.r.contains(c));
  Element unit{{0}, {0, 0}};
  EXPECT_EQ(multiply(p.r, a, unit), a);
  EXPECT_THROW(multiply(p.r, Element{{1}, {5, 5}}, a), Error);
}

TEST(GradedRing, MultiplicationRespectsMobileParts) {
  // F1 with the rank-2 system (l1, l2) -> l1 E + l2 (E + F)
  auto f1 = toric::hirzebruch(1);
  auto sys = CharacteristicSystem::linear(Cone::orthant(2), {{"D2", to_ratvec({1, 1})}, {"D1", to_ratvec({0, 1})}});
  auto r = section_ring(f1, sys);
  for (auto& a : r.piece({1, 1}))
    for (auto& b : r.piece({0, 2})) {
      Element c = multiply(r, {{1, 1}, a}, {{0, 2}, b});
      auto mob = toric::fix_mob(f1, sys.eval(to_ratvec({1, 3}))).mob;
      // every product is a section of D(l1 + l2) whose divisor dominates Fix
      auto fix = sys.eval(to_ratvec({1, 3})) - mob;
      for (std::size_t i = 0; i < f1.num_rays(); ++i)
        EXPECT_GE(Rat(dot(c.mono, f1.rays()[i])) + f1.coeff_vector(sys.eval(to_ratvec({1, 3})))[i],
                  f1.coeff_vector(fix)[i]);
    }
}

TEST(GradedRing, VeroneseEvenDegrees) {
  P2H p;
  auto v = veronese(p.r, RatMat{{Rat(2)}});
  EXPECT_TRUE(v.piece({1}).empty());
  EXPECT_EQ(v.piece({2}).size(), 6u);
  GeneratorSet g;
  for (auto& m : v.piece({2})) g.push_back({{2}, m});
  EXPECT_TRUE(verify_generation(v, g, 8).ok());
  auto id = veronese(p.r, RatMat{{Rat(1)}});
  EXPECT_EQ(id.piece({3}), p.r.piece({3}));
  EXPECT_THROW(veronese(p.r, RatMat{{Rat(0)}}), Error);
}

TEST(GradedRing, VeroneseComposition) {
  auto f1 = toric::hirzebruch(1);
  auto sys = CharacteristicSystem::linear(Cone::orthant(2), {{"D2", to_ratvec({1, 0})}, {"D4", to_ratvec({0, 1})}});
  auto r = section_ring(f1, sys);
  RatMat l1{{Rat(2), Rat(0)}, {Rat(0), Rat(1)}}, l2{{Rat(1), Rat(0)}, {Rat(0), Rat(3)}},
      l12{{Rat(2), Rat(0)}, {Rat(0), Rat(3)}};
  auto a = veronese(veronese(r, l1), l2), b = veronese(r, l12);
  for (long i = 0; i <= 6; ++i)
    for (long j = 0; j <= 6; ++j) EXPECT_EQ(a.in_monoid({i, j}), b.in_monoid({i, j}));
  // index-2 sublattice {l1 + l2 even}: recomputed generators pass to degree 6
  RatMat idx2{{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}};
  auto v = veronese(r, idx2);
  auto g = all_elements(v, 4);
  EXPECT_TRUE(verify_generation(v, g, 6).ok());
}

TEST(GradedRing, SingleEquationBasisNeedsTriples) {
  auto hb = single_equation_basis({3, -2, -2});
  EXPECT_NE(std::find(hb.begin(), hb.end(), IntVec{2, 1, 2}), hb.end());
  for (auto& h : hb) EXPECT_EQ(dot(IntVec{3, -2, -2}, h), 0);
}

TEST(GradedRing, InflatePolynomialRing) {
  GeneratorSet g{{{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}};
  auto rp = monomial_algebra(Cone::orthant(2), g, total_degree(2));
  auto c = make({{1, 0}, {1, 1}});
  auto out = inflate(rp, g, c);
  std::set<IntVec> degs;
  for (auto& e : out) degs.insert(e.deg);
  EXPECT_EQ(degs, (std::set<IntVec>{{1, 0}, {1, 1}}));
  EXPECT_TRUE(verify_generation(rp.with(c, {}), out, 8).ok());
  EXPECT_EQ(inflate(rp, g, Cone::orthant(2)), g);
  EXPECT_THROW(inflate(rp, g, make({{1, 0}, {-1, 1}})), Error);
}

TEST(GradedRing, InflateRankOneCutMatchesWeightEnumeration) {
  // C^x acting with weights w: invariants of weight >= 0, by brute force.
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> u(-3, 3);
  for (int t = 0; t < 10; ++t) {
    IntVec w{u(rng), u(rng), u(rng)};
    GeneratorSet g;
    for (int i = 0; i < 3; ++i) {
      IntVec e(3, 0);
      e[i] = 1;
      g.push_back({{1, w[i]}, e});
    }
    auto parent = make({{1, -3}, {1, 3}});
    auto rp = monomial_algebra(parent, g, RatVec{Rat(1), Rat(0)});
    auto c = cone::intersect_halfspace(parent, to_ratvec({0, 1}));
    auto out = inflate(rp, g, c);
    Closure cl(out, RatVec{Rat(1), Rat(0)});
    for (long a = 0; a <= 8; ++a)
      for (long b = 0; a + b <= 8; ++b)
        for (long d = 0; a + b + d <= 8; ++d) {
          long wt = a * w[0] + b * w[1] + d * w[2];
          if (wt < 0) continue;
          EXPECT_TRUE(cl.at({a + b + d, wt}).count({a, b, d}));
        }
  }
}

TEST(GradedRing, InjectivizeCollapsesEqualColumns) {
  auto p2 = toric::projective_space(2);
  auto sys = CharacteristicSystem::linear(Cone::orthant(2), {{"D3", to_ratvec({1, 1})}});
  auto inj = injectivize(sys);
  EXPECT_EQ(inj.image.dim(), 1u);
  EXPECT_FALSE(inj.degenerate);
  auto r = section_ring(p2, sys);
  auto rb = section_ring(p2, inj.pushed);
  for (long a = 0; a <= 5; ++a)
    for (long b = 0; a + b <= 5; ++b) {
      IntVec img = to_intvec(inj.map(to_ratvec({a, b})));
      EXPECT_EQ(img, IntVec{a + b});
      EXPECT_EQ(r.piece({a, b}).size(), rb.piece(img).size());
    }
  auto zero = injectivize(CharacteristicSystem::linear(Cone::orthant(1), {{"D3", {Rat(0)}}}));
  EXPECT_TRUE(zero.degenerate);
}
