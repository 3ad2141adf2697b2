#include <gtest/gtest.h>

#include <random>

#include "adjoint/cone.hpp"

using namespace adjoint;
using cone::Cone;

namespace {

Cone make(std::vector<IntVec> g) {
  std::vector<RatVec> r;
  for (auto& v : g) r.push_back(to_ratvec(v));
  return Cone(r.front().size(), r);
}

std::set<RatVec> as_set(const std::vector<RatVec>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Cone, ContainsPoint) {
  auto c = make({{1, 0}, {1, 2}});
  EXPECT_TRUE(c.contains(to_ratvec({2, 1})));
  EXPECT_FALSE(c.contains(to_ratvec({0, 1})));
  EXPECT_TRUE(c.contains_h(to_ratvec({2, 1})));
  EXPECT_EQ(c.facets().size(), 2u);
}

TEST(Cone, HilbertBasisSmall) {
  EXPECT_EQ(as_set(cone::hilbert_basis(make({{1, 0}, {1, 2}}))),
            as_set({to_ratvec({1, 0}), to_ratvec({1, 1}), to_ratvec({1, 2})}));
  EXPECT_EQ(as_set(cone::hilbert_basis(make({{0, 1}, {3, 1}}))),
            as_set({to_ratvec({0, 1}), to_ratvec({1, 1}), to_ratvec({2, 1}), to_ratvec({3, 1})}));
}

TEST(Cone, IntersectHalfspace) {
  auto c = cone::intersect_halfspace(Cone::orthant(2), to_ratvec({1, -1}));
  EXPECT_EQ(as_set(c.generators()), as_set({to_ratvec({1, 0}), to_ratvec({1, 1})}));
}

TEST(Cone, Pointedness) {
  EXPECT_TRUE(make({{1, 0}, {0, 1}}).is_pointed());
  EXPECT_FALSE(make({{1, 0}, {-1, 0}, {0, 1}}).is_pointed());
  EXPECT_THROW(cone::hilbert_basis(make({{1, 0}, {-1, 0}})), Error);
}

TEST(Cone, DimensionLimit) {
  auto c = Cone::orthant(7);
  EXPECT_THROW(cone::hilbert_basis(c), Error);
  EXPECT_EQ(cone::hilbert_basis(c, 7).size(), 7u);
}

TEST(Cone, TriangulationCoversAndRespectsRays) {
  auto c = make({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, -1}});
  ASSERT_TRUE(c.is_pointed());
  RatVec extra = to_ratvec({1, 1, 1});
  auto t = cone::triangulate(c, {extra});
  for (auto& p : t.pieces) EXPECT_TRUE(cone::is_simplicial(p));
  EXPECT_TRUE(cone::verify_cover(c, t.pieces).covered);
  bool has = false;
  for (auto& p : t.pieces)
    for (auto& g : p.generators()) has |= g == extra;
  EXPECT_TRUE(has);
  // generic points lie in exactly one piece
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> u(1, 1000);
  for (int i = 0; i < 200; ++i) {
    RatVec x(3, Rat(0));
    for (auto& g : c.generators()) x = x + Rat(u(rng), 997) * g;
    int n = 0;
    for (auto& p : t.pieces) n += p.contains_h(x);
    EXPECT_EQ(n, 1);
  }
}

TEST(Cone, TriangulationRejectsOutsideRay) {
  auto c = make({{1, 0}, {1, 2}});
  EXPECT_THROW(cone::triangulate(c, {to_ratvec({0, 1})}), Error);
}

TEST(Cone, CoverDetectsGap) {
  auto c = Cone::orthant(2);
  auto a = make({{1, 0}, {1, 1}});
  auto b = make({{1, 2}, {0, 1}});
  auto rep = cone::verify_cover(c, {a, b});
  EXPECT_FALSE(rep.covered);
  ASSERT_TRUE(rep.witness);
  EXPECT_FALSE(a.contains_h(*rep.witness));
  EXPECT_FALSE(b.contains_h(*rep.witness));
  EXPECT_TRUE(cone::verify_cover(c, {a, make({{1, 1}, {0, 1}})}).covered);
}
