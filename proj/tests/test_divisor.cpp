#include <gtest/gtest.h>

#include <random>

#include "adjoint/affine.hpp"
#include "adjoint/system.hpp"

using namespace adjoint;
using cone::Cone;

namespace {

Divisor div(std::map<std::string, Rat> m) { return Divisor(m); }

Cone make(std::vector<IntVec> g) {
  std::vector<RatVec> r;
  for (auto& v : g) r.push_back(to_ratvec(v));
  return Cone(r.front().size(), r);
}

}  // namespace

TEST(Divisor, WedgeExamples) {
  EXPECT_EQ(wedge(div({{"P", 2}, {"Q", 3}}), div({{"P", 1}, {"Q", 5}})), div({{"P", 1}, {"Q", 3}}));
  auto d = div({{"P", Rat(1, 2)}, {"Q", -3}});
  EXPECT_EQ(wedge(d, d), d);
  EXPECT_TRUE(wedge(Divisor::prime("P"), Divisor::prime("Q")).is_zero());
}

TEST(Divisor, WedgeLaws) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> u(-6, 6);
  auto rnd = [&] { return div({{"P", Rat(u(rng), 3)}, {"Q", Rat(u(rng), 2)}, {"R", u(rng)}}); };
  for (int i = 0; i < 200; ++i) {
    auto a = rnd(), b = rnd(), c = rnd();
    EXPECT_EQ(wedge(a, b), wedge(b, a));
    EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
    EXPECT_TRUE(wedge(a, b) <= a);
    EXPECT_TRUE(wedge(a, b) <= b);
  }
}

TEST(Divisor, Floor) {
  EXPECT_EQ(floor_divisor(div({{"P", Rat(3, 2)}, {"Q", Rat(-1, 2)}})), div({{"P", 1}, {"Q", -1}}));
  EXPECT_TRUE(floor_divisor(div({{"P", Rat(9, 10)}})).is_zero());
}

TEST(Divisor, SpacesDoNotMix) {
  auto x = Divisor::prime("D1", "X");
  auto s = Divisor::prime("S.1", "S");
  EXPECT_THROW(x + s, Error);
  EXPECT_NO_THROW(x + Divisor::prime("D2"));
}

TEST(System, EvalAndFaceAgreement) {
  // M(l) = min(l1, l2) E on the positive quadrant
  auto c = Cone::orthant(2);
  LinearPiece p1{make({{1, 0}, {1, 1}}), {{"E", to_ratvec({0, 1})}}, {}};
  LinearPiece p2{make({{1, 1}, {0, 1}}), {{"E", to_ratvec({1, 0})}}, {}};
  CharacteristicSystem sys(c, {p1, p2});
  EXPECT_EQ(sys.eval(to_ratvec({3, 1}))["E"], 1);
  EXPECT_EQ(sys.eval(to_ratvec({2, 2}))["E"], 2);
  EXPECT_THROW(sys.eval(to_ratvec({-1, 1})), Error);
  auto shape = check_shape(sys);
  EXPECT_TRUE(shape.concave);
  EXPECT_TRUE(shape.superadditive_mob);

  LinearPiece q1{p1.cone, {{"E", to_ratvec({1, 0})}}, {}};
  LinearPiece q2{p2.cone, {{"E", to_ratvec({0, 1})}}, {}};
  auto bad = check_shape(CharacteristicSystem(c, {q1, q2}));
  EXPECT_FALSE(bad.concave);
  EXPECT_FALSE(bad.superadditive_mob);

  LinearPiece r2{p2.cone, {{"E", to_ratvec({2, 0})}}, {}};
  EXPECT_THROW(CharacteristicSystem(c, {p1, r2}), Error);
  EXPECT_THROW(CharacteristicSystem(c, {p1}), Error);
}

TEST(System, ClassifyAndDelta) {
  // D(l) = l1 (K + A + B1/2 + B2/3) on a ray
  auto c = make({{1}});
  Divisor K = div({{"K", 1}}), A = div({{"A", 1}});
  auto sys = CharacteristicSystem::linear(
      c, {{"K", {Rat(1)}}, {"A", {Rat(1)}}, {"B1", {Rat(1, 2)}}, {"B2", {Rat(1, 3)}}}, {Rat(1)}, K, A, {"B1", "B2"});
  auto cl = classify(sys);
  EXPECT_TRUE(cl.is_klt);
  EXPECT_TRUE(cl.is_dlt);
  EXPECT_TRUE(cl.is_big);
  EXPECT_FALSE(cl.strictly_dlt_with);
  ASSERT_TRUE(cl.delta_margin);
  EXPECT_EQ(*cl.delta_margin, Rat(1, 2));

  auto sdlt = CharacteristicSystem::linear(c, {{"K", {Rat(1)}}, {"A", {Rat(1)}}, {"S", {Rat(1)}}, {"B2", {Rat(9, 10)}}},
                                           {Rat(1)}, K, A, {"S", "B2"});
  auto cl2 = classify(sdlt);
  EXPECT_FALSE(cl2.is_klt);
  EXPECT_TRUE(cl2.is_dlt);
  EXPECT_EQ(cl2.strictly_dlt_with, std::optional<std::string>("S"));
  EXPECT_THROW(delta_margin(sdlt), Error);

  auto notdlt = CharacteristicSystem::linear(c, {{"K", {Rat(1)}}, {"A", {Rat(1)}}, {"B1", {Rat(6, 5)}}}, {Rat(1)}, K,
                                             A, {"B1"});
  EXPECT_FALSE(classify(notdlt).is_dlt);

  auto zero = CharacteristicSystem::linear(c, {{"K", {Rat(1)}}, {"A", {Rat(1)}}}, {Rat(1)}, K, A, {"B1"});
  EXPECT_EQ(delta_margin(zero), 1);
}

TEST(System, ClassificationStableUnderRefinement) {
  auto c = make({{1, 0}, {0, 1}});
  Divisor K = div({{"K", 1}});
  std::map<std::string, RatVec> m{{"K", to_ratvec({1, 1})}, {"B1", {Rat(1, 2), Rat(0)}}, {"B2", {Rat(0), Rat(1, 3)}}};
  auto sys = CharacteristicSystem::linear(c, m, to_ratvec({1, 1}), K, {}, {"B1", "B2"});
  auto fine = cone::triangulate(c, {to_ratvec({1, 1}), to_ratvec({2, 1})});
  auto sys2 = sys.refine(fine.pieces);
  auto a = classify(sys), b = classify(sys2);
  EXPECT_EQ(a.is_klt, b.is_klt);
  EXPECT_EQ(a.is_dlt, b.is_dlt);
  EXPECT_EQ(a.delta_margin, b.delta_margin);
}

TEST(AffineHull, Examples) {
  auto p = rational_affine_hull(QuadVec::from_rational({Rat(3, 7), Rat(2, 7)}));
  EXPECT_EQ(p.dim(), 0u);
  auto l = rational_affine_hull(QuadVec::from_parts(2, {Rat(0), Rat(1)}, {Rat(1, 2), Rat(-1, 2)}));
  EXPECT_EQ(l.dim(), 1u);
  EXPECT_TRUE(l.contains(RatVec{Rat(1, 3), Rat(2, 3)}));
  EXPECT_FALSE(l.contains(RatVec{Rat(1, 3), Rat(1, 3)}));
  auto x = QuadVec::from_parts(2, {Rat(0), Rat(0)}, {Rat(1, 2), Rat(1, 3)});
  auto m = rational_affine_hull(x);
  EXPECT_EQ(m.dim(), 1u);
  EXPECT_TRUE(m.contains(x));
  EXPECT_TRUE(m.contains(RatVec{Rat(3), Rat(2)}));
}
