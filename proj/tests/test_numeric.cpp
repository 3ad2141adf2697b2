#include <gtest/gtest.h>

#include "adjoint/linalg.hpp"
#include "adjoint/lp.hpp"
#include "adjoint/quadratic.hpp"

using namespace adjoint;

TEST(Rational, ParsesCanonicalForms) {
  EXPECT_EQ(parse_rat("3/6"), Rat(1, 2));
  EXPECT_EQ(parse_rat("-4"), Rat(-4));
  EXPECT_EQ(to_string(parse_rat("10/4")), "5/2");
  EXPECT_THROW(parse_rat("0.5"), Error);
  EXPECT_THROW(parse_rat("1/0"), Error);
  EXPECT_THROW(parse_rat("1e3"), Error);
}

TEST(Rational, FloorAndCeil) {
  EXPECT_EQ(floor_rat(Rat(-1, 2)), -1);
  EXPECT_EQ(ceil_rat(Rat(-1, 2)), 0);
  EXPECT_EQ(floor_rat(Rat(7, 3)), 2);
}

TEST(Quadratic, ExactSignAndFloor) {
  QuadNum s2 = sqrt_of(2);
  EXPECT_TRUE(s2 * s2 == QuadNum(2));
  EXPECT_GT(s2, QuadNum(Rat(141, 100)));
  EXPECT_LT(s2, QuadNum(Rat(142, 100)));
  EXPECT_EQ(floor_quad(s2 * QuadNum(10)), 14);
  EXPECT_EQ(floor_quad(-s2), -2);
  QuadNum x = QuadNum(Rat(3), Rat(-2), 2);  // 3 - 2 sqrt 2 > 0
  EXPECT_EQ(x.sign(), 1);
  EXPECT_TRUE((QuadNum(1) / x) == QuadNum(Rat(3), Rat(2), 2));
  EXPECT_THROW(QuadNum(Rat(0), Rat(1), 4), Error);
}

TEST(Linalg, NullspaceAndInverse) {
  RatMat a{{1, 2, 3}, {2, 4, 6}};
  auto ns = linalg::nullspace(a, 3);
  EXPECT_EQ(ns.size(), 2u);
  for (auto& v : ns) EXPECT_EQ(dot(a[0], v), 0);
  RatMat b{{2, 1}, {1, 1}};
  auto inv = linalg::inverse(b);
  ASSERT_TRUE(inv);
  EXPECT_EQ((*inv)[0][0], 1);
  EXPECT_EQ((*inv)[0][1], -1);
  EXPECT_EQ(linalg::determinant(b), 1);
}

TEST(Lp, OptimalInfeasibleUnbounded) {
  lp::Problem<Rat> p(2);
  p.all_nonneg();
  p.add({1, 1}, lp::Relation::LessEq, 4);
  p.add({1, 3}, lp::Relation::LessEq, 6);
  p.objective = {3, 5};
  auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_EQ(r.value, 14);

  lp::Problem<Rat> q(1);
  q.add({1}, lp::Relation::GreaterEq, 2);
  q.add({1}, lp::Relation::LessEq, 1);
  EXPECT_EQ(lp::solve(q).status, lp::Status::Infeasible);

  lp::Problem<Rat> u(1);
  u.add({1}, lp::Relation::GreaterEq, -3);
  u.objective = {1};
  EXPECT_EQ(lp::solve(u).status, lp::Status::Unbounded);
  u.maximize = false;
  EXPECT_EQ(lp::solve(u).value, -3);
}

TEST(Lp, WorksOverQuadraticField) {
  lp::Problem<QuadNum> p(1);
  p.all_nonneg();
  p.add({QuadNum(1)}, lp::Relation::LessEq, sqrt_of(2));
  p.objective = {QuadNum(1)};
  auto r = lp::solve(p);
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_TRUE(r.value == sqrt_of(2));
}
