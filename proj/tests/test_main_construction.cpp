#include <gtest/gtest.h>

#include <random>

#include "adjoint/main_construction.hpp"

using namespace adjoint;
using namespace adjoint::mc;
using cone::Cone;

namespace {

Cone make(std::vector<IntVec> g) {
  std::vector<RatVec> r;
  for (auto& v : g) r.push_back(to_ratvec(v));
  return Cone(r.front().size(), r);
}

toric::ToricVariety p1() { return toric::ToricVariety(1, {{1}, {-1}}, {{0}, {1}}); }

Divisor div(const toric::ToricVariety& x, std::map<std::string, Rat> m) { return Divisor(m, x.space()); }

// brute-force least N for the degree condition, scanning tau <= limit
long brute_N(const Cone& parent, const Cone& piece, const RatVec& e, long limit) {
  long n = -1;
  for (const auto& m : cone::lattice_points(piece, ring::total_degree(2), Rat(limit)))
    if (!parent.contains(m - e)) n = std::max(n, floor_rat(sum(m)).convert_to<long>());
  return n;
}

// D(l) = l1 D1 + l2 D2 on P^1, r = k (l1 + l2)
CharacteristicSystem p1_system(const toric::ToricVariety& x, Rat k) {
  return CharacteristicSystem::linear(Cone::orthant(2), {{"D1", to_ratvec({1, 0})}, {"D2", to_ratvec({0, 1})}},
                                      RatVec{k, k}, x.canonical(), div(x, {{"D1", 1}, {"D2", 1}}), {"D1", "D2"});
}

}  // namespace

TEST(Chop, TwoBackFacesAtOrigin) {
  auto x = p1();
  auto inst = make_chop_instance(x, x.canonical(), div(x, {{"D1", 1}, {"D2", 1}}), {Rat(0), Rat(0)}, {"D1", "D2"});
  auto chop = chop_backfaces(inst);
  ASSERT_EQ(chop.pieces.size(), 2u);
  EXPECT_EQ(chop.pieces[0].face, (std::vector<RatVec>{to_ratvec({1, 0}), to_ratvec({1, 1})}));
  EXPECT_EQ(chop.pieces[1].face, (std::vector<RatVec>{to_ratvec({0, 1}), to_ratvec({1, 1})}));
  EXPECT_EQ(chop.pieces[0].strictly_dlt_with, "D1");
  EXPECT_EQ(chop.pieces[1].strictly_dlt_with, "D2");
  EXPECT_TRUE(cone::verify_cover(chop.parent, {chop.pieces[0].cone, chop.pieces[1].cone}).covered);
  for (const auto& h : cone::hilbert_basis(chop.parent))
    EXPECT_TRUE(chop.pieces[0].cone.contains(h) || chop.pieces[1].cone.contains(h));
}

TEST(Chop, DegenerateFace) {
  auto x = p1();
  auto inst = make_chop_instance(x, x.canonical(), div(x, {{"D1", 1}, {"D2", 1}}), {Rat(1), Rat(0)}, {"D1", "D2"});
  auto chop = chop_backfaces(inst);
  EXPECT_TRUE(chop.pieces[0].cone == chop.parent);
}

TEST(Chop, PositivityViolationCarriesWitness) {
  auto x = toric::projective_space(2);
  // K + A = -D1 + D2 ~ 0, so c + b has a negative coordinate at b = 0
  auto A = div(x, {{"D2", 2}, {"D3", 1}});
  auto inst = make_chop_instance(x, x.canonical(), A, {Rat(0), Rat(0)}, {"D1", "D2"});
  try {
    chop_backfaces(inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
    EXPECT_NE(std::string(e.what()).find("witness"), std::string::npos);
  }
}

TEST(DegreeBound, DiagonalPieceNeedsNoShift) {
  auto db = degree_bound(Cone::orthant(2), {{make({{1, 0}, {1, 1}}), to_ratvec({1, 0})}});
  EXPECT_EQ(db.N, 0);
  EXPECT_EQ(brute_N(Cone::orthant(2), make({{1, 0}, {1, 1}}), to_ratvec({1, 0}), 5), 0);
  ASSERT_TRUE(db.witness);
  EXPECT_EQ(*db.witness, (IntVec{0, 0}));
}

TEST(DegreeBound, TranslateInstanceMatchesExhaustiveSearch) {
  auto parent = make({{1, 0}, {1, 2}});
  auto piece = make({{1, 0}, {1, 1}});
  auto db = degree_bound(parent, {{piece, to_ratvec({1, 0})}});
  EXPECT_EQ(db.N, 2);
  EXPECT_EQ(db.N, brute_N(parent, piece, to_ratvec({1, 0}), db.N + 6));
  ASSERT_TRUE(db.witness);
  EXPECT_EQ(sum(to_ratvec(*db.witness)), Rat(2));
  EXPECT_FALSE(parent.contains(to_ratvec(*db.witness) - to_ratvec({1, 0})));
}

TEST(DegreeBound, EscapingPieceIsUnbounded) {
  try {
    degree_bound(Cone::orthant(2), {{make({{1, 0}, {1, -1}}), to_ratvec({1, 0})}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
  }
}

TEST(Assemble, P1AtOrigin) {
  auto x = p1();
  auto inst = make_chop_instance(x, x.canonical(), div(x, {{"D1", 1}, {"D2", 1}}), {Rat(0), Rat(0)}, {"D1", "D2"});
  auto chop = chop_backfaces(inst);
  auto nb = degree_bound(chop.parent, backface_directions(chop));
  std::vector<ring::GeneratorSet> rg;
  for (const auto& p : chop.pieces)
    rg.push_back(lifting::restricted_ring_generators(x, lifting::restricted_ring(x, p.cone, inst.rows(), inst.boundary[p.j])));
  auto as = assemble_generators(inst, chop, rg, nb.N);
  EXPECT_TRUE(as.ok()) << as.replay.failure;
  EXPECT_EQ(as.report.generated_up_to, nb.N + 10);
  EXPECT_GT(as.replay.checked, 0u);
}

TEST(Assemble, VanishingSectionDivisor) {
  auto x = toric::hirzebruch(1);
  auto inst = make_chop_instance(x, x.canonical(), Rat(-1) * x.canonical(), {Rat(0), Rat(0), Rat(0), Rat(0)},
                                 {"D1", "D2", "D3", "D4"});
  for (std::size_t j = 0; j < 4; ++j) {
    auto s = vanishing_section(inst, j);
    Divisor d = inst.divisor(to_ratvec(s.deg));
    Divisor zeros({}, "X");
    for (std::size_t i = 0; i < x.num_rays(); ++i) zeros.set(x.names()[i], d[x.names()[i]] + Rat(dot(s.mono, x.rays()[i])));
    EXPECT_EQ(zeros, x.prime(inst.boundary[j]));
  }
}

TEST(Cover, SingleRay) {
  auto x = p1();
  auto sys = CharacteristicSystem::linear(Cone::orthant(1), {{"D1", {Rat(1)}}}, {Rat(2)}, x.canonical(),
                                          div(x, {{"D1", 1}, {"D2", 1}}), {"D1"});
  auto cov = theoremA_cover(x, sys);
  EXPECT_EQ(cov.delta, Rat(1, 2));
  EXPECT_EQ(cov.instances.size(), 1u);
}

TEST(Cover, TwoGeneratorsDeltaThird) {
  auto x = p1();
  auto sys = p1_system(x, Rat(3, 2));
  auto cov = theoremA_cover(x, sys);
  EXPECT_EQ(cov.delta, Rat(1, 3));
  ASSERT_FALSE(cov.points.empty());
  std::vector<Cone> cs;
  for (const auto& inst : cov.instances) {
    cs.push_back(inst.cone);
    for (const auto& t : inst.b) EXPECT_GE(1 - t, cov.delta);
  }
  auto in_some = [&](const RatVec& v) {
    for (const auto& c : cs)
      if (c.contains(v)) return true;
    return false;
  };
  for (const auto& h : cone::hilbert_basis(cov.image)) EXPECT_TRUE(in_some(h));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> u(0, 997);
  for (int i = 0; i < 1000; ++i) {
    Rat t(u(rng), 997);
    RatVec w{t * Rat(2, 3), (1 - t) * Rat(2, 3)};
    EXPECT_TRUE(in_some(w));
  }
}

TEST(Cover, BoundaryCoefficientOneIsRejected) {
  auto x = p1();
  auto sys = p1_system(x, Rat(1));
  EXPECT_THROW(theoremA_cover(x, sys), Error);
}

TEST(Pipeline, P1) {
  auto x = p1();
  auto cert = run_pipeline(x, p1_system(x, Rat(2)));
  EXPECT_TRUE(cert.ok());
  EXPECT_LE(cert.G.size(), 4u);
  EXPECT_EQ(cert.report.generated_up_to, cert.N + 10);
}

TEST(Pipeline, F1) {
  auto x = toric::hirzebruch(1);
  auto sys = CharacteristicSystem::linear(Cone::orthant(2), {{"D2", to_ratvec({1, 0})}, {"D4", to_ratvec({0, 1})}},
                                          to_ratvec({2, 2}), x.canonical(), Rat(-1) * x.canonical(), {"D2", "D4"});
  auto cert = run_pipeline(x, sys);
  EXPECT_TRUE(cert.ok());
  EXPECT_EQ(cert.report.generated_up_to, cert.N + 10);
}

TEST(Pipeline, P2) {
  auto x = toric::projective_space(2);
  auto sys = CharacteristicSystem::linear(
      Cone::orthant(3), {{"D1", to_ratvec({1, 0, 0})}, {"D2", to_ratvec({0, 1, 0})}, {"D3", to_ratvec({0, 0, 1})}},
      to_ratvec({2, 2, 2}), x.canonical(), Rat(-1) * x.canonical(), {"D1", "D2", "D3"});
  auto cert = run_pipeline(x, sys);
  EXPECT_TRUE(cert.ok());
}

TEST(Pipeline, NonDltFailsAtClassify) {
  auto x = p1();
  try {
    run_pipeline(x, p1_system(x, Rat(1, 2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "classify");
  }
}
