#include <gtest/gtest.h>

#include <random>

#include "adjoint/lifting.hpp"

using namespace adjoint;
using namespace adjoint::lifting;
using cone::Cone;

namespace {

Divisor div(std::map<std::string, Rat> m) { return Divisor(std::move(m), "X"); }

// F1 with S = D1 (ray (1,0)); E = D2 is the negative section.
struct F1Lift {
  toric::ToricVariety x = toric::hirzebruch(1);
  Divisor A = div({{"D3", Rat(1, 4)}, {"D4", Rat(2)}});
  Divisor B = div({{"D2", Rat(3, 4)}});
};

// D(w) = k [ (w1 + w2)(K + A + S) + w1 B ], so B(w) = S + w1/(w1+w2) B.
CharacteristicSystem f1_system(const toric::ToricVariety& x, long k) {
  F1Lift f;
  Divisor base = x.canonical() + f.A + x.prime("D1");
  std::map<std::string, RatVec> m;
  for (const auto& n : x.names()) m[n] = RatVec{Rat(k) * (base[n] + f.B[n]), Rat(k) * base[n]};
  return CharacteristicSystem::linear(Cone::orthant(2), m, RatVec{Rat(k), Rat(k)}, x.canonical(), f.A, x.names());
}

// Brute-force restricted fixed multiplicity at D2 for F1, S = D1: characters
// on the facet are (-d1, y) with y >= -d2, y >= -d1 - d3, y <= d4 after
// rounding the divisor down.
std::optional<Rat> f1_fix_at_d2(const Divisor& d) {
  long d1 = floor_rat(d["D1"]).convert_to<long>();
  long lo = std::max(ceil_rat(-d["D2"]), ceil_rat(-d["D3"] - Rat(d1))).convert_to<long>();
  if (Rat(lo) > d["D4"]) return std::nullopt;
  return Rat(lo) + d["D2"];
}

}  // namespace

TEST(Lifting, P2LineSimple) {
  auto x = toric::projective_space(2);
  auto inst = make_lifting_instance(x, "D1", div({{"D2", Rat(2)}}), div({{"D3", Rat(1, 2)}}), 2);
  auto rep = simple_lifting_check(inst);
  EXPECT_TRUE(rep.holds) << rep.detail;
  EXPECT_TRUE(rep.phi.is_zero());
  // 2(K + Delta) = 2 D2 - D3: characters (0, y) with -2 <= y <= -1
  EXPECT_EQ(rep.lhs.size(), 2u);
  EXPECT_EQ(rep.lhs, rep.rhs);
}

TEST(Lifting, BaseLocusAndIntegralityPreconditions) {
  auto x = toric::projective_space(2);
  auto bad = make_lifting_instance(x, "D1", div({{"D2", Rat(1)}}), div({{"D3", Rat(1, 2)}}), 2);
  try {
    simple_lifting_check(bad);
    FAIL() << "expected a base-locus error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
  EXPECT_THROW(make_lifting_instance(x, "D1", div({{"D2", Rat(2)}}), div({{"D3", Rat(1, 3)}}), 2), Error);
  EXPECT_THROW(make_lifting_instance(x, "D1", div({{"D2", Rat(2)}}), div({{"D3", Rat(1)}}), 1), Error);
  EXPECT_THROW(make_lifting_instance(x, "D1", div({{"D2", Rat(-1)}}), div({}), 1), Error);
}

TEST(Lifting, F1RigidRestrictedPart) {
  F1Lift f;
  auto inst = make_lifting_instance(f.x, "D1", f.A, f.B, 4);
  auto rep = simple_lifting_check(inst);
  EXPECT_TRUE(rep.holds) << rep.detail;
  // (K + Delta).E = A.E + B.E = 1/4 - 3/4 < 0
  auto fix = f1_fix_at_d2(Rat(4) * inst.adjoint());
  ASSERT_TRUE(fix);
  EXPECT_EQ(rep.lower["S.D2"], *fix / 4);
  EXPECT_EQ(rep.phi["S.D2"], Rat(1, 2));
  EXPECT_EQ(rep.theta["S.D2"], Rat(1, 4));
}

TEST(Lifting, SharpEndpointsHold) {
  F1Lift f;
  auto inst = make_lifting_instance(f.x, "D1", f.A, f.B, 4);
  auto lo = admissible_lower(inst, LiftMode::Sharp);
  auto grid = phi_grid(lo, inst.omega, 4, 5);
  ASSERT_GE(grid.size(), 5u);
  // least admissible Phi with 4 Phi integral
  Divisor::Map m;
  for (auto& [k, v] : lo.coeffs()) m.emplace(k, Rat(ceil_rat(4 * v), 4));
  EXPECT_EQ(grid.front(), Divisor(m, lo.space()));
  auto low = sharp_lifting_check(inst, grid.front(), LiftMode::Sharp);
  EXPECT_TRUE(low.holds) << low.detail;
  auto high = sharp_lifting_check(inst, inst.omega, LiftMode::Sharp);
  EXPECT_TRUE(high.holds) << high.detail;
  EXPECT_TRUE(high.theta.is_zero());
  for (const auto& phi : grid) EXPECT_TRUE(sharp_lifting_check(inst, phi, LiftMode::Sharp).holds) << phi.str();
}

TEST(Lifting, SharpRangeIsEnforced) {
  F1Lift f;
  auto inst = make_lifting_instance(f.x, "D1", f.A, f.B, 4);
  Divisor over = inst.omega + Divisor({{"S.D4", Rat(1)}}, inst.omega.space());
  EXPECT_THROW(sharp_lifting_check(inst, over, LiftMode::Sharp), Error);
  Divisor frac = inst.omega - Divisor({{"S.D4", Rat(1, 8)}}, inst.omega.space());
  EXPECT_THROW(sharp_lifting_check(inst, frac, LiftMode::Sharp), Error);
}

TEST(Lifting, TinkeringGate) {
  F1Lift f;
  auto inst = make_lifting_instance(f.x, "D1", f.A, f.B, 4);
  Rat good(1, 10), bad(10);
  ASSERT_TRUE(toric::is_ample(f.x, good * inst.adjoint() + f.A));
  ASSERT_FALSE(toric::is_ample(f.x, bad * inst.adjoint() + f.A));
  auto lo = admissible_lower(inst, LiftMode::Tinker, good);
  for (const auto& phi : phi_grid(lo, inst.omega, 4, 5))
    EXPECT_TRUE(sharp_lifting_check(inst, phi, LiftMode::Tinker, good).holds);
  try {
    admissible_lower(inst, LiftMode::Tinker, bad);
    FAIL() << "expected an ampleness error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(Lifting, FixedPartChain) {
  F1Lift f;
  for (long p : {4L, 8L}) {
    auto inst = make_lifting_instance(f.x, "D1", f.A, f.B, p);
    toric::Restriction r(f.x, "D1");
    Divisor sharp = toric::restricted_fixed_lp(r, inst.adjoint() + Rat(1, p) * f.A);
    Divisor asym = toric::restricted_fixed_lp(r, inst.adjoint());
    Divisor fp = Rat(1, p) * *toric::restricted_system(r, Rat(p) * inst.adjoint()).fix;
    EXPECT_TRUE(sharp <= asym);
    EXPECT_TRUE(asym <= fp);
  }
}

TEST(Theta, TrivialFixedPart) {
  auto x = toric::hirzebruch(1);
  auto t = theta_phi_omega(x, "D1", f1_system(x, 1), RatVec{0, 1});
  EXPECT_TRUE(t.fs.is_zero());
  EXPECT_TRUE(t.phi.is_zero());
  EXPECT_EQ(t.theta, t.omega);
}

TEST(Theta, RigidPartGivesPositivePhi) {
  auto x = toric::hirzebruch(1);
  auto sys = f1_system(x, 1);
  for (RatVec w : {RatVec{1, 0}, RatVec{1, 1}, RatVec{1, 2}, RatVec{3, 1}}) {
    auto t = theta_phi_omega(x, "D1", sys, w);
    // asymptotic oracle: max(0, d2 - d1 - d3) / r(w)
    Divisor d = sys.eval(w);
    Rat fs = std::max(Rat(0), d["D2"] - d["D1"] - d["D3"]) / sys.r_of(w);
    EXPECT_EQ(t.fs["S.D2"], fs) << to_string(w);
    EXPECT_EQ(t.phi["S.D2"], std::min(fs, t.omega["S.D2"]));
    EXPECT_EQ(t.theta + t.phi, t.omega);
  }
  auto t = theta_phi_omega(x, "D1", sys, RatVec{1, 0});
  EXPECT_EQ(t.phi["S.D2"], Rat(1, 2));
  EXPECT_EQ(t.omega["S.D2"], Rat(3, 4));
}

TEST(Theta, BaseLocusPrecondition) {
  auto x = toric::hirzebruch(1);
  Divisor K = x.canonical();
  std::map<std::string, RatVec> m;
  for (const auto& n : x.names()) m[n] = RatVec{K[n] + (n == "D1" ? Rat(1) : Rat(0))};
  auto sys = CharacteristicSystem::linear(Cone::orthant(1), m, RatVec{Rat(1)}, K, Divisor({}, "X"), x.names());
  EXPECT_THROW(theta_phi_omega(x, "D1", sys, RatVec{1}), Error);
}

TEST(Lemma6, StabilizationLadder) {
  auto x = toric::hirzebruch(1);
  auto ladder = [&](long k, const IntVec& l, int nmax) -> std::optional<int> {
    auto sys = f1_system(x, k);
    auto t = theta_phi_omega(x, "D1", sys, to_ratvec(l));
    for (int n = 1; n <= nmax; ++n) {
      auto fix = f1_fix_at_d2(sys.eval(Rat(n) * to_ratvec(l)));
      if (fix && std::min(*fix / (n * sys.r_of(to_ratvec(l))), t.omega["S.D2"]) == t.phi["S.D2"]) return n;
    }
    return std::nullopt;
  };
  EXPECT_EQ(lemma6_search(x, "D1", f1_system(x, 4), {1, 0}, 6), std::optional<int>(1));
  EXPECT_EQ(lemma6_search(x, "D1", f1_system(x, 2), {1, 0}, 6), std::optional<int>(2));
  EXPECT_EQ(lemma6_search(x, "D1", f1_system(x, 1), {1, 0}, 3), std::nullopt);
  for (long k : {1L, 2L, 4L})
    for (IntVec l : {IntVec{1, 0}, IntVec{0, 1}, IntVec{1, 1}, IntVec{1, 2}})
      EXPECT_EQ(lemma6_search(x, "D1", f1_system(x, k), l, 6), ladder(k, l, 6)) << k << " " << to_string(to_ratvec(l));
}

TEST(ExtendConvex, LinearSamples) {
  auto x = toric::hirzebruch(1);
  auto sys = f1_system(x, 1);
  toric::Restriction r(x, "D1");
  Cone c(2, {to_ratvec({1, 0}), to_ratvec({1, 1})});
  std::vector<std::pair<RatVec, Divisor>> samples;
  for (RatVec w : {RatVec{2, 1}, RatVec{3, 1}, RatVec{3, 2}})
    samples.push_back({w, toric::restricted_fixed_lp(r, sys.eval(w))});
  auto ext = extend_convex(samples, {c, {c}});
  EXPECT_TRUE(ext.flagged.empty());
  for (RatVec w : {RatVec{1, 0}, RatVec{1, 1}, RatVec{5, 2}, RatVec{7, 3}})
    EXPECT_EQ(ext(w), toric::restricted_fixed_lp(r, sys.eval(w))) << to_string(w);
}

TEST(ExtendConvex, PiecewiseAndHomogeneous) {
  auto x = toric::hirzebruch(1);
  auto sys = f1_system(x, 1);
  toric::Restriction r(x, "D1");
  // F_S(D2) = max(0, w1/2 - w2/4) breaks along w2 = 2 w1
  Cone a(2, {to_ratvec({1, 0}), to_ratvec({1, 2})}), b(2, {to_ratvec({1, 2}), to_ratvec({0, 1})});
  cone::ConeDecomposition dec{Cone::orthant(2), {a, b}};
  std::vector<std::pair<RatVec, Divisor>> samples;
  for (long i = 1; i <= 4; ++i)
    for (long j = 1; j <= 4; ++j) samples.push_back({RatVec{i, j}, toric::restricted_fixed_lp(r, sys.eval(RatVec{i, j}))});
  auto ext = extend_convex(samples, dec);
  EXPECT_TRUE(ext.flagged.empty());
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> u(0, 40);
  for (int t = 0; t < 50; ++t) {
    RatVec w{Rat(u(rng)), Rat(u(rng), 3)};
    if (w[0] == 0 && w[1] == 0) continue;
    Divisor f = toric::restricted_fixed_lp(r, sys.eval(w));
    EXPECT_EQ(ext(w), f) << to_string(w);
    for (long n : {2L, 3L}) EXPECT_EQ(ext(Rat(n) * w), Rat(n) * f);
  }
}

TEST(ExtendConvex, BoundaryJumpIsFlagged) {
  Cone c = Cone::orthant(2);
  auto d = [](Rat v) { return Divisor({{"S.P", v}}, "S"); };
  std::vector<std::pair<RatVec, Divisor>> samples = {
      {RatVec{1, 1}, d(1)}, {RatVec{2, 1}, d(1)}, {RatVec{1, 2}, d(2)}, {RatVec{1, 0}, d(1)}, {RatVec{0, 1}, d(1)}};
  auto ext = extend_convex(samples, {c, {c}});
  ASSERT_EQ(ext.flagged.size(), 1u);
  EXPECT_EQ(ext.flagged[0], (RatVec{1, 0}));
}

TEST(ExtendConvex, ConvexityViolationThrows) {
  Cone a(2, {to_ratvec({1, 0}), to_ratvec({1, 1})}), b(2, {to_ratvec({1, 1}), to_ratvec({0, 1})});
  auto d = [](Rat v) { return Divisor({{"S.P", v}}, "S"); };
  // min(w1, w2) is concave
  std::vector<std::pair<RatVec, Divisor>> samples = {
      {RatVec{2, 1}, d(1)}, {RatVec{3, 1}, d(1)}, {RatVec{1, 2}, d(1)}, {RatVec{1, 3}, d(1)}};
  EXPECT_THROW(extend_convex(samples, {Cone::orthant(2), {a, b}}), Error);
}

TEST(RestrictedRing, LineInP2) {
  auto x = toric::projective_space(2);
  auto rr = restricted_ring(x, Cone::orthant(1), {{"D2", RatVec{1}}}, "D1");
  auto g = restricted_ring_generators(x, rr);
  ASSERT_EQ(g.size(), 2u);
  for (const auto& e : g) {
    EXPECT_EQ(e.deg, (IntVec{1}));
    auto m = lift_restricted(x, rr, e.deg, e.mono);
    EXPECT_EQ(dot(m, x.rays()[0]), 0);
  }
  for (long l = 0; l <= 5; ++l) EXPECT_EQ(restricted_piece(x, rr, {l}).size(), static_cast<std::size_t>(l + 1));
}

TEST(RestrictedRing, GeneratorsSpanPieces) {
  auto x = toric::hirzebruch(1);
  auto rr = restricted_ring(x, Cone::orthant(2), {{"D2", RatVec{1, 0}}, {"D4", RatVec{0, 1}}, {"D1", RatVec{0, 1}}}, "D1");
  auto g = restricted_ring_generators(x, rr);
  ring::Closure cl(g, RatVec{1, 1});
  for (long a = 0; a <= 3; ++a)
    for (long b = 0; b <= 3; ++b) {
      auto piece = restricted_piece(x, rr, {a, b});
      auto got = cl.at({a, b});
      std::set<IntVec> want(piece.begin(), piece.end());
      EXPECT_EQ(got, want) << a << "," << b;
    }
}
