#include "dlocus/groebner.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace dlocus {
namespace {

using testing::GF;
using testing::P;
using testing::Ps;
using testing::QQ;
using testing::ring_of;
using Kind = MonomialOrder::Kind;

constexpr const char* kSurface = "x3^2-x2*x4, x2*x3-x1*x4, x2^2-x1*x3";

TEST(NormalForm, Examples) {
  auto R = ring_of({"x", "y"}, Kind::lex);
  EXPECT_TRUE(normal_form(P(R, "x^2"), {P(R, "x")}).is_zero());
  EXPECT_EQ(normal_form(P(R, "x^2*y+1"), {P(R, "x^2")}), P(R, "1"));
}

TEST(NormalForm, RemainderIsIrreducibleAndCongruent) {
  auto R = ring_of({"a", "b", "c"});
  std::mt19937_64 rng(21);
  for (int i = 0; i < 40; ++i) {
    std::vector<Polynomial<GF>> G{testing::random_poly(R, 3, 2, rng), testing::random_poly(R, 3, 2, rng)};
    std::erase_if(G, [](const auto& g) { return g.is_zero(); });
    if (G.empty()) continue;
    auto f = testing::random_poly(R, 6, 4, rng);
    auto r = normal_form(f, G);
    for (const auto& t : r.terms())
      for (const auto& g : G) EXPECT_FALSE(divides(g.leading_monomial(), t.mono));
    // f - r lies in <G>: it reduces to zero modulo a Groebner basis of <G>
    auto gb = buchberger(G);
    EXPECT_TRUE(gb.contains(f - r));
  }
}

TEST(NormalForm, SurfaceGeneratorReducesToZeroModuloBasis) {
  auto R = ring_of({"x1", "x2", "x3", "x4"});
  auto gb = buchberger(Ps(R, kSurface));
  // x2*x3 - x1*x4 is itself a generator, so by hand division it lies in the ideal
  EXPECT_TRUE(normal_form(P(R, "x2*x3-x1*x4"), gb.generators()).is_zero());
  EXPECT_FALSE(normal_form(P(R, "x1*x2"), gb.generators()).is_zero());
}

TEST(SPolynomial, Examples) {
  auto R = ring_of({"x", "y"}, Kind::lex);
  EXPECT_TRUE(s_polynomial(P(R, "x"), P(R, "y")).is_zero());
  EXPECT_EQ(s_polynomial(P(R, "x^2-y"), P(R, "x*y-1")), P(R, "x-y^2"));
  EXPECT_TRUE(s_polynomial(P(R, "x^2-y"), P(R, "x^2-y")).is_zero());
}

TEST(SPolynomial, HandExpansionOracle) {
  // y*(x^2-y) - x*(x*y-1), expanded term by term
  auto R = ring_of({"x", "y"}, Kind::lex);
  auto expanded = P(R, "y")*P(R, "x^2-y") - P(R, "x")*P(R, "x*y-1");
  EXPECT_EQ(s_polynomial(P(R, "x^2-y"), P(R, "x*y-1")), expanded);
}

TEST(Buchberger, LinearSystem) {
  auto R = ring_of({"x", "y"}, Kind::lex);
  auto gb = buchberger(Ps(R, "x+y, x-y"));
  ASSERT_EQ(gb.size(), 2u);
  EXPECT_EQ(gb.generators()[0], P(R, "y"));
  EXPECT_EQ(gb.generators()[1], P(R, "x"));
}

TEST(Buchberger, TwistedCubicCurveMembership) {
  GF f;
  auto R = ring_of({"x", "y", "z"}, Kind::lex);
  auto gb = buchberger(Ps(R, "y-x^2, z-x^3"));
  for (const auto* s : {"x^2-y", "x^3-z", "y^3-z^2"}) {
    auto g = P(R, s);
    EXPECT_TRUE(gb.contains(g)) << s;
    // independent check: g vanishes on (t, t^2, t^3)
    for (std::uint32_t t : {2u, 5u, 31u}) {
      std::vector<GF::value_type> pt{t, f.mul(t, t), f.mul(t, f.mul(t, t))};
      EXPECT_EQ(g.evaluate(pt), 0u);
    }
  }
  EXPECT_FALSE(gb.contains(P(R, "y-x")));
}

TEST(Buchberger, PermutationAndScalingGiveSameSurfaceBasis) {
  auto R = ring_of({"x1", "x2", "x3", "x4"});
  auto a = buchberger(Ps(R, kSurface));
  auto b = buchberger(Ps(R, "7*(x2^2-x1*x3), -(x3^2-x2*x4), 3*(x2*x3-x1*x4)"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 3u);
}

TEST(Buchberger, UnitAndZeroIdeals) {
  auto R = ring_of({"x", "y"});
  EXPECT_TRUE(buchberger(Ps(R, "x, x+1")).is_unit());
  EXPECT_TRUE(buchberger(Ps(R, "0")).is_zero_ideal());
  EXPECT_TRUE(buchberger(Ps(R, "3")).is_unit());
}

TEST(Buchberger, RationalsAgreeWithPrimeFieldShape) {
  auto R = ring_of({"x", "y", "z"});
  auto Q = ring_of<QQ>({"x", "y", "z"});
  const char* gens = "x^2+y*z-2, y^2-x*z+1, z^2-x*y";
  auto gp = buchberger(Ps(R, gens));
  auto gq = buchberger(Ps(Q, gens));
  ASSERT_EQ(gp.size(), gq.size());
  for (std::size_t i = 0; i < gp.size(); ++i)
    EXPECT_EQ(gp.generators()[i].leading_monomial(), gq.generators()[i].leading_monomial());
  for (const auto& g : gq.generators()) EXPECT_TRUE(QQ{}.is_one(g.leading_coefficient()));
}

TEST(Buchberger, ResourceLimitIsReported) {
  auto R = ring_of({"x", "y", "z"});
  Budget b;
  b.max_pairs = 1;
  EXPECT_THROW(buchberger(Ps(R, "x^2+y*z-2, y^2-x*z+1, z^2-x*y"), b), ResourceLimit);
  Budget d;
  d.max_degree = 2;
  EXPECT_THROW(buchberger(Ps(R, "x^2+y*z-2, y^2-x*z+1, z^2-x*y"), d), ResourceLimit);
  ScopedBudget scoped(b);
  EXPECT_THROW(buchberger(Ps(R, "x^2+y*z-2, y^2-x*z+1, z^2-x*y")), ResourceLimit);
}

TEST(Buchberger, ExplicitOrderOverload) {
  auto R = ring_of({"x", "y"});
  auto gb = buchberger(Ps(R, "x^2-y, x*y-1"), MonomialOrder::lex(2));
  EXPECT_EQ(gb.order().kind(), Kind::lex);
  EXPECT_TRUE(gb.contains(P(R, "y^3-1")));
}

// Random small ideals: S-pair criterion, membership, uniqueness, idempotence.
class RandomIdeals : public ::testing::TestWithParam<int> {};

TEST_P(RandomIdeals, ReducedBasisProperties) {
  std::mt19937_64 rng(static_cast<unsigned>(GetParam()) * 7919u + 1u);
  std::uniform_int_distribution<int> nv(1, 3), ng(1, 3), nt(1, 4), kd(0, 1);
  int n = nv(rng);
  std::vector<std::string> names{"a", "b", "c"};
  names.resize(static_cast<std::size_t>(n));
  auto kind = kd(rng) ? Kind::lex : Kind::grevlex;
  auto R = Ring<GF>::from_blocks(GF{}, {{Block::x, names}}, kind);
  std::vector<Polynomial<GF>> gens;
  int count = ng(rng);
  for (int i = 0; i < count; ++i) gens.push_back(testing::random_poly(R, nt(rng), 3, rng));
  if (std::all_of(gens.begin(), gens.end(), [](const auto& g) { return g.is_zero(); })) gens[0] = P(R, "a");

  auto gb = buchberger(gens);
  const auto& G = gb.generators();
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i + 1; j < G.size(); ++j)
      EXPECT_TRUE(normal_form(s_polynomial(G[i], G[j]), G).is_zero());
  for (const auto& f : gens) EXPECT_TRUE(gb.contains(f));
  for (std::size_t i = 0; i < G.size(); ++i) {
    EXPECT_TRUE(G[i].field().is_one(G[i].leading_coefficient()));
    for (std::size_t j = 0; j < G.size(); ++j) {
      if (i == j) continue;
      for (const auto& t : G[i].terms()) EXPECT_FALSE(divides(G[j].leading_monomial(), t.mono));
    }
  }

  auto shuffled = gens;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  GF f;
  for (auto& g : shuffled) g = g.scaled(f.from_int(std::uniform_int_distribution<int>(1, 32002)(rng)));
  EXPECT_EQ(buchberger(shuffled), gb);
  if (!gb.is_zero_ideal()) {
    EXPECT_EQ(buchberger(G), gb);
  }
}

INSTANTIATE_TEST_SUITE_P(Fifty, RandomIdeals, ::testing::Range(0, 50));

}  // namespace
}  // namespace dlocus
