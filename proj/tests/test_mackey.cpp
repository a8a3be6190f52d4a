#include <gtest/gtest.h>

#include "bruhat/mackey.hpp"
#include "bruhat/verify.hpp"

using namespace bruhat;

TEST(Mackey, ConstituentCountsAtVertices) {
  for (int p : {3, 5, 7})
    for (const auto& chi : all_characters(p, 2)) {
      long expect = w_chi_full(chi) ? 2 : 1;
      EXPECT_EQ(constituent_count(StdSimplex::V0, chi), expect) << chi.str();
      EXPECT_EQ(constituent_count(StdSimplex::V1, chi), expect) << chi.str();
      EXPECT_EQ(constituent_count(StdSimplex::Edge, chi), 1) << chi.str();
    }
  EXPECT_EQ(constituent_count(StdSimplex::V0, parse_character("n=1,gen=2", 5)), 2);
}

TEST(Mackey, ExactRouteMatchesFiniteQuotient) {
  auto configs = mackey_configs({3});
  ASSERT_FALSE(configs.empty());
  for (const auto& c : configs) {
    HomCount e = exact_mackey(c);
    FiniteMackeyResult f = finite_mackey(c, natural_level(c));
    EXPECT_EQ(e.dim, f.mackey) << c.label;
    EXPECT_EQ(f.mackey, f.inner) << c.label;
    EXPECT_EQ(e.orbits, f.double_cosets) << c.label;
  }
}

TEST(Mackey, TransportToK0IsAnInvolutionOnBounds) {
  FiniteDatum d{1, 2, parse_character("n=3,gen=1", 3)};
  FiniteDatum e = transport_to_k0(transport_to_k0(d));
  EXPECT_EQ(e.beta, d.beta);
  EXPECT_EQ(e.gamma, d.gamma);
  EXPECT_EQ(e.chi, d.chi);
}

TEST(Mackey, BruhatCellsOfIwahoriInK0) {
  // I \ K0 / I has two cells.  I \ K0 / J(1,1) counts I-orbits of length-2
  // paths through v0: two through v1, and the torus acts on the remaining
  // pairs by squares, giving two more orbits for odd p and one for p = 2.
  for (int p : {2, 3, 5}) {
    InducingDatum triv{pattern_I(p), [](const Mat2&) { return Root(); }, "1"};
    EXPECT_EQ(mackey_exact(triv, triv, pattern_K0(p)).orbits, 2u);
    InducingDatum deep{std_pattern(1, 1, p), [](const Mat2&) { return Root(); }, "1"};
    EXPECT_EQ(mackey_exact(triv, deep, pattern_K0(p)).orbits, p == 2 ? 3u : 4u);
  }
}

TEST(Projind, SmallDistances) {
  for (int p : {3, 5})
    for (const auto& chi : all_characters(p, 1))
      for (StdSimplex x : {StdSimplex::V0, StdSimplex::V1})
        for (int n = 1; n <= 2; ++n) {
          ProjindReport r = projind_check(chi, x, n);
          EXPECT_TRUE(r.pass) << r.chi << " " << r.vertex << " d=" << n;
        }
  EXPECT_THROW(projind_check(SmoothCharacter::trivial(3), StdSimplex::Edge, 1), std::invalid_argument);
}

TEST(Mackey, VerifySuitePassesAtThree) {
  VerifyOptions o;
  o.p = 3;
  for (const auto& c : verify_mackey(o)) EXPECT_TRUE(c.pass) << c.id << " " << c.config << " " << c.detail;
}
