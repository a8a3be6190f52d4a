#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "bruhat/characters.hpp"
#include "bruhat/verify.hpp"

using namespace bruhat;

TEST(Characters, CountIsEulerPhi) {
  for (auto [p, n, phi] : std::vector<std::tuple<int, int, size_t>>{{2, 2, 2}, {2, 3, 4}, {3, 1, 2}, {3, 2, 6}, {5, 2, 20}}) {
    auto cs = all_characters(p, n);
    EXPECT_EQ(cs.size(), phi);
    for (size_t i = 0; i < cs.size(); ++i)
      for (size_t j = i + 1; j < cs.size(); ++j) EXPECT_FALSE(cs[i] == cs[j]);
  }
}

TEST(Characters, MultiplicativeOnUnits) {
  for (int p : {2, 3, 5})
    for (const auto& chi : all_characters(p, 2)) {
      long q = chi.modulus();
      for (long x = 1; x < q; ++x)
        for (long y = 1; y < q; ++y) {
          if (x % p == 0 || y % p == 0) continue;
          ASSERT_EQ(chi.at_residue(x * y % q), chi.at_residue(x) * chi.at_residue(y)) << chi.str();
        }
      EXPECT_THROW(chi.at_residue(p), std::domain_error);
    }
}

TEST(Characters, ConductorByDirectSearch) {
  for (int p : {3, 5})
    for (const auto& chi : all_characters(p, 3)) {
      long q = chi.modulus();
      int expect = 3;
      for (int n = 0; n <= 3; ++n) {
        long pn = ipow(p, n).get_si();
        bool triv = true;
        for (long x = 1; x < q && triv; x += pn)
          if (x % p && !(chi.at_residue(x) == Root())) triv = false;
        if (triv) {
          expect = n;
          break;
        }
      }
      EXPECT_EQ(chi.conductor(), expect) << chi.str();
      EXPECT_EQ(chi.minimal(), chi);
    }
}

TEST(Characters, InverseAndPower) {
  for (const auto& chi : all_characters(5, 2)) {
    EXPECT_TRUE(chi.power(static_cast<long>(chi.order())).is_trivial());
    for (long x : {1L, 2L, 7L, 13L})
      EXPECT_EQ(chi.at_residue(x) * chi.inverse().at_residue(x), Root());
  }
}

TEST(Characters, ParseCharacter) {
  SmoothCharacter c = parse_character("n=2,gen=1", 5);
  EXPECT_EQ(c.level(), 2);
  EXPECT_EQ(c.order(), 20);
  EXPECT_EQ(c.conductor(), 2);
  SmoothCharacter d = parse_character("n=3,gen=1,gen2=1", 2);
  EXPECT_EQ(d.order(), 2);
  EXPECT_THROW(parse_character("gen=1", 5), std::invalid_argument);
  EXPECT_THROW(parse_character("n=1,foo=2", 5), std::invalid_argument);
}

TEST(Types, BoundsFollowConductor) {
  for (int p : {3, 5})
    for (const auto& chi : all_characters(p, 3)) {
      PrincipalSeriesType t = build_type(chi);
      int n = std::max(1, chi.conductor());
      EXPECT_EQ(*t.J.standard_bounds(), (Bounds{0, n / 2, (n + 1) / 2, 0}));
    }
}

TEST(Types, RhoIsACharacterOfJ) {
  PrincipalSeriesType t = build_type(parse_character("n=2,gen=1", 3));
  Mat2 x(4, 3, 9, 7), y(1, 6, 3, 19);  // det 1, both in J
  ASSERT_EQ(x.det(), 1);
  ASSERT_EQ(y.det(), 1);
  ASSERT_TRUE(t.J.contains(x) && t.J.contains(y));
  EXPECT_EQ(t.rho(x * y), t.rho(x) * t.rho(y));
}

TEST(Types, WeylGroupIntertwining) {
  for (int p : {3, 5}) {
    SmoothCharacter quad = all_characters(p, 1)[(p - 1) / 2];  // the quadratic character
    ASSERT_EQ(quad.order(), 2);
    EXPECT_TRUE(w_chi_full(quad));
    PrincipalSeriesType t = build_type(quad);
    EXPECT_TRUE(intertwines(weyl_s0(), t, t));
    SmoothCharacter gen = all_characters(p, 2)[1];
    EXPECT_FALSE(w_chi_full(gen));
    PrincipalSeriesType u = build_type(gen), ui = build_type(gen.inverse());
    EXPECT_FALSE(intertwines(weyl_s0(), u, u));
    EXPECT_TRUE(intertwines(weyl_s0(), u, ui));
  }
  EXPECT_THROW(weyl_reflection_class(Mat2(1, 1, 0, 1)), NotInNormalizer);
}

TEST(Types, VerifySuitePasses) {
  VerifyOptions o;
  for (const auto& c : verify_types(o)) EXPECT_TRUE(c.pass) << c.id << " " << c.config << " " << c.detail;
}
