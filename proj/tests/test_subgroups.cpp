#include <gtest/gtest.h>

#include <random>

#include "bruhat/subgroups.hpp"
#include "bruhat/verify.hpp"

using namespace bruhat;

namespace {

// Elements of SL2(Q_p) whose entries stay close to integral, so that a fair
// share land in the compact open subgroups under test.
Mat2 near_integral_sl2(std::mt19937_64& rng, int p) {
  std::uniform_int_distribution<int> num(-8, 8), sh(-1, 2), pick(0, 2);
  Mat2 g;
  for (int i = 0; i < 4; ++i) {
    mpq_class x = num(rng) * qpow(p, sh(rng));
    switch (pick(rng)) {
      case 0: g = g * Mat2::upper(x); break;
      case 1: g = g * Mat2::lower(x); break;
      default: g = g * weyl_s0(); break;
    }
  }
  return g;
}

}  // namespace

TEST(Patterns, StandardBounds) {
  int p = 3;
  EXPECT_EQ(*pattern_K0(p).standard_bounds(), (Bounds{0, 0, 0, 0}));
  EXPECT_EQ(*pattern_I(p).standard_bounds(), (Bounds{0, 0, 1, 0}));
  EXPECT_EQ(*pattern_K1(p).standard_bounds(), (Bounds{0, -1, 1, 0}));
  EXPECT_THROW(std_pattern(-2, 1, p), std::invalid_argument);
  EXPECT_EQ(std_pattern(1, 2, p).fixset->size(), 4u);
}

TEST(Patterns, IwahoriIsIntersectionOfMaximals) {
  for (int p : {2, 3, 5}) {
    ValuationPattern I = pattern_intersect(pattern_K0(p), pattern_K1(p));
    ASSERT_TRUE(I.standard_bounds());
    EXPECT_EQ(*I.standard_bounds(), *pattern_I(p).standard_bounds());
  }
}

TEST(Patterns, MembershipAgreesWithFixedSet) {
  std::mt19937_64 rng(21);
  for (int p : {2, 3, 5})
    for (auto [b, g] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {-1, 1}, {1, 1}, {1, 2}}) {
      ValuationPattern P = std_pattern(b, g, p);
      int inside = 0;
      for (int i = 0; i < 300; ++i) {
        Mat2 x = near_integral_sl2(rng, p);
        bool m = P.contains(x);
        inside += m;
        ASSERT_EQ(m, P.fixes_fixset(x)) << P.describe() << " " << x;
      }
      EXPECT_GT(inside, 0) << P.describe();
    }
}

TEST(Patterns, StabilizersOfRandomSimplices) {
  std::mt19937_64 rng(22);
  for (int p : {2, 3}) {
    auto B = ball_vertices(std_vertex(), 2, p);
    for (size_t i = 0; i < B.size(); i += 3) {
      ValuationPattern S = stabilizer(B[i], p);
      for (int t = 0; t < 80; ++t) {
        Mat2 x = near_integral_sl2(rng, p);
        ASSERT_EQ(S.contains(x), act(x, B[i], p) == B[i]) << B[i].str() << " " << x;
      }
    }
    for (const auto& e : induced_edges(B, p)) {
      ValuationPattern S = stabilizer(e, p);
      Mat2 x = near_integral_sl2(rng, p);
      Edge f = act(x, e, p);
      EXPECT_EQ(S.contains(x), f.v0 == e.v0 && f.v1 == e.v1);
    }
  }
}

TEST(Patterns, ConjugateAndIntersectOracles) {
  std::mt19937_64 rng(23);
  for (int p : {2, 3, 5}) {
    ValuationPattern J = std_pattern(1, 1, p);
    for (int k = 0; k < 10; ++k) {
      Mat2 g = near_integral_sl2(rng, p);
      ValuationPattern C = pattern_conjugate(J, g);
      ValuationPattern X = pattern_intersect(J, C);
      Mat2 gi = g.inverse();
      for (int t = 0; t < 40; ++t) {
        Mat2 x = near_integral_sl2(rng, p);
        bool in_c = J.contains(gi * x * g);
        ASSERT_EQ(C.contains(x), in_c);
        ASSERT_EQ(X.contains(x), J.contains(x) && in_c);
      }
    }
  }
}

TEST(Patterns, IwahoriFactorization) {
  std::mt19937_64 rng(24);
  for (int p : {2, 3, 5}) {
    ValuationPattern J = std_pattern(1, 1, p);
    int done = 0;
    for (int t = 0; t < 400 && done < 30; ++t) {
      Mat2 x = near_integral_sl2(rng, p);
      if (!J.contains(x)) continue;
      IwahoriFactors f = iwahori_factor(x, J);
      EXPECT_EQ(f.upper * f.torus * f.lower, x);
      EXPECT_TRUE(f.upper.c() == 0 && f.lower.b() == 0 && f.torus.b() == 0 && f.torus.c() == 0);
      ++done;
    }
    EXPECT_GT(done, 0);
    EXPECT_THROW(iwahori_factor(weyl_s0(), pattern_K0(p)), NotFactorizable);
  }
}

TEST(Patterns, DeterminacyLevel) {
  EXPECT_EQ(pattern_K0(3).determinacy_level(), 0);
  EXPECT_EQ(pattern_I(3).determinacy_level(), 1);
  EXPECT_EQ(std_pattern(1, 2, 3).determinacy_level(), 2);
}

TEST(Patterns, VerifySuitePasses) {
  VerifyOptions o;
  for (const auto& c : verify_patterns(o)) EXPECT_TRUE(c.pass) << c.id << " " << c.config << " " << c.detail;
}
