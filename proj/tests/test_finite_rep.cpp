#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "bruhat/finite_group.hpp"
#include "bruhat/mackey.hpp"

using namespace bruhat;

namespace {

// Class count by explicit orbit closure under conjugation by generators.
size_t brute_class_count(const FiniteGroup& G) {
  const SL2Mod& Q = G.quotient();
  std::set<std::uint32_t> left(G.elements().begin(), G.elements().end());
  size_t n = 0;
  while (!left.empty()) {
    std::vector<std::uint32_t> stack{*left.begin()};
    left.erase(left.begin());
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (auto g : G.elements()) {
        auto y = Q.mul(Q.mul(g, x), Q.inverse(g));
        if (left.erase(y)) stack.push_back(y);
      }
    }
    ++n;
  }
  return n;
}

std::multiset<long> degrees(const std::vector<ClassFunction>& irr) {
  std::multiset<long> d;
  for (const auto& f : irr) d.insert(f.degree().rational_value().get_num().get_si());
  return d;
}

}  // namespace

TEST(FiniteGroup, OrdersOfCongruenceQuotients) {
  EXPECT_EQ(SL2Mod(2, 1).size(), 6u);
  EXPECT_EQ(SL2Mod(3, 1).size(), 24u);
  EXPECT_EQ(SL2Mod(2, 2).size(), 48u);
  EXPECT_EQ(SL2Mod(3, 2).size(), 648u);
  auto Q = std::make_shared<const SL2Mod>(5, 1);
  EXPECT_EQ(FiniteGroup::whole(Q).order(), 120u);
  EXPECT_EQ(FiniteGroup::generated(Q, Q->generators()).order(), 120u);
}

TEST(FiniteGroup, RankUnrankRoundTrip) {
  SL2Mod Q(3, 2);
  for (std::uint32_t x = 0; x < Q.size(); x += 7) {
    EXPECT_EQ(Q.rank(Q.unrank(x)), x);
    EXPECT_EQ(Q.unrank(x).det(), 1);
    EXPECT_EQ(Q.mul(x, Q.inverse(x)), Q.identity());
  }
}

TEST(FiniteGroup, ClassesMatchBruteForce) {
  for (auto [p, m] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {5, 1}, {2, 2}}) {
    auto Q = std::make_shared<const SL2Mod>(p, m);
    FiniteGroup G = FiniteGroup::whole(Q);
    EXPECT_EQ(G.num_classes(), brute_class_count(G)) << p << "^" << m;
    size_t total = std::accumulate(G.class_sizes().begin(), G.class_sizes().end(), size_t{0});
    EXPECT_EQ(total, G.order());
  }
  auto Q = std::make_shared<const SL2Mod>(2, 1);
  EXPECT_EQ(FiniteGroup::whole(Q).num_classes(), 3u);  // S3
}

TEST(FiniteGroup, PatternImagesAgree) {
  for (int p : {2, 3, 5}) {
    auto Q = std::make_shared<const SL2Mod>(p, 2);
    if (Q->size() > 20000) continue;
    for (const auto& P : {pattern_I(p), std_pattern(1, 1, p), std_pattern(0, 2, p)}) {
      FiniteGroup a = FiniteGroup::image_of(Q, P), b = FiniteGroup::image_by_lifts(Q, P);
      EXPECT_EQ(a.elements(), b.elements()) << P.describe();
    }
  }
}

TEST(Characters, SL2OverPrimeFieldDegrees) {
  for (int p : {3, 5, 7}) {
    auto Q = std::make_shared<const SL2Mod>(p, 1);
    FiniteGroup G = FiniteGroup::whole(Q);
    auto irr = irreducible_characters(G);
    ASSERT_EQ(irr.size(), static_cast<size_t>(p + 4));
    std::multiset<long> expect{1, p};
    for (int i = 0; i < (p - 3) / 2; ++i) expect.insert(p + 1);
    for (int i = 0; i < (p - 1) / 2; ++i) expect.insert(p - 1);
    for (int i = 0; i < 2; ++i) {
      expect.insert((p + 1) / 2);
      expect.insert((p - 1) / 2);
    }
    EXPECT_EQ(degrees(irr), expect) << p;
  }
}

TEST(Characters, OrthogonalityRelations) {
  auto Q = std::make_shared<const SL2Mod>(2, 2);
  FiniteGroup G = FiniteGroup::whole(Q);
  auto irr = irreducible_characters(G);
  ASSERT_EQ(irr.size(), G.num_classes());
  for (size_t i = 0; i < irr.size(); ++i)
    for (size_t j = 0; j < irr.size(); ++j) EXPECT_EQ(inner_product(irr[i], irr[j]), i == j ? 1 : 0);
  // Column orthogonality at the identity: the regular character.
  for (size_t c = 0; c < G.num_classes(); ++c) {
    Cyclotomic s(irr[0].M);
    for (const auto& f : irr) s += f.values[c] * f.degree();
    bool is_id = G.class_reps()[c] == Q->identity();
    EXPECT_EQ(s, Cyclotomic(irr[0].M, is_id ? mpq_class(static_cast<unsigned long>(G.order())) : mpq_class(0)));
  }
}

TEST(Characters, ModularRouteMatchesSplitting) {
  for (int p : {2, 3, 5}) {
    auto Q = std::make_shared<const SL2Mod>(p, 1);
    FiniteGroup G = FiniteGroup::whole(Q);
    auto a = irreducible_characters(G), b = split_irreducibles(G);
    ASSERT_EQ(a.size(), b.size());
    int M = std::lcm(a[0].M, b[0].M);
    for (const auto& f : b) {
      auto g = widen(f, M);
      bool found = false;
      for (const auto& h : a) found = found || widen(h, M) == g;
      EXPECT_TRUE(found) << p;
    }
  }
}

TEST(Mackey, FrobeniusAgreesWithDoubleCosets) {
  for (int p : {3, 5}) {
    auto Q = std::make_shared<const SL2Mod>(p, 1);
    FiniteGroup G = FiniteGroup::whole(Q);
    FiniteGroup B = FiniteGroup::image_by_lifts(Q, pattern_I(p));
    EXPECT_EQ(B.order(), static_cast<size_t>(p * (p - 1)));
    for (const auto& c1 : all_characters(p, 1))
      for (const auto& c2 : all_characters(p, 1)) {
        CharFn r1 = rho_on_quotient(build_type(c1), *Q), r2 = rho_on_quotient(build_type(c2), *Q);
        int M = p - 1;
        ClassFunction i1 = induced_character(B, r1, G, M), i2 = induced_character(B, r2, G, M);
        size_t ndc = 0;
        long frob = mackey_dim_hom_finite(B, r1, G, B, r2, &ndc);
        EXPECT_EQ(inner_product(i1, i2), frob);
        EXPECT_EQ(ndc, 2u);  // Bruhat decomposition
        long expect = (c1 == c2 ? 1 : 0) + (c1 == c2.inverse() ? 1 : 0);
        EXPECT_EQ(frob, expect) << c1.str() << " " << c2.str();
      }
  }
}

TEST(Mackey, InductionFromWholeGroupIsIdentity) {
  auto Q = std::make_shared<const SL2Mod>(3, 1);
  FiniteGroup G = FiniteGroup::whole(Q);
  ClassFunction t = trivial_character(G, 2);
  EXPECT_EQ(induce(t, G), t);
  EXPECT_EQ(inner_product(t, t), 1);
}
