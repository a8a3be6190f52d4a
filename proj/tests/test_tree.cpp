#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <random>

#include "bruhat/tree.hpp"
#include "bruhat/verify.hpp"

using namespace bruhat;

namespace {

// Graph distance by breadth-first search, independent of elementary divisors.
int bfs_distance(const Vertex& v, const Vertex& w, int p, int cap) {
  std::map<Vertex, int> dist{{v, 0}};
  std::queue<Vertex> q;
  q.push(v);
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    if (x == w) return dist[x];
    if (dist[x] == cap) continue;
    for (auto& y : neighbors(x, p))
      if (dist.emplace(y, dist[x] + 1).second) q.push(y);
  }
  return -1;
}

Mat2 random_sl2(std::mt19937_64& rng, int p) {
  std::uniform_int_distribution<int> num(-6, 6), sh(-2, 1), pick(0, 1);
  Mat2 g;
  for (int i = 0; i < 5; ++i) {
    mpq_class x = num(rng) * qpow(p, sh(rng));
    g = g * (pick(rng) ? Mat2::upper(x) : Mat2::lower(x));
  }
  return g;
}

}  // namespace

TEST(Tree, NeighborsAreDistinctAndAdjacent) {
  for (int p : {2, 3, 5, 7}) {
    auto nb = neighbors(std_vertex(), p);
    ASSERT_EQ(nb.size(), static_cast<size_t>(p + 1));
    for (size_t i = 0; i < nb.size(); ++i) {
      EXPECT_EQ(distance(std_vertex(), nb[i], p), 1);
      for (size_t j = i + 1; j < nb.size(); ++j) EXPECT_EQ(distance(nb[i], nb[j], p), 2);
    }
  }
}

TEST(Tree, DistanceMatchesBreadthFirstSearch) {
  std::mt19937_64 rng(4);
  for (int p : {2, 3}) {
    auto B = ball_vertices(std_vertex(), 3, p);
    std::uniform_int_distribution<size_t> pick(0, B.size() - 1);
    for (int i = 0; i < 60; ++i) {
      const Vertex& v = B[pick(rng)];
      const Vertex& w = B[pick(rng)];
      EXPECT_EQ(distance(v, w, p), bfs_distance(v, w, p, 6));
    }
  }
}

TEST(Tree, BallSizes) {
  for (int p : {2, 3, 5})
    for (int n = 0; n <= 3; ++n) {
      Region R = ball(std_vertex(), n, p);
      EXPECT_EQ(R.vertices.size(), ball_size_formula(n, p));
      EXPECT_EQ(R.edges.size() + 1, R.vertices.size());  // a finite subtree
      EXPECT_TRUE(R.closed());
    }
  EXPECT_EQ(ball_size_formula(1, 2), 4u);
  EXPECT_EQ(ball_size_formula(2, 3), 1u + 4u + 12u);
}

TEST(Tree, HalfTreeSizes) {
  for (int p : {2, 3}) {
    Edge e = std_edge(p);
    for (int n = 0; n <= 3; ++n) {
      size_t expect = 0, pw = 1;
      for (int k = 0; k <= n; ++k, pw *= p) expect += pw;
      EXPECT_EQ(half_tree(e.v0, e, n, p).vertices.size(), expect);
      EXPECT_EQ(half_tree(e.v1, e, n, p).vertices.size(), expect);
    }
  }
  EXPECT_THROW(half_tree(apartment_vertex(3, 2), std_edge(2), 1, 2), std::invalid_argument);
}

TEST(Tree, SL2ActsByTypePreservingIsometries) {
  std::mt19937_64 rng(9);
  for (int p : {2, 3, 5}) {
    auto B = ball_vertices(std_vertex(), 2, p);
    for (int i = 0; i < 40; ++i) {
      Mat2 g = random_sl2(rng, p);
      ASSERT_EQ(g.det(), 1);
      const Vertex& v = B[i % B.size()];
      const Vertex& w = B[(7 * i + 3) % B.size()];
      EXPECT_EQ(distance(act(g, v, p), act(g, w, p), p), distance(v, w, p));
      EXPECT_EQ(orbit_type(act(g, v, p)), orbit_type(v));
    }
  }
}

TEST(Tree, StandardEdgeAndWeylElements) {
  for (int p : {2, 3, 5}) {
    Edge e = std_edge(p);
    EXPECT_EQ(orbit_type(e.v0), 0);
    EXPECT_EQ(orbit_type(e.v1), 1);
    EXPECT_EQ(act(weyl_s0(), e.v0, p), e.v0);
    EXPECT_EQ(act(weyl_s1(p), e.v1, p), e.v1);
    EXPECT_FALSE(act(weyl_s0(), e.v1, p) == e.v1);
    for (int n = 1; n <= 4; ++n) {
      OrbitReps r = orbit_reps_at_distance(n, p);
      EXPECT_EQ(distance(act(r.g0, e, p), e, p), n);
      EXPECT_EQ(distance(act(r.g1, e, p), e, p), n);
    }
  }
}

TEST(Tree, Inversions) {
  for (int p : {2, 3, 5}) {
    EXPECT_FALSE(inversion_check(GroupMode::SL2, p));
    EXPECT_TRUE(inversion_check(GroupMode::PGL2, p));
    EXPECT_FALSE(inversion_check(GroupMode::PGL2, p, true));
    Edge e = std_edge(p);
    SubEdge half{sub_vertex(e.v0), sub_midpoint(e.v0, e.v1)};
    EXPECT_FALSE(inverts(pgl2_inversion_witness(p), half, p));
  }
}

TEST(Tree, ConvexHullOfApartmentEnds) {
  int p = 3;
  auto hull = convex_hull({apartment_vertex(-2, p), apartment_vertex(2, p)}, p);
  EXPECT_EQ(hull.size(), 5u);
  auto g = geodesic(apartment_vertex(-2, p), apartment_vertex(2, p), p);
  EXPECT_EQ(g.size(), 5u);
}

TEST(Tree, VerifySuitePasses) {
  VerifyOptions o;
  for (const auto& c : verify_tree(o)) EXPECT_TRUE(c.pass) << c.id << " " << c.config << " " << c.detail;
}
