#pragma once

// The Bruhat-Tits tree of SL2(Q_p): vertices are homothety classes of
// Z_p-lattices in canonical Hermite form.  The standard edge is
// e = (v0, v1) with v0 = Z_p^2 and v1 = Z_p + pZ_p, so that its stabilizer
// is the Iwahori group of matrices with lower-left entry in pZ_p.

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bruhat/padic.hpp"

namespace bruhat {

using Vertex = LatticeForm;
using VertexHash = LatticeFormHash;

inline Vertex std_vertex() { return Vertex{}; }
inline Vertex vertex_of(const Mat2& basis, int p) { return lattice_canonical(basis, p); }
// w_k = diag(p^k, 1) Z_p^2.
inline Vertex apartment_vertex(int k, int p) { return vertex_of(Mat2::diag(qpow(p, k), 1), p); }
inline int orbit_type(const Vertex& v) { return (v.a + v.b) % 2; }

inline Vertex act(const Mat2& g, const Vertex& v, int p) { return lattice_canonical(g * v.basis(p), p); }

inline int distance(const Vertex& v, const Vertex& w, int p) {
  if (v == w) return 0;
  return elementary_divisor_exponents(v, w, p).first;
}

// The p+1 index-p sublattice classes, ordered by (a, b, u).
inline std::vector<Vertex> neighbors(const Vertex& v, int p) {
  Mat2 B = v.basis(p);
  std::vector<Vertex> out;
  out.reserve(p + 1);
  for (int k = 0; k < p; ++k) out.push_back(lattice_canonical(B * Mat2(p, k, 0, 1), p));
  out.push_back(lattice_canonical(B * Mat2(1, 0, 0, p), p));
  std::sort(out.begin(), out.end());
  return out;
}

// Oriented edge.  In SL2 mode the face labels are fixed by orbit type:
// d0 = v0 has type 0 and d1 = v1 has type 1.
struct Edge {
  Vertex v0, v1;
  friend bool operator==(const Edge& x, const Edge& y) { return x.v0 == y.v0 && x.v1 == y.v1; }
  friend auto operator<=>(const Edge& x, const Edge& y) {
    if (auto c = x.v0 <=> y.v0; c != 0) return c;
    return x.v1 <=> y.v1;
  }
  const Vertex& face(int i) const { return i == 0 ? v0 : v1; }
  bool contains(const Vertex& v) const { return v == v0 || v == v1; }
  std::string str() const { return "{" + v0.str() + "-" + v1.str() + "}"; }
};

struct EdgeHash {
  size_t operator()(const Edge& e) const noexcept {
    VertexHash h;
    return h(e.v0) * 31 + h(e.v1);
  }
};

// Orients {x, y} so that the type-0 vertex is d0.
inline Edge make_edge(const Vertex& x, const Vertex& y) {
  return orbit_type(x) == 0 ? Edge{x, y} : Edge{y, x};
}

inline Edge std_edge(int p) { return Edge{std_vertex(), vertex_of(Mat2::diag(1, p), p)}; }
// e_k = {w_k, w_{k-1}}; e_0 is the standard edge.
inline Edge apartment_edge(int k, int p) {
  return make_edge(apartment_vertex(k, p), apartment_vertex(k - 1, p));
}

// Action on oriented edges.  Face labels follow the images of the faces, so
// the action is equivariant by construction; in SL2 mode the labels also
// agree with make_edge because types are preserved.
inline Edge act(const Mat2& g, const Edge& e, int p) { return Edge{act(g, e.v0, p), act(g, e.v1, p)}; }

// Reflections generating the extended Weyl group.
inline Mat2 weyl_s0() { return Mat2(0, 1, -1, 0); }
inline Mat2 weyl_s1(int p) { return Mat2(0, -qpow(p, -1), p, 0); }
// Normalizes the Iwahori group and swaps v0, v1; determinant -p.
inline Mat2 iwahori_swap(int p) { return Mat2(0, 1, p, 0); }

// Alternating word of length n starting with s_first.
inline Mat2 alternating_word(int first, int n, int p) {
  Mat2 g;
  int s = first;
  for (int i = 0; i < n; ++i) {
    g = g * (s == 0 ? weyl_s0() : weyl_s1(p));
    s ^= 1;
  }
  return g;
}

// Representatives of the two orbits of the edge stabilizer on edges at
// distance n from the standard edge, taken in the standard apartment.
// g0 e lies beyond v1 and g1 e beyond v0, so the geodesic from d_i e to g_i e
// passes through e.
struct OrbitReps {
  Mat2 g0, g1;
};
inline OrbitReps orbit_reps_at_distance(int n, int p) {
  if (n < 1) throw std::invalid_argument("orbit_reps_at_distance needs n >= 1");
  return {alternating_word(1, n, p), alternating_word(0, n, p)};
}

// Vertices of the geodesic from v to w, both included.
inline std::vector<Vertex> geodesic(const Vertex& v, const Vertex& w, int p) {
  std::vector<Vertex> path{v};
  Vertex cur = v;
  int d = distance(v, w, p);
  while (d > 0) {
    for (const auto& n : neighbors(cur, p)) {
      if (distance(n, w, p) == d - 1) {
        cur = n;
        break;
      }
    }
    path.push_back(cur);
    --d;
  }
  return path;
}

// Vertex set of the smallest subtree containing S.
inline std::vector<Vertex> convex_hull(const std::vector<Vertex>& S, int p) {
  std::set<Vertex> out;
  if (S.empty()) return {};
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = i; j < S.size(); ++j)
      for (auto& v : geodesic(S[i], S[j], p)) out.insert(v);
  return {out.begin(), out.end()};
}

// Vertex-to-edge distance: distance to the nearer face.
inline int distance(const Vertex& v, const Edge& e, int p) {
  return std::min(distance(v, e.v0, p), distance(v, e.v1, p));
}
// Edge-to-edge distance: 0 for equal edges, otherwise one more than the
// least vertex distance.  Adjacent edges are at distance 1.
inline int distance(const Edge& e, const Edge& f, int p) {
  if (e == f) return 0;
  int m = std::min({distance(e.v0, f.v0, p), distance(e.v0, f.v1, p), distance(e.v1, f.v0, p),
                    distance(e.v1, f.v1, p)});
  return m + 1;
}

// ---------------------------------------------------------------------------
// Regions

struct Region {
  std::vector<Vertex> vertices;  // sorted
  std::vector<Edge> edges;       // sorted
  bool has_vertex(const Vertex& v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }
  bool has_edge(const Edge& e) const { return std::binary_search(edges.begin(), edges.end(), e); }
  // Every face of every edge is present.
  bool closed() const {
    for (const auto& e : edges)
      if (!has_vertex(e.v0) || !has_vertex(e.v1)) return false;
    return true;
  }
};

inline std::vector<Vertex> ball_vertices(const Vertex& v, int n, int p) {
  std::set<Vertex> seen{v};
  std::vector<Vertex> frontier{v};
  for (int r = 0; r < n; ++r) {
    std::vector<Vertex> next;
    for (const auto& x : frontier)
      for (auto& y : neighbors(x, p))
        if (seen.insert(y).second) next.push_back(y);
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

// Edges of the subgraph induced on a vertex set.
inline std::vector<Edge> induced_edges(const std::vector<Vertex>& vs, int p) {
  std::set<Vertex> S(vs.begin(), vs.end());
  std::set<Edge> out;
  for (const auto& v : vs)
    for (auto& w : neighbors(v, p))
      if (S.count(w)) out.insert(make_edge(v, w));
  return {out.begin(), out.end()};
}

inline Region make_region(std::vector<Vertex> vs, std::vector<Edge> es) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  return Region{std::move(vs), std::move(es)};
}

// B_n(v) with its induced edges; 1 + (p+1)(p^n - 1)/(p - 1) vertices.
inline Region ball(const Vertex& v, int n, int p) {
  auto vs = ball_vertices(v, n, p);
  auto es = induced_edges(vs, p);
  return make_region(std::move(vs), std::move(es));
}

// Gamma^n_x(e): the component of x in X minus the open edge e, cut to B_n(x).
inline Region half_tree(const Vertex& x, const Edge& e, int n, int p) {
  if (!e.contains(x)) throw std::invalid_argument("half_tree: x must be a face of e");
  const Vertex& y = (e.v0 == x) ? e.v1 : e.v0;
  std::vector<Vertex> vs;
  for (auto& w : ball_vertices(x, n, p))
    if (distance(w, x, p) < distance(w, y, p)) vs.push_back(w);
  auto es = induced_edges(vs, p);
  return make_region(std::move(vs), std::move(es));
}

// E^n_x for a vertex: edges whose nearer face lies within distance n.
inline std::vector<Edge> edge_nbhd_edges(const Vertex& v, int n, int p) {
  return induced_edges(ball_vertices(v, n + 1, p), p);
}
// E^n_e: edges at edge distance at most n.
inline std::vector<Edge> edge_nbhd_edges(const Edge& e, int n, int p) {
  if (n == 0) return {e};
  auto b0 = ball_vertices(e.v0, n, p), b1 = ball_vertices(e.v1, n, p);
  b0.insert(b0.end(), b1.begin(), b1.end());
  std::sort(b0.begin(), b0.end());
  b0.erase(std::unique(b0.begin(), b0.end()), b0.end());
  return induced_edges(b0, p);
}

// Closes an edge set under faces.
inline Region with_faces(const std::vector<Edge>& es) {
  std::vector<Vertex> vs;
  for (const auto& e : es) {
    vs.push_back(e.v0);
    vs.push_back(e.v1);
  }
  return make_region(std::move(vs), es);
}

enum class RegionKind { Ball, HalfTree, EdgeNbhdVertex, EdgeNbhdEdge, Explicit };

struct SubtreeRegion {
  RegionKind kind = RegionKind::Explicit;
  Vertex center;  // ball / half-tree base / E^n_v
  Edge edge;      // half-tree edge / E^n_e
  int n = 0;
  Region explicit_sets;  // Explicit kind; may omit faces
};

inline Region region_resolve(const SubtreeRegion& r, int p) {
  if (r.n < 0) throw std::invalid_argument("region radius must be nonnegative");
  switch (r.kind) {
    case RegionKind::Ball: return ball(r.center, r.n, p);
    case RegionKind::HalfTree: return half_tree(r.center, r.edge, r.n, p);
    case RegionKind::EdgeNbhdVertex: return with_faces(edge_nbhd_edges(r.center, r.n, p));
    case RegionKind::EdgeNbhdEdge: return with_faces(edge_nbhd_edges(r.edge, r.n, p));
    case RegionKind::Explicit: return make_region(r.explicit_sets.vertices, r.explicit_sets.edges);
  }
  return {};
}

inline size_t ball_size_formula(int n, int p) {
  if (n == 0) return 1;
  size_t pn = 1;
  for (int i = 0; i < n; ++i) pn *= static_cast<size_t>(p);
  return 1 + static_cast<size_t>(p + 1) * (pn - 1) / static_cast<size_t>(p - 1);
}

// DOT rendering; vertices labelled by (a,b,u) and orbit type.
inline std::string region_dot(const Region& R, const std::vector<Region>& highlights = {}) {
  std::ostringstream os;
  std::map<Vertex, int> id;
  for (const auto& v : R.vertices) id.emplace(v, static_cast<int>(id.size()));
  os << "graph region {\n";
  for (const auto& v : R.vertices) {
    int hl = -1;
    for (size_t i = 0; i < highlights.size(); ++i)
      if (highlights[i].has_vertex(v)) {
        hl = static_cast<int>(i);
        break;
      }
    os << "  n" << id[v] << " [label=\"" << v.str() << " t" << orbit_type(v) << "\"";
    if (hl >= 0) os << ", style=filled, fillcolor=\"/set19/" << (hl % 9) + 1 << "\"";
    os << "];\n";
  }
  for (const auto& e : R.edges) {
    if (!id.count(e.v0) || !id.count(e.v1)) continue;
    os << "  n" << id[e.v0] << " -- n" << id[e.v1] << ";\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Inversions and barycentric subdivision

enum class GroupMode { SL2, PGL2 };

// Does g reverse the orientation of e?
inline bool inverts(const Mat2& g, const Edge& e, int p) {
  Edge f = act(g, e, p);
  return f.v0 == e.v1 && f.v1 == e.v0;
}

// Vertex of the barycentric subdivision: an old vertex or an edge midpoint.
struct SubVertex {
  bool midpoint = false;
  Vertex v;         // old vertex
  Vertex m0, m1;    // midpoint of the unordered edge {m0, m1}, m0 < m1
  friend bool operator==(const SubVertex& x, const SubVertex& y) {
    if (x.midpoint != y.midpoint) return false;
    return x.midpoint ? (x.m0 == y.m0 && x.m1 == y.m1) : x.v == y.v;
  }
};
inline SubVertex sub_vertex(const Vertex& v) { return SubVertex{false, v, {}, {}}; }
inline SubVertex sub_midpoint(const Vertex& x, const Vertex& y) {
  return x < y ? SubVertex{true, {}, x, y} : SubVertex{true, {}, y, x};
}
inline SubVertex act(const Mat2& g, const SubVertex& s, int p) {
  if (!s.midpoint) return sub_vertex(act(g, s.v, p));
  return sub_midpoint(act(g, s.m0, p), act(g, s.m1, p));
}
// Oriented edge of the subdivision: (old vertex, midpoint).
struct SubEdge {
  SubVertex s0, s1;
};
inline SubEdge act(const Mat2& g, const SubEdge& e, int p) { return {act(g, e.s0, p), act(g, e.s1, p)}; }
inline bool inverts(const Mat2& g, const SubEdge& e, int p) {
  SubEdge f = act(g, e, p);
  return f.s0 == e.s1 && f.s1 == e.s0;
}

inline Mat2 pgl2_inversion_witness(int p) { return iwahori_swap(p); }

// Whether some group element inverts an edge.  SL2 preserves orbit type, and
// on the subdivision every element maps old vertices to old vertices, so
// both of those answers are structural; PGL2 is settled by the witness.
inline bool inversion_check(GroupMode mode, int p, bool subdivided = false) {
  if (mode == GroupMode::SL2) return false;
  if (subdivided) return false;
  return inverts(pgl2_inversion_witness(p), std_edge(p), p);
}

}  // namespace bruhat
