#pragma once

// Orbits of finitely generated groups on tuples of tree vertices, with
// transversals and Schreier generators.  A compact open subgroup H acts on
// tuples through any dense finitely generated subgroup, so orbits and point
// stabilizers computed here are exact for H itself: the stabilizer of a
// point is open, hence the dense subgroup meets it densely.

#include <deque>
#include <unordered_map>
#include <vector>

#include "bruhat/errors.hpp"
#include "bruhat/tree.hpp"

namespace bruhat {

using Tuple = std::vector<Vertex>;

struct TupleHash {
  size_t operator()(const Tuple& t) const noexcept {
    size_t h = 0x345678;
    VertexHash vh;
    for (const auto& v : t) h = h * 1000003 ^ vh(v);
    return h;
  }
};

inline Tuple act(const Mat2& g, const Tuple& t, int p) {
  Tuple out;
  out.reserve(t.size());
  for (const auto& v : t) out.push_back(act(g, v, p));
  return out;
}

struct Orbit {
  std::vector<Tuple> points;            // points[0] is the base point
  std::vector<Mat2> transversal;        // transversal[i] * base == points[i]
  std::vector<std::vector<int>> image;  // image[i][s] = index of gens[s] * points[i]
  std::unordered_map<Tuple, int, TupleHash> index;

  size_t size() const { return points.size(); }
  int find(const Tuple& t) const {
    auto it = index.find(t);
    return it == index.end() ? -1 : it->second;
  }
};

inline constexpr size_t kDefaultOrbitLimit = 2'000'000;

// Breadth-first orbit of `base` under the group generated by `gens`.
inline Orbit orbit(const std::vector<Mat2>& gens, const Tuple& base, int p,
                   size_t limit = kDefaultOrbitLimit) {
  Orbit O;
  O.points.push_back(base);
  O.transversal.push_back(Mat2::identity());
  O.index.emplace(base, 0);
  for (size_t i = 0; i < O.points.size(); ++i) {
    std::vector<int> img(gens.size());
    for (size_t s = 0; s < gens.size(); ++s) {
      Tuple t = act(gens[s], O.points[i], p);
      auto [it, fresh] = O.index.emplace(t, static_cast<int>(O.points.size()));
      if (fresh) {
        if (O.points.size() >= limit) throw BudgetExceeded("orbit exceeds limit");
        O.points.push_back(std::move(t));
        O.transversal.push_back(gens[s] * O.transversal[i]);
      }
      img[s] = it->second;
    }
    O.image.push_back(std::move(img));
  }
  return O;
}

// Schreier generators of the stabilizer of the base point.  Trivial ones
// (tree edges of the breadth-first search) are dropped.
inline std::vector<Mat2> schreier_generators(const Orbit& O, const std::vector<Mat2>& gens) {
  std::vector<Mat2> out;
  std::vector<Mat2> tinv;
  tinv.reserve(O.size());
  for (const auto& t : O.transversal) tinv.push_back(t.inverse());
  for (size_t i = 0; i < O.size(); ++i) {
    for (size_t s = 0; s < gens.size(); ++s) {
      int j = O.image[i][s];
      Mat2 h = gens[s] * O.transversal[i];
      if (h == O.transversal[j]) continue;
      Mat2 x = tinv[j] * h;
      if (x.is_identity()) continue;
      out.push_back(std::move(x));
    }
  }
  return out;
}

// Orbits of `gens` on a finite invariant set; returns the orbit id of each
// point and the first point of each orbit, in input order.
struct OrbitPartition {
  std::vector<int> orbit_of;
  std::vector<int> reps;
};

inline OrbitPartition partition_orbits(const std::vector<Tuple>& pts, const std::vector<Mat2>& gens, int p) {
  std::unordered_map<Tuple, int, TupleHash> idx;
  for (size_t i = 0; i < pts.size(); ++i) idx.emplace(pts[i], static_cast<int>(i));
  OrbitPartition P;
  P.orbit_of.assign(pts.size(), -1);
  for (size_t i = 0; i < pts.size(); ++i) {
    if (P.orbit_of[i] >= 0) continue;
    int id = static_cast<int>(P.reps.size());
    P.reps.push_back(static_cast<int>(i));
    std::deque<int> q{static_cast<int>(i)};
    P.orbit_of[i] = id;
    while (!q.empty()) {
      int k = q.front();
      q.pop_front();
      for (const auto& g : gens) {
        auto it = idx.find(act(g, pts[k], p));
        if (it == idx.end()) throw std::logic_error("partition_orbits: set is not invariant");
        if (P.orbit_of[it->second] < 0) {
          P.orbit_of[it->second] = id;
          q.push_back(it->second);
        }
      }
    }
  }
  return P;
}

}  // namespace bruhat
