#pragma once

// Two-term complexes  (+) M(e) -> (+) M(v)  on finite regions of the tree,
// for M the left Kan extension from the standard edge of V = ind_H^I rho.
// Basis vectors of V are the translates l * S of the fixed set S of H
// (l in I); a translate h * S determines its edge h * e, so the same tuple
// labels a basis vector of M(h e) and of M(v) for each face v of h e.

#include <map>

#include "bruhat/mackey.hpp"

namespace bruhat {

// Exact rank over Q of a sparse matrix given by columns.
inline long sparse_rank(std::vector<std::map<int, mpq_class>> cols) {
  std::map<int, std::map<int, mpq_class>> pivots;  // pivot row -> reduced column
  long rank = 0;
  for (auto& c : cols) {
    while (!c.empty()) {
      int r = c.begin()->first;
      auto it = pivots.find(r);
      if (it == pivots.end()) {
        pivots.emplace(r, std::move(c));
        ++rank;
        break;
      }
      mpq_class f = c.begin()->second / it->second.at(r);
      for (const auto& [row, v] : it->second) {
        mpq_class& x = c[row];
        x -= f * v;
        if (x == 0) c.erase(row);
      }
    }
  }
  return rank;
}

// Lan from the standard edge of V = ind_H^I rho, H the pointwise fixer of a
// vertex set containing both faces of e.
class EdgeModule {
 public:
  EdgeModule(InducingDatum V, int p) : V_(std::move(V)), p_(p) {
    if (!V_.H.fixset) throw IncompatibleAssignment("inducing subgroup needs a fixed set");
    base_ = *V_.H.fixset;
    Edge e = std_edge(p);
    auto pos = [&](const Vertex& v) {
      auto it = std::find(base_.begin(), base_.end(), v);
      if (it == base_.end()) throw IncompatibleAssignment("inducing subgroup does not fix the standard edge");
      return static_cast<int>(it - base_.begin());
    };
    i0_ = pos(e.v0);
    i1_ = pos(e.v1);
    cosets_ = orbit(pattern_I(p).gens, base_, p);
  }

  int prime() const { return p_; }
  size_t dim_V() const { return cosets_.size(); }
  const InducingDatum& datum() const { return V_; }

  Edge edge_of(const Tuple& t) const { return Edge{t[i0_], t[i1_]}; }

  // Basis of M(f) with frames h (tuple = h * base).
  std::vector<std::pair<Tuple, Mat2>> fiber(const Edge& f) const {
    Mat2 g = element_to_edge(f, p_);
    std::vector<std::pair<Tuple, Mat2>> out;
    for (size_t i = 0; i < cosets_.size(); ++i) {
      Mat2 h = g * cosets_.transversal[i];
      out.push_back({act(h, base_, p_), h});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  // The p + 1 edges through v.
  std::vector<Edge> star(const Vertex& v) const {
    std::vector<Edge> out;
    for (const auto& w : neighbors(v, p_)) out.push_back(make_edge(v, w));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  InducingDatum V_;
  int p_;
  Tuple base_;
  int i0_ = 0, i1_ = 1;
  Orbit cosets_;
};

// Summands of the Kan extension at a target simplex.  Every edge of the
// tree is a G-translate of e and the stabilizer of a vertex is transitive on
// the edges through it, so there is always exactly one summand.
struct LanSummand {
  Mat2 conj;              // target's summand is ind_{(H^conj)}^{G_y} of V^conj
  std::string inducing;   // description of the inducing subgroup at the target
  size_t index = 1;       // [G_y : G_{conj e}]
};
struct LanValue {
  std::vector<LanSummand> summands;
  size_t dim = 0;
};

inline LanValue lan_evaluate(const EdgeModule& M, const Vertex& y) {
  int p = M.prime();
  Edge f = M.star(y).front();
  Mat2 g = element_to_edge(f, p);
  LanValue r;
  r.summands.push_back({g, stabilizer(f, p).describe(), static_cast<size_t>(p + 1)});
  r.dim = static_cast<size_t>(p + 1) * M.dim_V();
  return r;
}
inline LanValue lan_evaluate(const EdgeModule& M, const Edge& y) {
  Mat2 g = element_to_edge(y, M.prime());
  LanValue r;
  r.summands.push_back({g, pattern_conjugate(M.datum().H, g).describe(), 1});
  r.dim = M.dim_V();
  return r;
}

struct TwoTermComplex {
  std::vector<std::pair<Edge, Tuple>> basis1;
  std::vector<std::pair<Vertex, Tuple>> basis0;
  std::vector<Mat2> frame1;  // frame of basis1[j]
  std::vector<std::map<int, int>> columns;  // column j: row -> coefficient
  long rank = 0;
  long h0() const { return static_cast<long>(basis0.size()) - rank; }
  long h1() const { return static_cast<long>(basis1.size()) - rank; }
};

inline long complex_rank(const TwoTermComplex& C, int sign0 = 1) {
  std::vector<std::map<int, mpq_class>> cols;
  for (const auto& c : C.columns) {
    std::map<int, mpq_class> q;
    for (const auto& [r, v] : c) q[r] = mpq_class(v);
    cols.push_back(std::move(q));
  }
  if (sign0 < 0)
    for (auto& c : cols)
      for (auto& [r, v] : c) v = -v;
  return sparse_rank(std::move(cols));
}

// Differential d0 - d1; faces outside the region are dropped.
inline TwoTermComplex assemble_complex(const EdgeModule& M, const Region& R) {
  TwoTermComplex C;
  std::map<std::pair<Vertex, Tuple>, int> row;
  for (const auto& v : R.vertices)
    for (const auto& f : M.star(v))
      for (auto& [t, h] : M.fiber(f)) {
        row.emplace(std::make_pair(v, t), static_cast<int>(C.basis0.size()));
        C.basis0.push_back({v, t});
      }
  for (const auto& f : R.edges)
    for (auto& [t, h] : M.fiber(f)) {
      std::map<int, int> col;
      for (int i = 0; i < 2; ++i) {
        auto it = row.find({f.face(i), t});
        if (it != row.end()) col[it->second] += i == 0 ? 1 : -1;
      }
      C.basis1.push_back({f, t});
      C.frame1.push_back(h);
      C.columns.push_back(std::move(col));
    }
  C.rank = complex_rank(C);
  return C;
}

// Root-twisted monomial action of y on a basis: index -> (index, twist).
// Twist of h*S -> y*h*S is rho(h'^-1 y h) for the target's frame h'.
using MonomialAction = std::vector<std::pair<int, Root>>;

// Checks d A1 = A0 d for y preserving the region.  Returns false when y does
// not preserve the region (nothing to check); throws IncompatibleAssignment
// when the assignment's structure maps are not equivariant.
inline bool check_equivariance(const EdgeModule& M, const Region& R, const TwoTermComplex& C, const Mat2& y) {
  int p = M.prime();
  for (const auto& v : R.vertices)
    if (!R.has_vertex(act(y, v, p))) return false;
  for (const auto& e : R.edges)
    if (!R.has_edge(act(y, e, p))) return false;

  std::map<Tuple, std::pair<Mat2, int>> frame_of;  // tuple -> (frame, basis1 index)
  for (size_t j = 0; j < C.basis1.size(); ++j) frame_of.emplace(C.basis1[j].second, std::make_pair(C.frame1[j], j));
  auto frame = [&](const Tuple& t) {
    auto it = frame_of.find(t);
    if (it != frame_of.end()) return it->second.first;
    Edge f = M.edge_of(t);
    for (auto& [u, h] : M.fiber(f))
      if (u == t) {
        frame_of.emplace(t, std::make_pair(h, -1));
        return h;
      }
    throw IncompatibleAssignment("tuple without a frame");
  };
  const auto& V = M.datum();
  auto twist = [&](const Tuple& t, const Tuple& yt) {
    Mat2 h = frame(t), h2 = frame(yt);
    Mat2 z = h2.inverse() * y * h;
    if (!V.H.contains(z)) throw IncompatibleAssignment("frame change leaves the inducing subgroup");
    return V.rho(z);
  };

  std::map<std::pair<Vertex, Tuple>, int> row;
  for (size_t i = 0; i < C.basis0.size(); ++i) row.emplace(C.basis0[i], static_cast<int>(i));
  std::map<std::pair<Edge, Tuple>, int> col;
  for (size_t j = 0; j < C.basis1.size(); ++j) col.emplace(C.basis1[j], static_cast<int>(j));

  // Sparse vectors with root-of-unity coefficients: (index, root) -> count.
  using Vec = std::map<std::pair<int, std::pair<long, long>>, int>;
  auto add = [](Vec& v, int i, const Root& r, int c) {
    auto key = std::make_pair(i, std::make_pair(r.k, r.N));
    if ((v[key] += c) == 0) v.erase(key);
  };
  for (size_t j = 0; j < C.basis1.size(); ++j) {
    const auto& [f, t] = C.basis1[j];
    Tuple yt = act(y, t, p);
    Root tw = twist(t, yt);
    // d(A1 b_j)
    Vec lhs;
    int j2 = col.at({act(y, f, p), yt});
    for (const auto& [r, c] : C.columns[j2]) add(lhs, r, tw, c);
    // A0(d b_j)
    Vec rhs;
    for (const auto& [r, c] : C.columns[j]) {
      const auto& [v, u] = C.basis0[r];
      int r2 = row.at({act(y, v, p), act(y, u, p)});
      add(rhs, r2, twist(u, act(y, u, p)), c);
    }
    if (lhs != rhs) throw IncompatibleAssignment("differential is not equivariant");
  }
  return true;
}

// Restriction to a closed subregion Y of X: degreewise inclusion of bases,
// differential compatibility, and quotient supported off Y.
struct FibseqReport {
  bool injective = false;
  bool subcomplex = false;
  bool quotient_off_Y = false;
  long quotient_dim0 = 0, quotient_dim1 = 0;
  bool pass() const { return injective && subcomplex && quotient_off_Y; }
};

inline FibseqReport fibseq_check(const EdgeModule& M, const Region& Y, const Region& X) {
  FibseqReport r;
  TwoTermComplex CY = assemble_complex(M, Y), CX = assemble_complex(M, X);
  std::map<std::pair<Vertex, Tuple>, int> rowX;
  for (size_t i = 0; i < CX.basis0.size(); ++i) rowX.emplace(CX.basis0[i], static_cast<int>(i));
  std::map<std::pair<Edge, Tuple>, int> colX;
  for (size_t j = 0; j < CX.basis1.size(); ++j) colX.emplace(CX.basis1[j], static_cast<int>(j));
  r.injective = true;
  std::vector<int> rowmap;
  for (const auto& b : CY.basis0) {
    auto it = rowX.find(b);
    if (it == rowX.end()) r.injective = false;
    rowmap.push_back(it == rowX.end() ? -1 : it->second);
  }
  r.subcomplex = r.injective;
  for (size_t j = 0; j < CY.basis1.size() && r.injective; ++j) {
    auto it = colX.find(CY.basis1[j]);
    if (it == colX.end()) {
      r.injective = r.subcomplex = false;
      break;
    }
    std::map<int, int> mapped;
    for (const auto& [row, c] : CY.columns[j]) mapped[rowmap[row]] = c;
    if (mapped != CX.columns[it->second]) r.subcomplex = false;
  }
  r.quotient_off_Y = true;
  for (const auto& [v, t] : CX.basis0)
    if (!Y.has_vertex(v)) ++r.quotient_dim0;
  for (const auto& [f, t] : CX.basis1)
    if (!Y.has_edge(f)) ++r.quotient_dim1;
  r.quotient_off_Y = r.quotient_dim0 == static_cast<long>(CX.basis0.size() - CY.basis0.size()) &&
                     r.quotient_dim1 == static_cast<long>(CX.basis1.size() - CY.basis1.size());
  return r;
}

// ---------------------------------------------------------------------------
// Quotients of the relative filtration: at step n the new edges are the
// I-orbits of g_0 e and g_1 e at distance n + 1, and the quotient complex
// is  ind_I pr ind_{I cap I^g_i} V^g_i  ->  ind_{K_i} pr ind_{K_i cap I^g_i} V^g_i.

struct FiltquotReport {
  int p = 0;
  int n = 0;
  std::string chi;
  std::array<std::string, 2> k_side, l_side;
  std::array<bool, 2> bounds_equal{false, false};  // folded-bound route
  std::array<bool, 2> hulls_equal{false, false};   // fixed-set route
  std::array<ProjindReport, 2> multiplicities;
  bool pass = false;
};

inline bool same_pattern_bounds(ValuationPattern A, ValuationPattern B) {
  A.normalize();
  B.normalize();
  auto a = A.standard_bounds(), b = B.standard_bounds();
  return a && b && *a == *b;
}

// K_i cap I^g = I cap I^g, both as folded bounds and as fixers of hulls.
inline std::pair<bool, bool> filtquot_identity(int i, int distance_to_edge, int p) {
  OrbitReps reps = orbit_reps_at_distance(distance_to_edge, p);
  Mat2 g = i == 0 ? reps.g0 : reps.g1;
  ValuationPattern K = i == 0 ? pattern_K0(p) : pattern_K1(p), L = pattern_I(p);
  ValuationPattern Lg = pattern_conjugate(L, g);
  bool bounds = same_pattern_bounds(pattern_intersect(K, Lg), pattern_intersect(L, Lg));
  std::vector<Vertex> a = *K.fixset, b = *L.fixset;
  a.insert(a.end(), Lg.fixset->begin(), Lg.fixset->end());
  b.insert(b.end(), Lg.fixset->begin(), Lg.fixset->end());
  bool hulls = convex_hull(a, p) == convex_hull(b, p);
  return {bounds, hulls};
}

inline FiltquotReport filtration_quotient_complex(const SmoothCharacter& chi, int n) {
  if (n < 0) throw std::invalid_argument("filtration index must be nonnegative");
  int p = chi.prime();
  FiltquotReport r;
  r.p = p;
  r.n = n;
  r.chi = chi.minimal().str();
  OrbitReps reps = orbit_reps_at_distance(n + 1, p);
  r.pass = true;
  for (int i = 0; i < 2; ++i) {
    Mat2 g = i == 0 ? reps.g0 : reps.g1;
    ValuationPattern K = i == 0 ? pattern_K0(p) : pattern_K1(p), L = pattern_I(p);
    ValuationPattern Lg = pattern_conjugate(L, g);
    r.k_side[i] = pattern_intersect(K, Lg).describe();
    r.l_side[i] = pattern_intersect(L, Lg).describe();
    auto [b, h] = filtquot_identity(i, n + 1, p);
    r.bounds_equal[i] = b;
    r.hulls_equal[i] = h;
    r.multiplicities[i] = projind_check(chi, i == 0 ? StdSimplex::V0 : StdSimplex::V1, n + 1);
    r.pass = r.pass && b && h && r.multiplicities[i].pass;
  }
  return r;
}

}  // namespace bruhat
