#pragma once

// Compact open subgroups as valuation patterns.  A pattern is a list of
// constraints (bounds, c); g is a member iff every h = c^{-1} g c has entry
// valuations at least the bounds.  Constraints whose conjugator is monomial
// are folded into a single unconjugated bound vector.
//
// Every pattern built here is also the pointwise fixer of a finite vertex
// set, which gives a second, independent membership route.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bruhat/orbit.hpp"
#include "bruhat/tree.hpp"

namespace bruhat {

// Entry order: 11, 12, 21, 22.
using Bounds = std::array<int, 4>;

struct Constraint {
  Bounds lo{0, 0, 0, 0};
  std::optional<Mat2> conj;  // absent means the identity

  bool admits(const Mat2& g, int p) const {
    if (!conj) {
      for (int i = 0; i < 4; ++i)
        if (!valuation(g.e[i], p).at_least(lo[i])) return false;
      return true;
    }
    Mat2 h = conj->inverse() * g * (*conj);
    for (int i = 0; i < 4; ++i)
      if (!valuation(h.e[i], p).at_least(lo[i])) return false;
    return true;
  }
};

// If c is monomial, rewrite the constraint against the identity conjugator.
inline std::optional<Bounds> fold_monomial(const Constraint& k, int p) {
  if (!k.conj) return k.lo;
  const Mat2& c = *k.conj;
  Bounds lo = k.lo;
  mpq_class x, y;
  if (c.b() == 0 && c.c() == 0) {
    x = c.a();
    y = c.d();
  } else if (c.a() == 0 && c.d() == 0) {
    // c = diag(x, y) * [[0,1],[1,0]]
    x = c.b();
    y = c.c();
    lo = Bounds{k.lo[3], k.lo[2], k.lo[1], k.lo[0]};
  } else {
    return std::nullopt;
  }
  int s = valuation(x, p).value() - valuation(y, p).value();
  return Bounds{lo[0], lo[1] + s, lo[2] - s, lo[3]};
}

class ValuationPattern {
 public:
  ValuationPattern() = default;

  std::string name;
  int p = 2;
  std::vector<Constraint> constraints;
  // Informational: both diagonal entries of c^{-1} g c are units.  Checked by
  // membership when set; automatic when bounds satisfy b12 + b21 >= 1.
  std::array<bool, 2> diag_units{false, false};
  std::optional<std::vector<Vertex>> fixset;  // group = pointwise fixer in SL2
  std::vector<Mat2> gens;                     // topological generators, when known

  bool contains(const Mat2& g) const {
    for (const auto& k : constraints)
      if (!k.admits(g, p)) return false;
    if (diag_units[0] || diag_units[1]) {
      Mat2 h = constraints.empty() || !constraints[0].conj
                   ? g
                   : constraints[0].conj->inverse() * g * (*constraints[0].conj);
      if (diag_units[0] && valuation(h.a(), p) != Valuation(0)) return false;
      if (diag_units[1] && valuation(h.d(), p) != Valuation(0)) return false;
    }
    return true;
  }

  // Second membership route: does g fix every vertex of the fixed set?
  bool fixes_fixset(const Mat2& g) const {
    if (!fixset) throw std::logic_error("pattern has no fixed-vertex description");
    for (const auto& v : *fixset)
      if (!(act(g, v, p) == v)) return false;
    return true;
  }

  // The single unconjugated bound vector, when all constraints fold.
  std::optional<Bounds> standard_bounds() const {
    if (constraints.size() != 1 || constraints[0].conj) return std::nullopt;
    return constraints[0].lo;
  }

  // Brings monomial constraints to the identity conjugator and merges
  // constraints with equal conjugators by entrywise max.
  void normalize() {
    std::vector<Constraint> out;
    for (const auto& k : constraints) {
      Constraint n = k;
      if (auto f = fold_monomial(k, p)) {
        n.lo = *f;
        n.conj.reset();
      }
      bool merged = false;
      for (auto& o : out) {
        bool same = (!o.conj && !n.conj) || (o.conj && n.conj && *o.conj == *n.conj);
        if (same) {
          for (int i = 0; i < 4; ++i) o.lo[i] = std::max(o.lo[i], n.lo[i]);
          merged = true;
          break;
        }
      }
      if (!merged) out.push_back(n);
    }
    // Unconjugated constraint first, for deterministic output.
    std::stable_sort(out.begin(), out.end(),
                     [](const Constraint& a, const Constraint& b) { return !a.conj && b.conj; });
    constraints = std::move(out);
  }

  // Validity of an unconjugated bound vector as a group: diagonal bounds 0
  // and b12 + b21 >= 0.
  static bool valid_group_bounds(const Bounds& lo) { return lo[0] == 0 && lo[3] == 0 && lo[1] + lo[2] >= 0; }

  // Least m with p^m M_2(Z_p) inside every constraint lattice c L c^{-1};
  // membership of a level-m residue class is then decided by any lift.
  int determinacy_level() const {
    int m = 0;
    for (const auto& k : constraints) {
      for (int ij = 0; ij < 4; ++ij) {
        Mat2 E(0, 0, 0, 0);
        E.e[ij] = 1;
        Mat2 h = k.conj ? k.conj->inverse() * E * (*k.conj) : E;
        for (int t = 0; t < 4; ++t) {
          Valuation v = valuation(h.e[t], p);
          if (v.is_infinite()) continue;
          m = std::max(m, k.lo[t] - v.value());
        }
      }
    }
    return m;
  }

  // Whether the group lies in SL2(Z_p).
  bool inside_k0() const {
    for (const auto& k : constraints)
      if (!k.conj && k.lo[0] >= 0 && k.lo[1] >= 0 && k.lo[2] >= 0 && k.lo[3] >= 0) return true;
    if (fixset)
      for (const auto& v : *fixset)
        if (v == std_vertex()) return true;
    return false;
  }

  std::string describe() const {
    std::string s = name.empty() ? "pattern" : name;
    s += " {";
    for (size_t i = 0; i < constraints.size(); ++i) {
      const auto& k = constraints[i];
      if (i) s += "; ";
      s += "[" + std::to_string(k.lo[0]) + "," + std::to_string(k.lo[1]) + "," + std::to_string(k.lo[2]) +
           "," + std::to_string(k.lo[3]) + "]";
      if (k.conj) s += "^" + k.conj->str();
    }
    return s + "}";
  }
};

// Generators of the diagonal compact torus T0 = Z_p^x.
inline int least_primitive_root_mod_p2(int p) {
  long q = static_cast<long>(p) * p;
  long phi = static_cast<long>(p) * (p - 1);
  for (int r = 2; r < q; ++r) {
    if (r % p == 0) continue;
    bool prim = true;
    for (long d = 2; d <= phi; ++d) {
      if (phi % d != 0) continue;
      bool prime_d = true;
      for (long e = 2; e * e <= d; ++e)
        if (d % e == 0) prime_d = false;
      if (!prime_d) continue;
      mpz_class x;
      mpz_class base = r, mod = q, ex = phi / d;
      mpz_powm(x.get_mpz_t(), base.get_mpz_t(), ex.get_mpz_t(), mod.get_mpz_t());
      if (x == 1) prim = false;
    }
    if (prim) return r;
  }
  throw std::logic_error("no primitive root");
}

inline std::vector<Mat2> torus_generators(int p) {
  if (p == 2) return {Mat2::diag(-1, -1), Mat2::diag(5, mpq_class(1, 5))};
  int r = least_primitive_root_mod_p2(p);
  return {Mat2::diag(r, mpq_class(1, r))};
}

// Pointwise fixer of the apartment segment [w_{-gamma}, w_beta]:
// upper-right >= beta, lower-left >= gamma, diagonal integral.
inline ValuationPattern std_pattern(int beta, int gamma, int p, std::string name = "") {
  if (beta + gamma < 0) throw std::invalid_argument("std_pattern needs beta + gamma >= 0");
  ValuationPattern P;
  P.p = p;
  P.name = name.empty() ? "P(" + std::to_string(beta) + "," + std::to_string(gamma) + ")" : name;
  P.constraints.push_back(Constraint{Bounds{0, beta, gamma, 0}, std::nullopt});
  bool units = beta + gamma >= 1;
  P.diag_units = {units, units};
  // The whole segment, so that every vertex it passes through is listed.
  std::vector<Vertex> seg;
  for (int k = -gamma; k <= beta; ++k) seg.push_back(apartment_vertex(k, p));
  std::sort(seg.begin(), seg.end());
  P.fixset = seg;
  P.gens = {Mat2::upper(qpow(p, beta)), Mat2::lower(qpow(p, gamma))};
  for (auto& t : torus_generators(p)) P.gens.push_back(t);
  return P;
}

inline ValuationPattern pattern_K0(int p) { return std_pattern(0, 0, p, "K0"); }
inline ValuationPattern pattern_K1(int p) { return std_pattern(-1, 1, p, "K1"); }
inline ValuationPattern pattern_I(int p) { return std_pattern(0, 1, p, "I"); }

// g P g^{-1}.
inline ValuationPattern pattern_conjugate(const ValuationPattern& P, const Mat2& g) {
  ValuationPattern R;
  R.p = P.p;
  R.name = P.name + "^g";
  R.diag_units = {false, false};
  for (const auto& k : P.constraints) {
    Constraint n = k;
    n.conj = k.conj ? g * (*k.conj) : g;
    R.constraints.push_back(n);
  }
  if (P.fixset) {
    std::vector<Vertex> fs;
    for (const auto& v : *P.fixset) fs.push_back(act(g, v, P.p));
    R.fixset = fs;
  }
  Mat2 gi = g.inverse();
  for (const auto& x : P.gens) R.gens.push_back(g * x * gi);
  R.normalize();
  if (auto b = R.standard_bounds(); b && (*b)[1] + (*b)[2] >= 1) R.diag_units = {true, true};
  return R;
}

inline ValuationPattern pattern_intersect(const ValuationPattern& A, const ValuationPattern& B) {
  if (A.p != B.p) throw std::invalid_argument("patterns over different primes");
  ValuationPattern R;
  R.p = A.p;
  R.name = A.name + "&" + B.name;
  R.constraints = A.constraints;
  R.constraints.insert(R.constraints.end(), B.constraints.begin(), B.constraints.end());
  R.normalize();
  if (A.fixset && B.fixset) {
    std::vector<Vertex> fs = *A.fixset;
    fs.insert(fs.end(), B.fixset->begin(), B.fixset->end());
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    R.fixset = fs;
  }
  if (auto b = R.standard_bounds(); b && (*b)[1] + (*b)[2] >= 1) R.diag_units = {true, true};
  // Generators of the intersection are not known symbolically; see
  // intersect_with_generators.
  return R;
}

// A intersect B with generators, computed as the stabilizer in A of B's
// fixed set.  Requires generators on A and a fixed set on B.
inline ValuationPattern intersect_with_generators(const ValuationPattern& A, const ValuationPattern& B,
                                                  size_t limit = kDefaultOrbitLimit) {
  ValuationPattern R = pattern_intersect(A, B);
  if (A.gens.empty() || !B.fixset) throw std::logic_error("intersect_with_generators: missing data");
  Orbit O = orbit(A.gens, *B.fixset, A.p, limit);
  R.gens = schreier_generators(O, A.gens);
  if (R.gens.empty()) R.gens.push_back(Mat2::identity());
  return R;
}

// An element of SL2(Q_p) mapping the standard vertex of the same type to v.
inline Mat2 element_to_vertex(const Vertex& v, int p) {
  Mat2 B = v.basis(p);
  int s = v.a + v.b;
  if (s % 2 == 0) return qpow(p, -s / 2) * B;
  return qpow(p, -(s - 1) / 2) * (B * Mat2::diag(1, qpow(p, -1)));
}

// An element of SL2(Q_p) mapping the standard edge to e.
inline Mat2 element_to_edge(const Edge& e, int p) {
  Mat2 g0 = element_to_vertex(e.v0, p);
  Vertex target = act(g0.inverse(), e.v1, p);
  Edge se = std_edge(p);
  std::vector<Mat2> cands{Mat2::identity()};
  for (int k = 0; k < p; ++k) cands.push_back(Mat2(k, -1, 1, 0));
  for (const auto& k : cands)
    if (act(k, se.v1, p) == target) return g0 * k;
  throw std::invalid_argument("element_to_edge: not an edge");
}

inline ValuationPattern stabilizer(const Vertex& v, int p) {
  Mat2 g = element_to_vertex(v, p);
  ValuationPattern P = pattern_conjugate(orbit_type(v) == 0 ? pattern_K0(p) : pattern_K1(p), g);
  P.name = "G_" + v.str();
  P.fixset = std::vector<Vertex>{v};
  return P;
}

inline ValuationPattern stabilizer(const Edge& e, int p) {
  Mat2 g = element_to_edge(e, p);
  ValuationPattern P = pattern_conjugate(pattern_I(p), g);
  P.name = "G_" + e.str();
  std::vector<Vertex> fs{e.v0, e.v1};
  std::sort(fs.begin(), fs.end());
  P.fixset = fs;
  return P;
}

// g = u t ubar with u upper unipotent, t diagonal, ubar lower unipotent, each
// in J.  Needs both diagonal entries of g to be units.
struct IwahoriFactors {
  Mat2 upper, torus, lower;
};

inline IwahoriFactors iwahori_factor(const Mat2& g, const ValuationPattern& J) {
  int p = J.p;
  if (!J.contains(g)) throw NotFactorizable("element is not in the pattern");
  if (valuation(g.a(), p) != Valuation(0) || valuation(g.d(), p) != Valuation(0))
    throw NotFactorizable("diagonal entries must be units");
  if (g.det() != 1) throw NotFactorizable("determinant must be 1");
  IwahoriFactors f;
  f.upper = Mat2::upper(g.b() / g.d());
  f.torus = Mat2::diag(1 / g.d(), g.d());
  f.lower = Mat2::lower(g.c() / g.d());
  for (const Mat2* x : {&f.upper, &f.torus, &f.lower})
    if (!J.contains(*x)) throw NotFactorizable("factor leaves the pattern");
  return f;
}

}  // namespace bruhat
