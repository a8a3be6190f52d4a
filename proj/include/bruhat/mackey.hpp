#pragma once

// Hom-space dimensions between induced characters of open compact
// subgroups.  Exact counts are read off from orbits on tuples of tree
// vertices: a subgroup that is the full pointwise fixer of a finite vertex
// set S has K/H identified with the K-orbit of S, and double cosets become
// orbits.  Finite-quotient counterparts live at the end.

#include <map>
#include <memory>

#include "bruhat/characters.hpp"
#include "bruhat/finite_group.hpp"

namespace bruhat {

using ElementChar = std::function<Root(const Mat2&)>;

// A character of an open compact subgroup.  H must be the pointwise fixer
// in SL2 of its fixed set and carry topological generators.
struct InducingDatum {
  ValuationPattern H;
  ElementChar rho;
  std::string label;
};

inline ElementChar upper_left_character(const SmoothCharacter& c) {
  return [c](const Mat2& g) { return c(g.a()); };
}

// (J, rho_chi), or (J, rho_{chi^-1}) which is rho_{chi^w} on J.
inline InducingDatum type_datum(const PrincipalSeriesType& t, bool inverse = false) {
  SmoothCharacter c = inverse ? t.chi.inverse() : t.chi;
  return {t.J, upper_left_character(c), inverse ? "rho_chi^-1" : "rho_chi"};
}

// (g H g^{-1}, y -> rho(g^{-1} y g)).
inline InducingDatum conjugate(const InducingDatum& d, const Mat2& g) {
  Mat2 gi = g.inverse();
  ElementChar r = d.rho;
  return {pattern_conjugate(d.H, g), [r, g, gi](const Mat2& y) { return r(gi * y * g); }, d.label + "^g"};
}

// A finite set Omega of tuples, invariant under an ambient compact group,
// each point framed as h * base.  The SL2-stabilizer of `base` carries
// `base_char`, so the stabilizer of h * base carries y -> base_char(h^-1 y h).
struct FramedSet {
  Tuple base;
  ElementChar base_char;
  std::vector<Tuple> points;
  std::vector<Mat2> frame;
  std::unordered_map<Tuple, int, TupleHash> index;
  size_t size() const { return points.size(); }
};

inline FramedSet framed_set(const std::vector<Mat2>& ambient, const Tuple& base, ElementChar base_char,
                            const std::vector<Mat2>& seeds, int p, size_t limit = kDefaultOrbitLimit) {
  FramedSet S{base, std::move(base_char), {}, {}, {}};
  for (const auto& h : seeds) {
    Tuple t = act(h, base, p);
    if (S.index.count(t)) continue;
    size_t start = S.points.size();
    S.index.emplace(t, static_cast<int>(start));
    S.points.push_back(std::move(t));
    S.frame.push_back(h);
    for (size_t i = start; i < S.points.size(); ++i)
      for (const auto& s : ambient) {
        Tuple u = act(s, S.points[i], p);
        auto [it, fresh] = S.index.emplace(u, static_cast<int>(S.points.size()));
        if (!fresh) continue;
        if (S.points.size() >= limit) throw BudgetExceeded("framed set exceeds limit");
        S.points.push_back(std::move(u));
        S.frame.push_back(s * S.frame[i]);
      }
  }
  return S;
}

struct HomCount {
  long dim = 0;
  size_t orbits = 0;  // number of double cosets
};

// dim Hom_H(rho, C[Omega] with the framed twist): one for each H-orbit whose
// point stabilizer carries matching characters.  Agreement is tested on
// Schreier generators, which generate a dense subgroup of the stabilizer.
inline HomCount hom_count(const InducingDatum& left, const FramedSet& S, int p, size_t limit = kDefaultOrbitLimit) {
  HomCount r;
  std::vector<char> seen(S.size(), 0);
  for (size_t i = 0; i < S.size(); ++i) {
    if (seen[i]) continue;
    ++r.orbits;
    Orbit O = orbit(left.H.gens, S.points[i], p, limit);
    for (const auto& t : O.points) {
      int j = S.index.count(t) ? S.index.at(t) : -1;
      if (j < 0) throw std::logic_error("hom_count: set is not invariant under the left group");
      seen[j] = 1;
    }
    const Mat2& h = S.frame[i];
    Mat2 hi = h.inverse();
    bool ok = true;
    for (const auto& y : schreier_generators(O, left.H.gens))
      if (!(left.rho(y) == S.base_char(hi * y * h))) {
        ok = false;
        break;
      }
    if (ok) ++r.dim;
  }
  return r;
}

// dim Hom_K(ind_{H1}^K rho1, ind_{H2}^K rho2), both subgroups inside K.
inline HomCount mackey_exact(const InducingDatum& d1, const InducingDatum& d2, const ValuationPattern& K,
                             size_t limit = kDefaultOrbitLimit) {
  if (!d2.H.fixset) throw std::logic_error("mackey_exact: right subgroup needs a fixed set");
  FramedSet S = framed_set(K.gens, *d2.H.fixset, d2.rho, {Mat2::identity()}, K.p, limit);
  return hom_count(d1, S, K.p, limit);
}

// ---------------------------------------------------------------------------
// Simplices of the standard edge and their block data.

enum class StdSimplex { V0, V1, Edge };

inline StdSimplex parse_simplex(const std::string& s) {
  if (s == "v0") return StdSimplex::V0;
  if (s == "v1") return StdSimplex::V1;
  if (s == "e") return StdSimplex::Edge;
  throw std::invalid_argument("simplex must be v0, v1 or e");
}
inline std::string simplex_name(StdSimplex x) {
  return x == StdSimplex::V0 ? "v0" : x == StdSimplex::V1 ? "v1" : "e";
}
inline ValuationPattern simplex_group(StdSimplex x, int p) {
  return x == StdSimplex::V0 ? pattern_K0(p) : x == StdSimplex::V1 ? pattern_K1(p) : pattern_I(p);
}

// The level-1 picture of a vertex group: K0 reduces directly, K1 after
// conjugation by the Iwahori swap w (w^-1 K1 w = K0).
inline Mat2 to_k0_picture(StdSimplex x, const Mat2& y, int p) {
  if (x != StdSimplex::V1) return y;
  Mat2 w = iwahori_swap(p);
  return w.inverse() * y * w;
}

// Block constituents of ind_I^K rho_chi when chi^2 = 1 and chi has
// conductor <= 1: the two irreducible constituents pi+, pi- of the
// principal series ind_B chi of SL2(F_p), B the upper Borel (image of I).
struct Level1Block {
  int p = 2;
  int M = 1;
  std::shared_ptr<const SL2Mod> Q;
  std::shared_ptr<FiniteGroup> G;
  std::vector<ClassFunction> pis;
};

inline std::shared_ptr<const Level1Block> level1_block(const SmoothCharacter& chi) {
  static std::map<std::pair<int, long>, std::shared_ptr<const Level1Block>> cache;
  int p = chi.prime();
  if (chi.conductor() > 1) throw std::invalid_argument("level-1 block needs conductor <= 1");
  SmoothCharacter c = chi.at_level(1);
  long key = c.generator_values().empty() ? 0 : c.generator_values()[0].k * 1000 + c.generator_values()[0].N;
  auto it = cache.find({p, key});
  if (it != cache.end()) return it->second;

  auto B = std::make_shared<Level1Block>();
  B->p = p;
  B->Q = std::make_shared<const SL2Mod>(p, 1);
  B->G = std::make_shared<FiniteGroup>(FiniteGroup::whole(B->Q));
  B->M = static_cast<int>(std::lcm(B->G->exponent(), c.exponent()));
  FiniteGroup Bor = FiniteGroup::image_of(B->Q, pattern_I(p));
  const SL2Mod* q = B->Q.get();
  CharFn chib = [c, q](std::uint32_t x) { return c.at_residue(q->unrank(x).e[0]); };
  ClassFunction ind = induced_character(Bor, chib, *B->G, B->M);
  std::vector<ClassFunction> irr = irreducible_characters(*B->G);
  for (const auto& f : irr) {
    ClassFunction g = widen(f, B->M);
    long mult = inner_product(ind, g);
    if (mult == 0) continue;
    if (mult != 1) throw std::logic_error("principal series is not multiplicity free");
    B->pis.push_back(std::move(g));
  }
  if (B->pis.size() != 2) throw std::logic_error("expected two constituents when chi^2 = 1");
  std::uint32_t u = B->Q->image(Mat2::upper(1));
  std::sort(B->pis.begin(), B->pis.end(), [u](const ClassFunction& a, const ClassFunction& b) {
    mpq_class da = a.degree().rational_value(), db = b.degree().rational_value();
    if (da != db) return da < db;
    return a.at(u).str() < b.at(u).str();
  });
  cache.emplace(std::make_pair(p, key), B);
  return B;
}

// Multiplicities of pi+, pi- in ind_A^K psi, A given by generators inside the
// vertex group x.  Both pi factor through the level-1 quotient, so the count
// is <pi|_A, psi>_A, which vanishes unless psi is trivial on the kernel of
// A -> A-bar, and otherwise is an average over A-bar.  Building psi-bar by
// breadth-first search along generator images detects exactly that kernel:
// it is consistent iff psi kills every relator.
inline std::vector<long> level1_multiplicities(const Level1Block& B, StdSimplex x, const std::vector<Mat2>& gens,
                                               const ElementChar& psi) {
  const SL2Mod& Q = *B.Q;
  std::vector<std::uint32_t> img;
  std::vector<Root> val;
  for (const auto& y : gens) {
    img.push_back(Q.image(to_k0_picture(x, y, B.p)));
    val.push_back(psi(y));
  }
  std::unordered_map<std::uint32_t, Root> bar{{Q.identity(), Root()}};
  std::vector<std::uint32_t> order{Q.identity()};
  for (size_t i = 0; i < order.size(); ++i) {
    std::uint32_t z = order[i];
    Root rz = bar.at(z);
    for (size_t s = 0; s < img.size(); ++s) {
      std::uint32_t y = Q.mul(z, img[s]);
      Root ry = rz * val[s];
      auto [it, fresh] = bar.emplace(y, ry);
      if (fresh) order.push_back(y);
      else if (!(it->second == ry)) return std::vector<long>(B.pis.size(), 0);
    }
  }
  std::vector<long> out;
  for (const auto& pi : B.pis) {
    Cyclotomic acc(B.M);
    for (const auto& [z, r] : bar) acc += pi.at(z) * Cyclotomic::root(B.M, -static_cast<int>(r.exponent_in(B.M)));
    acc = mpq_class(1, static_cast<unsigned long>(bar.size())) * acc;
    if (!acc.is_rational() || acc.rational_value().get_den() != 1) throw NonIntegral(acc.str());
    out.push_back(acc.rational_value().get_num().get_si());
  }
  return out;
}

// Generators of the block at a simplex of the standard edge.  At the edge:
// ind_J^L rho_chi and, when chi^2 != 1, ind_J^L rho_{chi^-1}.  At a vertex a
// single induced representation, since both inductions agree there.
struct BlockData {
  StdSimplex simplex;
  bool full_weyl = false;  // W_chi = W
  std::vector<InducingDatum> generators;
  std::vector<std::string> constituents;
};

inline BlockData block_generators(StdSimplex x, const SmoothCharacter& chi) {
  PrincipalSeriesType t = build_type(chi);
  BlockData b;
  b.simplex = x;
  b.full_weyl = w_chi_full(t.chi);
  if (b.full_weyl && t.n > 1)
    throw std::invalid_argument("blocks with chi^2 = 1 and conductor >= 2 are not supported");
  InducingDatum d = type_datum(t);
  if (x == StdSimplex::Edge) {
    b.generators.push_back(d);
    b.constituents.push_back("ind_J^I rho_chi");
    if (!b.full_weyl) {
      b.generators.push_back(type_datum(t, true));
      b.constituents.push_back("ind_J^I rho_chi^-1");
    }
  } else {
    b.generators.push_back(d);
    std::string K = simplex_name(x) == "v0" ? "K0" : "K1";
    if (b.full_weyl) b.constituents = {"pi+_" + K, "pi-_" + K};
    else b.constituents = {"ind_J^" + K + " rho_chi"};
  }
  return b;
}

// Number of irreducible constituents of ind_J^K rho_chi (all multiplicity
// one): dim End.
inline long constituent_count(StdSimplex x, const SmoothCharacter& chi) {
  PrincipalSeriesType t = build_type(chi);
  InducingDatum d = type_datum(t);
  return mackey_exact(d, d, simplex_group(x, chi.prime())).dim;
}

// Multiplicities of the block constituents at vertex x in ind_I^K of edge
// constituent `col`.
inline std::vector<long> induction_column(StdSimplex x, const SmoothCharacter& chi, size_t col) {
  BlockData e = block_generators(StdSimplex::Edge, chi);
  BlockData v = block_generators(x, chi);
  PrincipalSeriesType t = build_type(chi);
  ValuationPattern K = simplex_group(x, chi.prime());
  if (v.full_weyl) {
    auto B = level1_block(t.chi);
    const auto& I = pattern_I(chi.prime());
    return level1_multiplicities(*B, x, I.gens, e.generators[col].rho);
  }
  return {mackey_exact(v.generators[0], e.generators[col], K).dim};
}

// ---------------------------------------------------------------------------
// The projection-induction comparison at g.

struct ProjindReport {
  int p = 0;
  int distance = 0;
  std::string vertex;
  std::string chi;
  bool full_weyl = false;
  std::vector<std::string> labels;
  std::vector<long> lhs;  // ind_L^K pr ind_{L cap L^g}^L V^g
  std::vector<long> rhs;  // pr ind_{K cap L^g}^K V^g
  long rhs_total = 0;     // dim Hom_K(ind_J^K rho, ind_{K cap L^g}^K V^g), second route
  bool pass = false;
};

inline ProjindReport projind_check(const SmoothCharacter& chi, StdSimplex x, int n) {
  if (x == StdSimplex::Edge) throw std::invalid_argument("projind compares at a vertex");
  int p = chi.prime();
  PrincipalSeriesType t = build_type(chi);
  BlockData blk = block_generators(x, chi);
  OrbitReps reps = orbit_reps_at_distance(n, p);
  Mat2 g = x == StdSimplex::V0 ? reps.g0 : reps.g1;
  ValuationPattern K = simplex_group(x, p), L = pattern_I(p);
  const Tuple& seg = *t.J.fixset;
  InducingDatum rho = type_datum(t);

  // L-set L x_{L cap L^g} (L^g / J^g) and its K-analogue, framed over seg.
  Orbit OL = orbit(L.gens, seg, p);
  std::vector<Mat2> seeds;
  for (const auto& l : OL.transversal) seeds.push_back(g * l);
  FramedSet omegaL = framed_set(L.gens, seg, rho.rho, seeds, p);
  FramedSet omegaK = framed_set(K.gens, seg, rho.rho, seeds, p);

  ProjindReport r;
  r.p = p;
  r.distance = n;
  r.vertex = simplex_name(x);
  r.chi = t.chi.str();
  r.full_weyl = blk.full_weyl;
  r.labels = blk.constituents;
  r.rhs_total = hom_count(rho, omegaK, p).dim;
  if (!blk.full_weyl) {
    // Each of the two edge constituents induces to the single constituent.
    long a = hom_count(rho, omegaL, p).dim + hom_count(type_datum(t, true), omegaL, p).dim;
    r.lhs = {a};
    r.rhs = {r.rhs_total};
  } else {
    long m = hom_count(rho, omegaL, p).dim;
    r.lhs = {m, m};
    Orbit OA = orbit(K.gens, act(g, *L.fixset, p), p);
    std::vector<Mat2> agens = schreier_generators(OA, K.gens);
    Mat2 gi = g.inverse();
    ElementChar psi = [rho, g, gi](const Mat2& y) { return rho.rho(gi * y * g); };
    r.rhs = level1_multiplicities(*level1_block(t.chi), x, agens, psi);
  }
  long sum = 0;
  for (long v : r.rhs) sum += v;
  r.pass = r.lhs == r.rhs && sum == r.rhs_total;
  return r;
}

// ---------------------------------------------------------------------------
// Finite-quotient route.  Everything is moved into SL2(Z_p) first: on the
// K1 side conjugation by w sends J(beta, gamma) to J(gamma - 1, beta + 1) and
// rho_chi to rho_{chi^-1}.

struct FiniteDatum {
  int beta = 0, gamma = 1;
  SmoothCharacter chi;
};

struct FiniteConfig {
  int p = 2;
  FiniteDatum d1, d2;
  int K_beta = 0, K_gamma = 0;  // ambient std pattern in the K0 picture
  std::string label;
};

inline FiniteDatum transport_to_k0(const FiniteDatum& d) {
  return {d.gamma - 1, d.beta + 1, d.chi.inverse()};
}

inline InducingDatum exact_datum(const FiniteDatum& d, int p) {
  return {std_pattern(d.beta, d.gamma, p), upper_left_character(d.chi), "rho"};
}

struct FiniteMackeyResult {
  int level = 0;
  long mackey = 0;
  long inner = 0;
  size_t double_cosets = 0;
  bool stability_checked = false;
};

// Smallest level at which both patterns and characters are visible.
inline int natural_level(const FiniteConfig& c) {
  int m = 1;
  for (const FiniteDatum* d : {&c.d1, &c.d2}) {
    m = std::max(m, std::max(d->beta, d->gamma));
    m = std::max(m, d->chi.level());
  }
  return m;
}

inline size_t sl2_mod_size(int p, int m) {
  std::uint64_t q = ipow(p, m).get_ui();
  return static_cast<size_t>(q * q * q / p * (p * p - 1) / p);
}

inline FiniteMackeyResult finite_mackey(const FiniteConfig& c, int m, bool with_inner = true) {
  auto run = [&](int level, bool inner) {
    auto Q = std::make_shared<const SL2Mod>(c.p, level);
    FiniteGroup K = FiniteGroup::image_of(Q, std_pattern(c.K_beta, c.K_gamma, c.p));
    FiniteGroup H1 = FiniteGroup::image_of(Q, std_pattern(c.d1.beta, c.d1.gamma, c.p));
    FiniteGroup H2 = FiniteGroup::image_of(Q, std_pattern(c.d2.beta, c.d2.gamma, c.p));
    auto ch = [&](const SmoothCharacter& chi) -> CharFn {
      const SL2Mod* q = Q.get();
      return [chi, q](std::uint32_t x) { return chi.at_residue(q->unrank(x).e[0] % chi.modulus()); };
    };
    FiniteMackeyResult r;
    r.level = level;
    r.mackey = mackey_dim_hom_finite(H1, ch(c.d1.chi), K, H2, ch(c.d2.chi), &r.double_cosets);
    if (inner) {
      int M = static_cast<int>(std::lcm(c.d1.chi.exponent(), c.d2.chi.exponent()));
      ClassFunction f1 = induced_character(H1, ch(c.d1.chi), K, M);
      ClassFunction f2 = induced_character(H2, ch(c.d2.chi), K, M);
      r.inner = inner_product(f1, f2);
    }
    return r;
  };
  FiniteMackeyResult r = run(m, with_inner);
  if (sl2_mod_size(c.p, m + 1) <= kQuotientBudget) {
    FiniteMackeyResult s = run(m + 1, false);
    if (s.double_cosets != r.double_cosets || s.mackey != r.mackey)
      throw UnstableLevel(m, "double cosets " + std::to_string(r.double_cosets) + " vs " +
                                 std::to_string(s.double_cosets));
    r.stability_checked = true;
  }
  return r;
}

inline HomCount exact_mackey(const FiniteConfig& c) {
  return mackey_exact(exact_datum(c.d1, c.p), exact_datum(c.d2, c.p), std_pattern(c.K_beta, c.K_gamma, c.p));
}

}  // namespace bruhat
