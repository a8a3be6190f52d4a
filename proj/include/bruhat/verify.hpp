#pragma once

// Verification suites.  Each check carries a stable id (see README for the
// statement each id certifies), a configuration string and a verdict.  All
// sampling is driven by one seeded engine, so a (suite, options) pair always
// yields the same report.

#include <random>
#include <set>
#include <sstream>

#include "bruhat/k0.hpp"
#include "bruhat/mv_complex.hpp"

namespace bruhat {

struct Check {
  std::string id;
  std::string config;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  int p = 0;  // 0: the suite's default primes
  std::uint64_t seed = 1;
  int max_distance = 3;
  int samples = 1000;
};

using Rng = std::mt19937_64;

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"tree", "types", "mackey", "diagram", "filtquot",
                                              "projind", "complex", "k0"};
  return names;
}

namespace verify_detail {

inline std::vector<int> primes_or(const VerifyOptions& o, std::vector<int> dflt) {
  if (o.p != 0) return {o.p};
  return dflt;
}

inline std::string cfg(int p, const std::string& rest = "") {
  return "p=" + std::to_string(p) + (rest.empty() ? "" : "," + rest);
}

// Product of `len` generators or their inverses.
inline Mat2 random_word(const std::vector<Mat2>& gens, int len, Rng& rng) {
  Mat2 g = Mat2::identity();
  std::uniform_int_distribution<size_t> pick(0, 2 * gens.size() - 1);
  for (int i = 0; i < len; ++i) {
    size_t k = pick(rng);
    g = g * (k < gens.size() ? gens[k] : gens[k - gens.size()].inverse());
  }
  return g;
}

// Words in SL2(Z_p) together with s1: a sample of the whole group.
inline Mat2 random_group_element(int p, Rng& rng) {
  std::vector<Mat2> gens = pattern_K0(p).gens;
  gens.push_back(weyl_s1(p));
  return random_word(gens, 6, rng);
}

// Characters with conductor in [lo, hi].
inline std::vector<SmoothCharacter> characters_by_conductor(int p, int lo, int hi) {
  std::vector<SmoothCharacter> out;
  for (const auto& c : all_characters(p, hi))
    if (c.conductor() >= lo && c.conductor() <= hi) out.push_back(c);
  return out;
}

}  // namespace verify_detail

// ---------------------------------------------------------------------------
// tree

inline std::vector<Check> verify_tree(const VerifyOptions& o) {
  using namespace verify_detail;
  std::vector<Check> out;
  Rng rng(o.seed);
  for (int p : primes_or(o, {2, 3, 5, 7})) {
    for (int n = 0; n <= 4; ++n) {
      auto vs = ball_vertices(std_vertex(), n, p);
      out.push_back({"tree.ball_size", cfg(p, "n=" + std::to_string(n)), vs.size() == ball_size_formula(n, p),
                     std::to_string(vs.size()) + " vertices"});
    }
    // Regularity, symmetry and edge types on B_3.
    bool regular = true, symmetric = true, bipartite = true;
    for (const auto& v : ball_vertices(std_vertex(), 3, p)) {
      auto nb = neighbors(v, p);
      std::set<Vertex> distinct(nb.begin(), nb.end());
      if (nb.size() != static_cast<size_t>(p + 1) || distinct.size() != nb.size()) regular = false;
      for (const auto& w : nb) {
        auto back = neighbors(w, p);
        if (std::find(back.begin(), back.end(), v) == back.end()) symmetric = false;
        if (orbit_type(v) == orbit_type(w) || distance(v, w, p) != 1) bipartite = false;
      }
    }
    out.push_back({"tree.regular", cfg(p, "radius=3"), regular && symmetric, ""});
    out.push_back({"tree.edge_types", cfg(p, "radius=3"), bipartite, "every edge joins types 0 and 1"});
    // SL2 preserves type, acts isometrically and commutes with faces.
    bool preserves = true, isometric = true, faces = true;
    auto sample = ball_vertices(std_vertex(), 2, p);
    for (int s = 0; s < 50; ++s) {
      Mat2 g = random_group_element(p, rng);
      const Vertex& v = sample[rng() % sample.size()];
      const Vertex& w = sample[rng() % sample.size()];
      if (orbit_type(act(g, v, p)) != orbit_type(v)) preserves = false;
      if (distance(act(g, v, p), act(g, w, p), p) != distance(v, w, p)) isometric = false;
      auto nb = neighbors(v, p);
      Edge e = make_edge(v, nb[rng() % nb.size()]);
      Edge ge = act(g, e, p);
      for (int i = 0; i < 2; ++i)
        if (!(ge.face(i) == act(g, e.face(i), p))) faces = false;
    }
    out.push_back({"tree.two_orbits", cfg(p), preserves, "orbit type is SL2-invariant and both types occur"});
    out.push_back({"tree.isometry", cfg(p, "samples=50"), isometric, ""});
    out.push_back({"tree.face_equivariance", cfg(p, "samples=50"), faces, ""});
    // Inversions.
    bool none = !inversion_check(GroupMode::SL2, p);
    for (int s = 0; s < 50 && none; ++s)
      if (inverts(random_group_element(p, rng), std_edge(p), p)) none = false;
    out.push_back({"tree.sl2_no_inversion", cfg(p), none, "structural answer and 50 sampled elements"});
    out.push_back({"tree.pgl2_inversion", cfg(p), inversion_check(GroupMode::PGL2, p) &&
                                                      inverts(pgl2_inversion_witness(p), std_edge(p), p),
                   "witness [[0,1],[p,0]]"});
    Edge e = std_edge(p);
    SubVertex mid = sub_midpoint(e.v0, e.v1);
    SubEdge h0{sub_vertex(e.v0), mid}, h1{mid, sub_vertex(e.v1)};
    Mat2 w = pgl2_inversion_witness(p);
    bool fixed = !inversion_check(GroupMode::PGL2, p, true) && !inverts(w, h0, p) && !inverts(w, h1, p) &&
                 act(w, mid, p) == mid;
    out.push_back({"tree.subdivision_fix", cfg(p), fixed, "the witness fixes the midpoint and swaps half-edges"});
    // Two vertex orbits and the half-tree base case.
    Region g0 = half_tree(e.v0, e, 0, p);
    out.push_back({"tree.halftree_base", cfg(p), g0.vertices.size() == 1 && g0.vertices[0] == e.v0, ""});
    OrbitReps reps = orbit_reps_at_distance(2, p);
    Edge a = act(reps.g0, e, p), b = act(reps.g1, e, p);
    out.push_back({"tree.orbit_reps", cfg(p, "n=2"),
                   distance(a, e, p) == 2 && distance(b, e, p) == 2 && !(a == b) &&
                       orbit(pattern_I(p).gens, Tuple{a.v0, a.v1}, p).find(Tuple{b.v0, b.v1}) < 0,
                   "g0 e, g1 e at distance 2 in different I-orbits"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// types: patterns, types, intertwiners

inline std::vector<Check> verify_patterns(const VerifyOptions& o) {
  using namespace verify_detail;
  std::vector<Check> out;
  Rng rng(o.seed ^ 0x9a77e2ULL);
  for (int p : primes_or(o, {2, 3, 5})) {
    std::vector<ValuationPattern> pats{pattern_K0(p), pattern_K1(p), pattern_I(p), std_pattern(1, 1, p, "J(n=2)"),
                                       std_pattern(1, 2, p, "J(n=3)")};
    for (int s = 0; s < 2; ++s) {
      Mat2 g = random_group_element(p, rng);
      pats.push_back(stabilizer(act(g, std_vertex(), p), p));
      pats.push_back(stabilizer(act(g, std_edge(p), p), p));
    }
    for (const auto& P : pats) {
      int agree = 0, members = 0;
      for (int s = 0; s < o.samples; ++s) {
        Mat2 g = s % 2 == 0 ? random_word(P.gens, 8, rng) : random_group_element(p, rng);
        bool in = P.contains(g);
        members += in;
        agree += in == P.fixes_fixset(g);
      }
      out.push_back({"subgroups.membership_vs_fixset", cfg(p, P.name), agree == o.samples && members > 0,
                     std::to_string(agree) + "/" + std::to_string(o.samples) + " agree, " + std::to_string(members) +
                         " members"});
    }
    // Intersections and conjugates against the two-membership oracle.
    Mat2 t = Mat2::diag(p, qpow(p, -1));
    std::vector<std::pair<ValuationPattern, ValuationPattern>> pairs{
        {pattern_I(p), pattern_conjugate(pattern_I(p), t)},
        {pattern_K0(p), pattern_K1(p)},
        {pattern_K0(p), pattern_conjugate(pattern_I(p), random_group_element(p, rng))},
        {std_pattern(1, 1, p, "J"), pattern_conjugate(pattern_K0(p), weyl_s1(p))}};
    for (const auto& [A, B] : pairs) {
      ValuationPattern C = pattern_intersect(A, B);
      int agree = 0;
      for (int s = 0; s < o.samples; ++s) {
        Mat2 g = s % 3 == 0 ? random_word(A.gens, 8, rng) : s % 3 == 1 ? random_word(B.gens, 8, rng)
                                                                      : random_group_element(p, rng);
        agree += C.contains(g) == (A.contains(g) && B.contains(g));
      }
      out.push_back({"subgroups.intersect_oracle", cfg(p, A.name + "&" + B.name), agree == o.samples,
                     std::to_string(agree) + "/" + std::to_string(o.samples)});
    }
    for (const auto& P : pats) {
      Mat2 h = random_group_element(p, rng), hi = h.inverse();
      ValuationPattern C = pattern_conjugate(P, h);
      int agree = 0;
      for (int s = 0; s < o.samples; ++s) {
        Mat2 g = s % 2 == 0 ? h * random_word(P.gens, 8, rng) * hi : random_group_element(p, rng);
        agree += C.contains(g) == P.contains(hi * g * h);
      }
      out.push_back({"subgroups.conjugate_oracle", cfg(p, P.name), agree == o.samples,
                     std::to_string(agree) + "/" + std::to_string(o.samples)});
    }
    auto sv = stabilizer(std_vertex(), p);
    sv.normalize();
    auto se = stabilizer(std_edge(p), p);
    se.normalize();
    out.push_back({"subgroups.standard_stabilizers", cfg(p),
                   sv.standard_bounds() == Bounds{0, 0, 0, 0} && se.standard_bounds() == Bounds{0, 0, 1, 0}, ""});
  }
  return out;
}

inline std::vector<Check> verify_type_construction(const VerifyOptions& o) {
  using namespace verify_detail;
  std::vector<Check> out;
  Rng rng(o.seed ^ 0x7e9e5ULL);
  // Bounds of J for conductors 1, 2, 3.
  for (int p : primes_or(o, {2, 3, 5})) {
    for (int n = 1; n <= 3; ++n) {
      SmoothCharacter c;
      for (const auto& x : all_characters(p, n))
        if (x.conductor() == n) {
          c = x;
          break;
        }
      if (c.conductor() != n) continue;  // p = 2, n = 1 has no such character
      PrincipalSeriesType t = build_type(c);
      auto b = t.J.standard_bounds();
      out.push_back({"types.bounds", cfg(p, "n=" + std::to_string(n)),
                     b && (*b)[1] == n / 2 && (*b)[2] == (n + 1) / 2 && (*b)[0] == 0 && (*b)[3] == 0,
                     t.J.describe()});
    }
    PrincipalSeriesType triv = build_type(SmoothCharacter::trivial(p));
    out.push_back({"types.trivial_is_iwahori", cfg(p), triv.J.standard_bounds() == Bounds{0, 0, 1, 0}, ""});
  }
  // Multiplicativity: exhaustive on the level-n image for p in {2, 3}.
  for (int p : primes_or(o, {2, 3, 5})) {
    for (const auto& c : verify_detail::characters_by_conductor(p, 0, 2)) {
      PrincipalSeriesType t = build_type(c);
      int m = std::max(1, t.chi.level());
      bool ok = true;
      std::string how;
      if (p <= 3) {
        auto Q = std::make_shared<const SL2Mod>(p, m);
        FiniteGroup J = FiniteGroup::image_of(Q, t.J);
        CharFn rho = rho_on_quotient(t, *Q);
        for (auto x : J.elements())
          for (auto y : J.elements())
            if (!(rho(Q->mul(x, y)) == rho(x) * rho(y))) ok = false;
        how = "exhaustive over " + std::to_string(J.order()) + " elements";
      } else {
        for (int s = 0; s < o.samples; ++s) {
          Mat2 x = random_word(t.J.gens, 6, rng), y = random_word(t.J.gens, 6, rng);
          if (!(t.rho(x * y) == t.rho(x) * t.rho(y))) ok = false;
        }
        how = std::to_string(o.samples) + " sampled pairs";
      }
      // rho restricts to chi on the torus and kills both unipotent parts.
      for (long u = 1; u < t.chi.modulus(); ++u) {
        if (u % p == 0) continue;
        if (!(t.rho(Mat2::diag(u, mpq_class(1, static_cast<unsigned long>(u)))) == t.chi(mpq_class(u)))) ok = false;
      }
      for (const auto& g : {Mat2::upper(qpow(p, t.beta())), Mat2::lower(qpow(p, t.gamma()))})
        if (!(t.rho(g) == Root())) ok = false;
      out.push_back({"types.rho_multiplicative", cfg(p, c.str()), ok, how});
    }
  }
  // Iwahori factorization round trip.
  for (int p : primes_or(o, {5})) {
    for (const auto& c : verify_detail::characters_by_conductor(p, 2, 2)) {
      PrincipalSeriesType t = build_type(c);
      int ok = 0;
      int trials = 100;
      for (int s = 0; s < trials; ++s) {
        Mat2 g = random_word(t.J.gens, 8, rng);
        IwahoriFactors f = iwahori_factor(g, t.J);
        ok += f.upper * f.torus * f.lower == g;
      }
      out.push_back({"types.iwahori_roundtrip", cfg(p, c.str()), ok == trials, std::to_string(ok) + "/100"});
      break;
    }
  }
  return out;
}

// Every element of J W_chi J (length <= 2) intertwines; when W_chi != W the
// reflections swap rho_chi and rho_{chi^-1}.
inline std::vector<Check> verify_intertwiners(const VerifyOptions& o) {
  using namespace verify_detail;
  std::vector<Check> out;
  Rng rng(o.seed ^ 0x1e7ULL);
  for (int p : primes_or(o, {3, 5})) {
    std::vector<SmoothCharacter> chis{SmoothCharacter::trivial(p)};
    for (const auto& c : characters_by_conductor(p, 1, 2)) {
      // One character per (conductor, order).
      bool seen = false;
      for (const auto& d : chis) seen = seen || (d.conductor() == c.conductor() && d.order() == c.order());
      if (!seen) chis.push_back(c);
    }
    for (const auto& c : chis) {
      PrincipalSeriesType t = build_type(c), ti = build_type(c.inverse());
      bool full = w_chi_full(t.chi);
      int tried = 0, good = 0;
      for (const auto& w : weyl_elements(2, p)) {
        bool in_wchi = full || w.length % 2 == 0;
        if (!in_wchi) continue;
        for (int s = 0; s < 200; ++s) {
          Mat2 g = random_word(t.J.gens, 4, rng) * w.g * random_word(t.J.gens, 4, rng);
          ++tried;
          good += intertwines(g, t, t);
        }
      }
      out.push_back({"types.intertwiner_law", cfg(p, t.chi.str()), good == tried && tried >= 200,
                     std::to_string(good) + "/" + std::to_string(tried) + " decorated elements"});
      if (!full)
        for (const Mat2& s : {weyl_s0(), weyl_s1(p)}) {
          bool self = intertwines(s, t, t), swap = intertwines(s, t, ti);
          out.push_back({"types.reflection_swaps", cfg(p, t.chi.str()), !self && swap,
                         std::string("self=") + (self ? "1" : "0") + ",swap=" + (swap ? "1" : "0")});
        }
    }
    // A lower unipotent outside J does not intertwine a conductor-2 type.
    for (const auto& c : characters_by_conductor(p, 2, 2)) {
      PrincipalSeriesType t = build_type(c);
      out.push_back({"types.lower_unipotent_fails", cfg(p, t.chi.str()), !intertwines(Mat2::lower(1), t, t), ""});
      break;
    }
    PrincipalSeriesType t0 = build_type(SmoothCharacter::trivial(p));
    out.push_back({"types.translation_intertwines", cfg(p), intertwines(Mat2::diag(p, qpow(p, -1)), t0, t0), ""});
  }
  return out;
}

inline std::vector<Check> verify_types(const VerifyOptions& o) {
  std::vector<Check> out = verify_patterns(o);
  for (auto& c : verify_type_construction(o)) out.push_back(std::move(c));
  for (auto& c : verify_intertwiners(o)) out.push_back(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// diagram: W -> J\N/J -> L\N/L injective, L\N/L -> K\N/L two to one

inline std::vector<Check> verify_diagram(const VerifyOptions& o, int max_length = 3) {
  using namespace verify_detail;
  std::vector<Check> out;
  for (int p : primes_or(o, {2, 3})) {
    auto ws = weyl_elements(max_length, p);
    Edge e = std_edge(p);
    Tuple et{e.v0, e.v1};
    auto injective = [&](const ValuationPattern& H, const Tuple& base) {
      for (size_t i = 0; i < ws.size(); ++i) {
        Orbit O = orbit(H.gens, act(ws[i].g, base, p), p);
        for (size_t j = 0; j < ws.size(); ++j)
          if (j != i && O.find(act(ws[j].g, base, p)) >= 0) return false;
      }
      return true;
    };
    std::vector<SmoothCharacter> chis{SmoothCharacter::trivial(p)};
    auto c2 = characters_by_conductor(p, 2, 2);
    if (!c2.empty()) chis.push_back(c2.back());
    for (const auto& c : chis) {
      PrincipalSeriesType t = build_type(c);
      out.push_back({"diagram.J_injective", cfg(p, "l=" + std::to_string(max_length) + "," + t.chi.str()),
                     injective(t.J, *t.J.fixset), std::to_string(ws.size()) + " elements"});
    }
    out.push_back({"diagram.L_injective", cfg(p, "l=" + std::to_string(max_length)), injective(pattern_I(p), et),
                   std::to_string(ws.size()) + " elements"});
    for (auto x : {StdSimplex::V0, StdSimplex::V1}) {
      ValuationPattern K = simplex_group(x, p);
      Mat2 refl = x == StdSimplex::V0 ? weyl_s0() : weyl_s1(p);
      bool exact = K.contains(refl);
      size_t identified = 0;
      for (size_t i = 0; i < ws.size(); ++i) {
        Orbit O = orbit(K.gens, act(ws[i].g, et, p), p);
        size_t cls = 0;
        for (size_t j = 0; j < ws.size(); ++j) {
          bool same = O.find(act(ws[j].g, et, p)) >= 0;
          bool paired = i == j || act(ws[j].g, e, p) == act(refl * ws[i].g, e, p);
          if (same != paired) exact = false;
          cls += same;
        }
        if (cls > 2) exact = false;
        if (cls == 2) ++identified;
      }
      out.push_back({"diagram.K_two_to_one", cfg(p, "l=" + std::to_string(max_length) + ",K=" + simplex_name(x)),
                     exact, std::to_string(identified / 2) + " identified pairs"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// mackey: finite double cosets vs induced inner products vs tree orbits

inline std::vector<FiniteConfig> mackey_configs(const std::vector<int>& primes) {
  std::vector<FiniteConfig> out;
  for (int p : primes) {
    std::vector<SmoothCharacter> chis{SmoothCharacter::trivial(p)};
    for (const auto& c : verify_detail::characters_by_conductor(p, 1, 2)) {
      bool seen = false;
      for (const auto& d : chis) seen = seen || (d.conductor() == c.conductor() && d.order() == c.order());
      if (!seen) chis.push_back(c);
    }
    for (const auto& c0 : chis) {
      PrincipalSeriesType t = build_type(c0);
      FiniteDatum d{t.beta(), t.gamma(), t.chi}, di{t.beta(), t.gamma(), t.chi.inverse()};
      std::string s = t.chi.str();
      out.push_back({p, d, d, 0, 0, "K0:rho,rho:" + s});
      if (!w_chi_full(t.chi)) out.push_back({p, d, di, 0, 0, "K0:rho,rho^-1:" + s});
      out.push_back({p, d, d, 0, 1, "I:rho,rho:" + s});
      out.push_back({p, transport_to_k0(d), transport_to_k0(d), 0, 0, "K1:rho,rho:" + s});
    }
  }
  return out;
}

inline std::vector<Check> verify_mackey(const VerifyOptions& o) {
  using namespace verify_detail;
  std::vector<Check> out;
  for (const auto& c : mackey_configs(primes_or(o, {2, 3, 5}))) {
    int m = natural_level(c);
    FiniteMackeyResult r = finite_mackey(c, m);
    HomCount ex = exact_mackey(c);
    bool ok = r.mackey == r.inner && r.mackey == ex.dim && r.double_cosets == ex.orbits;
    std::ostringstream d;
    d << "mackey=" << r.mackey << ",inner=" << r.inner << ",tree=" << ex.dim << ",double_cosets=" << r.double_cosets
      << ",level=" << r.level << (r.stability_checked ? ",stable" : "");
    out.push_back({"mackey.oracle_equivalence", cfg(c.p, c.label), ok, d.str()});
  }
  for (int p : primes_or(o, {2, 3, 5})) {
    auto Q = std::make_shared<const SL2Mod>(p, 1);
    FiniteGroup K = FiniteGroup::whole(Q), B = FiniteGroup::image_of(Q, pattern_I(p));
    auto dc = double_coset_reps(B, K, B);
    out.push_back({"mackey.bruhat_cells", cfg(p), dc.size() == 2 && K.order() / B.order() == static_cast<size_t>(p + 1),
                   std::to_string(dc.size()) + " double cosets, index " + std::to_string(K.order() / B.order())});
  }
  // numbirred and sameind at both vertices.
  for (int p : primes_or(o, {3, 5})) {
    for (const auto& c : characters_by_conductor(p, 1, 2)) {
      PrincipalSeriesType t = build_type(c);
      for (auto x : {StdSimplex::V0, StdSimplex::V1}) {
        long n = constituent_count(x, c);
        bool full = w_chi_full(t.chi);
        out.push_back({"mackey.numbirred", cfg(p, simplex_name(x) + "," + t.chi.str()), (n == 2) == full && n >= 1,
                       std::to_string(n) + " constituents"});
        // Characters of ind rho_chi and ind rho_chi^-1 agree at the vertex.
        FiniteDatum d{t.beta(), t.gamma(), t.chi}, di{t.beta(), t.gamma(), t.chi.inverse()};
        if (x == StdSimplex::V1) {
          d = transport_to_k0(d);
          di = transport_to_k0(di);
        }
        int m = std::max({1, d.beta, d.gamma, t.chi.level()});
        auto Q = std::make_shared<const SL2Mod>(p, m);
        FiniteGroup K = FiniteGroup::whole(Q);
        FiniteGroup J = FiniteGroup::image_of(Q, std_pattern(d.beta, d.gamma, p));
        FiniteGroup Ji = FiniteGroup::image_of(Q, std_pattern(di.beta, di.gamma, p));
        int M = static_cast<int>(t.chi.exponent());
        const SL2Mod* q = Q.get();
        auto chfn = [q](const SmoothCharacter& ch) -> CharFn {
          return [ch, q](std::uint32_t y) { return ch.at_residue(q->unrank(y).e[0] % ch.modulus()); };
        };
        ClassFunction f = induced_character(J, chfn(d.chi), K, M), fi = induced_character(Ji, chfn(di.chi), K, M);
        out.push_back({"mackey.sameind", cfg(p, simplex_name(x) + "," + t.chi.str()), f == fi, ""});
      }
      if (t.n >= 2) {
        FiniteConfig ec{p, {t.beta(), t.gamma(), t.chi}, {t.beta(), t.gamma(), t.chi}, 0, 1, "edge"};
        FiniteMackeyResult r = finite_mackey(ec, natural_level(ec));
        out.push_back({"mackey.edge_irreducible", cfg(p, t.chi.str()), r.inner == 1 && r.mackey == 1,
                       "<ind_J^I rho, ind_J^I rho> = " + std::to_string(r.inner)});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// filtquot

inline std::vector<Check> verify_filtquot(const VerifyOptions& o, int max_dist = 4) {
  using namespace verify_detail;
  std::vector<Check> out;
  Rng rng(o.seed ^ 0xf17ULL);
  for (int p : primes_or(o, {2, 3, 5})) {
    for (int d = 1; d <= max_dist; ++d)
      for (int i = 0; i < 2; ++i) {
        auto [bounds, hulls] = filtquot_identity(i, d, p);
        // Third route: sampled elements of L^g sorted by the two predicates.
        OrbitReps reps = orbit_reps_at_distance(d, p);
        Mat2 g = i == 0 ? reps.g0 : reps.g1;
        ValuationPattern K = i == 0 ? pattern_K0(p) : pattern_K1(p), L = pattern_I(p);
        ValuationPattern Lg = pattern_conjugate(L, g);
        std::vector<Mat2> gens = Lg.gens;
        for (const auto& k : K.gens) gens.push_back(k);
        int agree = 0, n = o.samples / 4;
        for (int s = 0; s < n; ++s) {
          Mat2 y = s % 2 == 0 ? random_word(Lg.gens, 8, rng) : random_word(gens, 6, rng);
          bool a = K.contains(y) && Lg.contains(y), b = L.contains(y) && Lg.contains(y);
          agree += a == b;
        }
        out.push_back({"filtquot.identity", cfg(p, "i=" + std::to_string(i) + ",distance=" + std::to_string(d)),
                       bounds && hulls && agree == n,
                       std::string("bounds=") + (bounds ? "1" : "0") + ",hulls=" + (hulls ? "1" : "0") +
                           ",sampled=" + std::to_string(agree) + "/" + std::to_string(n)});
      }
  }
  for (int p : primes_or(o, {3, 5})) {
    for (int n = 0; n <= 1; ++n) {
      FiltquotReport r = filtration_quotient_complex(SmoothCharacter::trivial(p), n);
      bool eq = r.multiplicities[0].pass && r.multiplicities[1].pass;
      out.push_back({"filtquot.quotient_acyclic", cfg(p, "n=" + std::to_string(n)), r.pass && eq,
                     "degree-0 and degree-1 multiplicity vectors agree"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// projind

inline std::vector<Check> verify_projind(const VerifyOptions& o) {
  using namespace verify_detail;
  std::vector<Check> out;
  for (int p : primes_or(o, {3, 5})) {
    for (const auto& c : all_characters(p, 2)) {
      if (w_chi_full(c) && c.conductor() >= 2) continue;  // p = 2 only
      for (auto x : {StdSimplex::V0, StdSimplex::V1})
        for (int n = 1; n <= o.max_distance; ++n) {
          ProjindReport r = projind_check(c, x, n);
          std::ostringstream d;
          d << "lhs=(";
          for (size_t i = 0; i < r.lhs.size(); ++i) d << (i ? "," : "") << r.lhs[i];
          d << "),rhs=(";
          for (size_t i = 0; i < r.rhs.size(); ++i) d << (i ? "," : "") << r.rhs[i];
          d << "),total=" << r.rhs_total;
          out.push_back({"projind.multiplicities",
                         cfg(p, simplex_name(x) + ",distance=" + std::to_string(n) + "," + c.minimal().str()), r.pass,
                         d.str()});
        }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// complex

inline std::vector<Check> verify_complex(const VerifyOptions& o) {
  using namespace verify_detail;
  std::vector<Check> out;
  Rng rng(o.seed ^ 0xc0ULL);
  for (int p : primes_or(o, {2, 3})) {
    Edge e = std_edge(p);
    EdgeModule triv(type_datum(build_type(SmoothCharacter::trivial(p))), p);
    TwoTermComplex single = assemble_complex(triv, with_faces({e}));
    out.push_back({"complex.single_edge", cfg(p),
                   single.basis1.size() == 1 && single.basis0.size() == static_cast<size_t>(2 * p + 2) &&
                       single.h1() == 0 && single.h0() == 2 * p + 1,
                   "h0=" + std::to_string(single.h0()) + ",h1=" + std::to_string(single.h1())});
    TwoTermComplex bare = assemble_complex(triv, make_region({}, {e}));
    out.push_back({"complex.degree_one_only", cfg(p), bare.basis0.empty() && bare.h1() == 1, ""});
    out.push_back({"complex.lan_dims", cfg(p),
                   lan_evaluate(triv, e.v0).dim == static_cast<size_t>(p + 1) * triv.dim_V() &&
                       lan_evaluate(triv, e).dim == triv.dim_V() && lan_evaluate(triv, e.v0).summands.size() == 1,
                   ""});

    std::vector<SmoothCharacter> chis{SmoothCharacter::trivial(p)};
    for (const auto& c : characters_by_conductor(p, 1, 1))
      if (!c.is_trivial()) chis.push_back(c);
    for (const auto& c : chis) {
      EdgeModule M(type_datum(build_type(c)), p);
      std::string cs = c.minimal().str();
      for (int n = 0; n <= 2; ++n) {
        struct Center {
          std::string name;
          Region R, Rprev;
          ValuationPattern sym;
        };
        std::vector<Center> centers{
            {"e", with_faces(edge_nbhd_edges(e, n, p)),
             with_faces(edge_nbhd_edges(e, std::max(0, n - 1), p)), pattern_I(p)},
            {"v0", with_faces(edge_nbhd_edges(e.v0, n, p)),
             with_faces(edge_nbhd_edges(e.v0, std::max(0, n - 1), p)), pattern_K0(p)},
            {"v1", with_faces(edge_nbhd_edges(e.v1, n, p)),
             with_faces(edge_nbhd_edges(e.v1, std::max(0, n - 1), p)), pattern_K1(p)}};
        for (const auto& ctr : centers) {
          TwoTermComplex C = assemble_complex(M, ctr.R);
          std::string conf = cs + ",E^" + std::to_string(n) + "_" + ctr.name;
          out.push_back({"complex.heart_h1", cfg(p, conf), C.h1() == 0,
                         "dims (" + std::to_string(C.basis1.size()) + ";" + std::to_string(C.basis0.size()) +
                             "), h1=" + std::to_string(C.h1())});
          bool eq = true;
          try {
            for (const auto& y : ctr.sym.gens) eq = eq && check_equivariance(M, ctr.R, C, y);
            for (int s = 0; s < 5; ++s) eq = eq && check_equivariance(M, ctr.R, C, random_word(ctr.sym.gens, 5, rng));
          } catch (const IncompatibleAssignment&) {
            eq = false;
          }
          out.push_back({"complex.equivariance", cfg(p, conf), eq, ""});
          out.push_back({"complex.sign_convention", cfg(p, conf), complex_rank(C, -1) == C.rank, ""});
          if (n >= 1) {
            FibseqReport f = fibseq_check(M, ctr.Rprev, ctr.R);
            out.push_back({"complex.fibseq", cfg(p, conf), f.pass(), ""});
          }
        }
      }
    }
    // Ball around a vertex with a conductor-2 type.
    for (const auto& c : characters_by_conductor(p, 2, 2)) {
      if (w_chi_full(c)) continue;
      EdgeModule M(type_datum(build_type(c)), p);
      TwoTermComplex C = assemble_complex(M, ball(e.v0, 1, p));
      out.push_back({"complex.ball_h1", cfg(p, c.minimal().str()), C.h1() == 0, "h1=" + std::to_string(C.h1())});
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// k0

// The level-1 whole-group matrix for p = 2, worked out by hand on S3 with
// rows (K0: triv, sgn, std; K1: triv, sgn, std) and columns (I: triv, sign).
inline IntMatrix hand_truncated_p2() {
  return {{1, 0}, {0, 1}, {1, 1}, {-1, 0}, {0, 0}, {-1, 0}};
}

// Equality up to reordering the columns and the rows within each side
// (the first `split` rows form the K0 side).
inline bool same_up_to_labels(const IntMatrix& A, const IntMatrix& B, size_t split) {
  if (A.size() != B.size() || A.empty() || A[0].size() != B[0].size()) return false;
  std::vector<size_t> perm(A[0].size());
  std::iota(perm.begin(), perm.end(), 0);
  auto sides = [split](IntMatrix M) {
    std::sort(M.begin(), M.begin() + static_cast<long>(split));
    std::sort(M.begin() + static_cast<long>(split), M.end());
    return M;
  };
  IntMatrix sb = sides(B);
  do {
    IntMatrix C;
    for (const auto& row : A) {
      std::vector<mpz_class> r;
      for (size_t j : perm) r.push_back(row[j]);
      C.push_back(std::move(r));
    }
    if (sides(C) == sb) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Invariant factors and kernel rank after permuting rows and columns and
// flipping the global sign.
inline bool k0_basis_independent(const IntMatrix& A, Rng& rng) {
  SmithForm s = smith_normal_form(A);
  for (int t = 0; t < 4; ++t) {
    IntMatrix B = A;
    std::shuffle(B.begin(), B.end(), rng);
    if (!B.empty()) {
      std::vector<size_t> perm(B[0].size());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (auto& row : B) {
        std::vector<mpz_class> r2;
        for (size_t j : perm) r2.push_back(-row[j]);
        row = std::move(r2);
      }
    }
    SmithForm s2 = smith_normal_form(B);
    if (s2.invariant_factors != s.invariant_factors || s2.kernel_rank() != s.kernel_rank()) return false;
  }
  return true;
}

inline std::vector<Check> verify_k0(const VerifyOptions& o) {
  using namespace verify_detail;
  std::vector<Check> out;
  Rng rng(o.seed ^ 0x6b30ULL);
  auto add_block = [&](const SmoothCharacter& c, const std::string& want, size_t kernel) {
    K0Report r = block_k0(c);
    bool ok = r.snf.coker_str() == want && r.snf.kernel_rank() == kernel && r.oracle_ok &&
              k0_basis_independent(r.matrix, rng);
    out.push_back({"k0.block", cfg(c.prime(), r.chi), ok, r.interpretation});
  };
  for (int p : primes_or(o, {2, 3, 5})) add_block(SmoothCharacter::trivial(p), "Z^3", 0);
  if (o.p == 0 || o.p == 5) {
    SmoothCharacter quad(5, 1, {2}), ord4(5, 1, {1});
    add_block(quad, "Z^3", 0);
    add_block(ord4, "Z", 1);
  }
  if (o.p == 0 || o.p == 2) {
    K0Report t = group_k0_truncated(2, 1);
    SmithForm hand = smith_normal_form(hand_truncated_p2());
    bool ok = same_up_to_labels(t.matrix, hand_truncated_p2(), 3) && t.oracle_ok && t.snf.invariant_factors == hand.invariant_factors &&
              t.snf.kernel_rank() == hand.kernel_rank();
    out.push_back({"k0.truncated_hand", cfg(2, "m=1"), ok, t.interpretation});
  }
  for (int p : primes_or(o, {2, 3})) {
    K0Report t = group_k0_truncated(p, 1);
    out.push_back({"k0.truncated_oracle", cfg(p, "m=1"), t.oracle_ok && k0_basis_independent(t.matrix, rng),
                   t.interpretation});
    out.push_back({"k0.truncation_embeds", cfg(p, "m=1->2"), truncation_embeds(p, 1), ""});
    K0Report torus = torus_k0_truncated(p, 2);
    long phi = static_cast<long>(torus.col_labels.size());
    out.push_back({"k0.torus_line", cfg(p, "m=2"),
                   torus.snf.coker_free_rank() == static_cast<size_t>(phi) && torus.snf.kernel_rank() == 0,
                   torus.interpretation});
  }
  SmithForm col = smith_normal_form({{1}, {1}, {-1}, {-1}});
  SmithForm sq = smith_normal_form({{1, 1}, {-1, -1}});
  SmithForm zero = smith_normal_form({{0, 0, 0}, {0, 0, 0}});
  out.push_back({"k0.snf_examples", "",
                 col.invariant_factors == std::vector<mpz_class>{1} && col.kernel_rank() == 0 &&
                     col.coker_str() == "Z^3" &&
                     sq.coker_str() == "Z" && sq.kernel_rank() == 1 && zero.coker_str() == "Z^2" &&
                     zero.kernel_rank() == 3,
                 ""});
  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<Check> run_suite(const std::string& suite, const VerifyOptions& o) {
  if (suite == "tree") return verify_tree(o);
  if (suite == "types") return verify_types(o);
  if (suite == "mackey") return verify_mackey(o);
  if (suite == "diagram") return verify_diagram(o);
  if (suite == "filtquot") return verify_filtquot(o);
  if (suite == "projind") return verify_projind(o);
  if (suite == "complex") return verify_complex(o);
  if (suite == "k0") return verify_k0(o);
  if (suite == "all") {
    std::vector<Check> out;
    for (const auto& s : suite_names())
      for (auto& c : run_suite(s, o)) out.push_back(std::move(c));
    return out;
  }
  throw std::invalid_argument("unknown suite: " + suite);
}

inline bool all_pass(const std::vector<Check>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const Check& c) { return c.pass; });
}

}  // namespace bruhat
