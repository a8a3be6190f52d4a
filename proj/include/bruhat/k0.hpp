#pragma once

// The pi_0 shadow of the edge/vertex pushout: an induction matrix from the
// edge lattice to the two vertex lattices (K0 rows +, K1 rows -), its Smith
// normal form, cokernel and kernel rank.

#include <gmpxx.h>

#include <map>

#include "bruhat/mackey.hpp"

namespace bruhat {

using IntMatrix = std::vector<std::vector<mpz_class>>;

struct SmithForm {
  std::vector<mpz_class> invariant_factors;  // nonzero diagonal, each dividing the next
  size_t rows = 0, cols = 0;
  size_t rank() const { return invariant_factors.size(); }
  size_t kernel_rank() const { return cols - rank(); }
  size_t coker_free_rank() const { return rows - rank(); }
  std::vector<mpz_class> torsion() const {
    std::vector<mpz_class> t;
    for (const auto& d : invariant_factors)
      if (d > 1) t.push_back(d);
    return t;
  }
  // "Z^r (+) Z/d1 (+) ..."; "0" for the zero group.
  std::string coker_str() const {
    std::string s;
    size_t r = coker_free_rank();
    if (r > 0) s = r == 1 ? "Z" : "Z^" + std::to_string(r);
    for (const auto& d : torsion()) s += (s.empty() ? "" : " + ") + std::string("Z/") + d.get_str();
    return s.empty() ? "0" : s;
  }
};

// Elimination over Z, always pivoting on an entry of least absolute value.
inline SmithForm smith_normal_form(IntMatrix A) {
  SmithForm S;
  S.rows = A.size();
  S.cols = A.empty() ? 0 : A[0].size();
  size_t R = S.rows, C = S.cols;
  for (size_t t = 0; t < std::min(R, C); ++t) {
    for (;;) {
      // Least nonzero pivot in the trailing block.
      size_t pr = R, pc = C;
      for (size_t i = t; i < R; ++i)
        for (size_t j = t; j < C; ++j)
          if (A[i][j] != 0 && (pr == R || abs(A[i][j]) < abs(A[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == R) break;
      std::swap(A[t], A[pr]);
      for (auto& row : A) std::swap(row[t], row[pc]);
      bool clean = true;
      for (size_t i = t + 1; i < R; ++i) {
        mpz_class q = A[i][t] / A[t][t];
        if (q != 0)
          for (size_t j = t; j < C; ++j) A[i][j] -= q * A[t][j];
        if (A[i][t] != 0) clean = false;
      }
      for (size_t j = t + 1; j < C; ++j) {
        mpz_class q = A[t][j] / A[t][t];
        if (q != 0)
          for (size_t i = t; i < R; ++i) A[i][j] -= q * A[i][t];
        if (A[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold in any trailing entry not divisible by the pivot.
      bool divides = true;
      for (size_t i = t + 1; i < R && divides; ++i)
        for (size_t j = t + 1; j < C; ++j)
          if (A[i][j] % A[t][t] != 0) {
            for (size_t k = t; k < C; ++k) A[t][k] += A[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (A[t][t] == 0) break;
    S.invariant_factors.push_back(abs(A[t][t]));
  }
  return S;
}

struct K0Report {
  int p = 0;
  std::string chi;
  std::string kind;  // "block", "truncated", "torus"
  std::vector<std::string> row_labels, col_labels;
  IntMatrix matrix;
  SmithForm snf;
  bool oracle_ok = true;
  std::string interpretation;
};

inline void finish_report(K0Report& r) {
  r.snf = smith_normal_form(r.matrix);
  if (r.matrix.empty()) r.snf.cols = r.col_labels.size();
  std::string k = "kernel rank " + std::to_string(r.snf.kernel_rank());
  if (r.kind == "block")
    r.interpretation = "K0(G, rho_chi) = " + r.snf.coker_str() + ", " + k;
  else if (r.kind == "truncated")
    r.interpretation = "depth-m approximation: coker = " + r.snf.coker_str() + ", " + k;
  else
    r.interpretation = "torus line: coker = " + r.snf.coker_str() + ", " + k;
}

// Rows: K0 constituents then K1 constituents; columns: edge constituents.
// Each entry is the multiplicity of the row constituent in the induction of
// the column constituent; the K1 rows carry a minus sign.
inline K0Report block_k0(const SmoothCharacter& chi) {
  K0Report r;
  r.p = chi.prime();
  r.chi = chi.minimal().str();
  r.kind = "block";
  BlockData e = block_generators(StdSimplex::Edge, chi);
  BlockData v0 = block_generators(StdSimplex::V0, chi), v1 = block_generators(StdSimplex::V1, chi);
  r.col_labels = e.constituents;
  for (const auto& l : v0.constituents) r.row_labels.push_back(l);
  for (const auto& l : v1.constituents) r.row_labels.push_back(l);
  r.matrix.assign(r.row_labels.size(), std::vector<mpz_class>(r.col_labels.size(), 0));
  PrincipalSeriesType t = build_type(chi);
  for (size_t c = 0; c < r.col_labels.size(); ++c) {
    size_t row = 0;
    for (auto x : {StdSimplex::V0, StdSimplex::V1}) {
      auto col = induction_column(x, chi, c);
      long sum = 0;
      for (long m : col) {
        r.matrix[row++][c] = x == StdSimplex::V0 ? m : -m;
        sum += m;
      }
      // Oracle: the vertex block is multiplicity free and generated by
      // ind_J^K rho_chi, so the column sum is a Mackey count.
      long mk = mackey_exact(type_datum(t), e.generators[c], simplex_group(x, chi.prime())).dim;
      if (mk != sum) r.oracle_ok = false;
    }
  }
  finish_report(r);
  return r;
}

// Level-m truncation for the whole group.  Lattices are spanned by the
// irreducible representations of K0/K(m), of K1/wK(m)w^-1 and of I/K(m).
// The K1 side is read in the K0 picture: ind_I^K1 eps corresponds to
// ind_I^K0 eps' with eps'(y) = eps(w y w^-1), which factors through level m+1.
struct TruncatedK0 {
  std::shared_ptr<const SL2Mod> Q;
  std::shared_ptr<const FiniteGroup> K, I;
  std::vector<ClassFunction> irrK, irrI;  // over a common field
  K0Report report;
};

inline TruncatedK0 truncated_k0_data(int p, int m) {
  if (m < 1) throw std::invalid_argument("truncation level must be positive");
  if (sl2_mod_size(p, m + 1) > kDefaultOrbitLimit) throw BudgetExceeded("truncation level too deep");
  TruncatedK0 T;
  K0Report& r = T.report;
  r.p = p;
  r.kind = "truncated";
  r.chi = "all (level " + std::to_string(m) + ")";
  T.Q = std::make_shared<const SL2Mod>(p, m);
  T.K = std::make_shared<const FiniteGroup>(FiniteGroup::whole(T.Q));
  T.I = std::make_shared<const FiniteGroup>(FiniteGroup::image_of(T.Q, pattern_I(p)));
  T.irrK = irreducible_characters(*T.K);
  T.irrI = irreducible_characters(*T.I);
  int M = std::lcm(T.irrK.front().M, T.irrI.front().M);
  for (auto& f : T.irrK) f = widen(f, M);
  for (auto& f : T.irrI) f = widen(f, M);
  const auto& irrK = T.irrK;
  const auto& irrI = T.irrI;
  const FiniteGroup& K = *T.K;
  const FiniteGroup& I = *T.I;
  for (size_t i = 0; i < irrK.size(); ++i) r.row_labels.push_back("K0:chi" + std::to_string(i) + "(deg " + irrK[i].degree().str() + ")");
  for (size_t i = 0; i < irrK.size(); ++i) r.row_labels.push_back("K1:chi" + std::to_string(i) + "(deg " + irrK[i].degree().str() + ")");
  for (size_t j = 0; j < irrI.size(); ++j) r.col_labels.push_back("I:eps" + std::to_string(j) + "(deg " + irrI[j].degree().str() + ")");
  r.matrix.assign(r.row_labels.size(), std::vector<mpz_class>(r.col_labels.size(), 0));

  auto to_int = [](const Cyclotomic& v) {
    if (!v.is_rational() || v.rational_value().get_den() != 1) throw NonIntegral(v.str());
    return v.rational_value().get_num();
  };
  // Averages chi_i(a) conj(eps_j(b)) over pairs (class of a in K, class of b
  // in I) weighted by their counts.
  auto fill = [&](const std::map<std::pair<int, int>, long>& pairs, size_t total, size_t row0, int sign) {
    mpq_class scale(1, static_cast<unsigned long>(total));
    for (size_t i = 0; i < irrK.size(); ++i)
      for (size_t j = 0; j < irrI.size(); ++j) {
        Cyclotomic acc(M);
        for (const auto& [cc, n] : pairs)
          acc += mpq_class(n) * (irrK[i].values[cc.first] * irrI[j].values[cc.second].conj());
        r.matrix[row0 + i][j] = sign * to_int(scale * acc);
      }
  };
  std::map<std::pair<int, int>, long> pairs0, pairs1;
  for (auto x : I.elements()) ++pairs0[{K.class_of(x), I.class_of(x)}];
  fill(pairs0, I.order(), 0, 1);
  // K1 side through the level m+1 image of I.
  auto Q1 = std::make_shared<const SL2Mod>(p, m + 1);
  FiniteGroup I1 = FiniteGroup::image_of(Q1, pattern_I(p));
  Mat2 w = iwahori_swap(p), wi = w.inverse();
  for (auto x : I1.elements()) {
    Mat2 X = Q1->lift(x);
    ++pairs1[{K.class_of(T.Q->image(X)), I.class_of(T.Q->image(w * X * wi))}];
  }
  fill(pairs1, I1.order(), irrK.size(), -1);
  // Oracle: on the K0 side the constituents account for the whole induced
  // degree (p + 1) deg eps; on the K1 side only for the part of level m.
  for (size_t j = 0; j < irrI.size(); ++j) {
    mpz_class d0 = 0, d1 = 0;
    for (size_t i = 0; i < irrK.size(); ++i) {
      mpz_class deg = to_int(irrK[i].degree());
      d0 += r.matrix[i][j] * deg;
      d1 -= r.matrix[irrK.size() + i][j] * deg;
    }
    mpz_class want = to_int(irrI[j].degree()) * static_cast<unsigned long>(p + 1);
    if (d0 != want || d1 > want || d1 < 0) r.oracle_ok = false;
  }
  finish_report(r);
  return T;
}

inline K0Report group_k0_truncated(int p, int m) { return truncated_k0_data(p, m).report; }

// Index of the inflation of each level-m character among level-(m+1) ones;
// -1 when none matches.
inline std::vector<int> inflation_map(const std::vector<ClassFunction>& lo, const FiniteGroup& Glo,
                                      const std::vector<ClassFunction>& hi, const FiniteGroup& Ghi) {
  int M = std::lcm(lo.front().M, hi.front().M);
  const SL2Mod& Qlo = Glo.quotient();
  const SL2Mod& Qhi = Ghi.quotient();
  std::vector<int> map;
  for (const auto& f : lo) {
    ClassFunction fw = widen(f, M);
    int found = -1;
    for (size_t t = 0; t < hi.size() && found < 0; ++t) {
      ClassFunction hw = widen(hi[t], M);
      bool same = true;
      for (auto x : Ghi.class_reps())
        if (!(hw.at(x) == fw.at(Qlo.image(Qhi.lift(x))))) {
          same = false;
          break;
        }
      if (same) found = static_cast<int>(t);
    }
    map.push_back(found);
  }
  return map;
}

// Whether the level-m report sits inside the level-(m+1) report: every
// level-m label inflates to a level-(m+1) label and the entries agree there.
inline bool truncation_embeds(int p, int m) {
  TruncatedK0 lo = truncated_k0_data(p, m), hi = truncated_k0_data(p, m + 1);
  auto rows = inflation_map(lo.irrK, *lo.K, hi.irrK, *hi.K);
  auto cols = inflation_map(lo.irrI, *lo.I, hi.irrI, *hi.I);
  size_t nk = lo.irrK.size(), nk1 = hi.irrK.size();
  for (int x : rows)
    if (x < 0) return false;
  for (int x : cols)
    if (x < 0) return false;
  for (size_t i = 0; i < nk; ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      for (size_t side = 0; side < 2; ++side)
        if (lo.report.matrix[side * nk + i][j] != hi.report.matrix[side * nk1 + rows[i]][cols[j]]) return false;
  return true;
}

// Degenerate tree (torus mode): a line on which every stabilizer is T0.
// Level-m lattices have rank phi(p^m) and the matrix is (id, -id) stacked.
inline K0Report torus_k0_truncated(int p, int m) {
  K0Report r;
  r.p = p;
  r.kind = "torus";
  r.chi = "all (level " + std::to_string(m) + ")";
  long phi = ipow(p, m).get_si() / p * (p - 1);
  for (long i = 0; i < phi; ++i) r.col_labels.push_back("T0:" + std::to_string(i));
  for (int s = 0; s < 2; ++s)
    for (long i = 0; i < phi; ++i) r.row_labels.push_back(std::string(s == 0 ? "x0:" : "x1:") + std::to_string(i));
  r.matrix.assign(2 * phi, std::vector<mpz_class>(phi, 0));
  for (long i = 0; i < phi; ++i) {
    r.matrix[i][i] = 1;
    r.matrix[phi + i][i] = -1;
  }
  finish_report(r);
  return r;
}

}  // namespace bruhat
