#include <gtest/gtest.h>

#include "bruhat/mv_complex.hpp"
#include "bruhat/verify.hpp"

using namespace bruhat;

namespace {

// Dense rank modulo a large prime; agrees with the rational rank for the
// small +-1 matrices assembled here.
long dense_rank_mod(const TwoTermComplex& C) {
  const std::int64_t P = 1'000'000'007;
  size_t R = C.basis0.size(), N = C.columns.size();
  std::vector<std::vector<std::int64_t>> A(N, std::vector<std::int64_t>(R, 0));
  for (size_t j = 0; j < N; ++j)
    for (const auto& [r, c] : C.columns[j]) A[j][r] = ((c % P) + P) % P;
  auto inv = [&](std::int64_t a) {
    std::int64_t r = 1, e = P - 2;
    for (; e; e >>= 1, a = a * a % P)
      if (e & 1) r = r * a % P;
    return r;
  };
  long rank = 0;
  for (size_t col = 0; col < R && rank < static_cast<long>(N); ++col) {
    size_t piv = rank;
    while (piv < N && A[piv][col] == 0) ++piv;
    if (piv == N) continue;
    std::swap(A[piv], A[rank]);
    std::int64_t f = inv(A[rank][col]);
    for (size_t i = 0; i < N; ++i) {
      if (i == static_cast<size_t>(rank) || A[i][col] == 0) continue;
      std::int64_t m = A[i][col] * f % P;
      for (size_t k = col; k < R; ++k) A[i][k] = ((A[i][k] - m * A[rank][k]) % P + P) % P;
    }
    ++rank;
  }
  return rank;
}

EdgeModule module_for(const std::string& chi, int p) {
  return EdgeModule(type_datum(build_type(parse_character(chi, p))), p);
}

}  // namespace

TEST(Complex, SingleClosedEdgeIsAcyclicInDegreeOne) {
  for (int p : {2, 3, 5}) {
    EdgeModule M = module_for("n=2,gen=1", p);
    Region R = with_faces({std_edge(p)});
    TwoTermComplex C = assemble_complex(M, R);
    EXPECT_EQ(C.basis1.size(), M.dim_V());
    EXPECT_EQ(C.basis0.size(), 2 * static_cast<size_t>(p + 1) * M.dim_V());
    EXPECT_EQ(C.h1(), 0);
    EXPECT_EQ(C.rank, dense_rank_mod(C));
  }
}

TEST(Complex, OpenEdgeCarriesAllOfDegreeOne) {
  int p = 3;
  EdgeModule M = module_for("n=1,gen=1", p);
  Region R = make_region({}, {std_edge(p)});
  TwoTermComplex C = assemble_complex(M, R);
  EXPECT_TRUE(C.basis0.empty());
  EXPECT_EQ(C.h1(), static_cast<long>(M.dim_V()));
}

TEST(Complex, BallsHaveOnlyDegreeZeroHomology) {
  for (int p : {2, 3})
    for (int n = 0; n <= 2; ++n) {
      EdgeModule M = module_for("n=2,gen=1", p);
      Region R = ball(std_vertex(), n, p);
      TwoTermComplex C = assemble_complex(M, R);
      long r = dense_rank_mod(C);
      EXPECT_EQ(C.rank, r);
      EXPECT_EQ(C.h1(), 0);
      long expect0 = static_cast<long>(R.vertices.size() * (p + 1) - R.edges.size()) * static_cast<long>(M.dim_V());
      EXPECT_EQ(C.h0(), expect0);
      EXPECT_EQ(complex_rank(C, -1), C.rank);
    }
}

TEST(Complex, LanDimensions) {
  int p = 5;
  EdgeModule M = module_for("n=2,gen=3", p);
  EXPECT_EQ(lan_evaluate(M, std_vertex()).dim, (p + 1) * M.dim_V());
  EXPECT_EQ(lan_evaluate(M, std_edge(p)).dim, M.dim_V());
  EXPECT_EQ(lan_evaluate(M, apartment_edge(3, p)).dim, M.dim_V());
}

TEST(Complex, EquivarianceUnderVertexStabilizer) {
  int p = 3;
  EdgeModule M = module_for("n=2,gen=1", p);
  Region R = ball(std_vertex(), 1, p);
  TwoTermComplex C = assemble_complex(M, R);
  for (const auto& y : pattern_K0(p).gens) EXPECT_TRUE(check_equivariance(M, R, C, y));
  // A translation moves the ball, so there is nothing to compare.
  EXPECT_FALSE(check_equivariance(M, R, C, Mat2::diag(p, mpq_class(1, p))));
}

TEST(Complex, RestrictionToSubregion) {
  int p = 2;
  EdgeModule M = module_for("n=3,gen=1,gen2=1", p);
  FibseqReport r = fibseq_check(M, ball(std_vertex(), 1, p), ball(std_vertex(), 2, p));
  EXPECT_TRUE(r.pass());
  EXPECT_GT(r.quotient_dim1, 0);
}

TEST(Filtration, IdentityBothRoutes) {
  for (int p : {2, 3, 5})
    for (int i = 0; i < 2; ++i)
      for (int d = 1; d <= 4; ++d) {
        auto [bounds, hulls] = filtquot_identity(i, d, p);
        EXPECT_TRUE(bounds) << p << " " << i << " " << d;
        EXPECT_TRUE(hulls) << p << " " << i << " " << d;
      }
}

TEST(Filtration, QuotientComplexes) {
  for (const auto& chi : all_characters(3, 1))
    for (int n = 0; n <= 1; ++n) EXPECT_TRUE(filtration_quotient_complex(chi, n).pass) << chi.str();
  EXPECT_THROW(filtration_quotient_complex(SmoothCharacter::trivial(3), -1), std::invalid_argument);
}

TEST(Complex, VerifySuitesPass) {
  VerifyOptions o;
  for (const auto& c : verify_complex(o)) EXPECT_TRUE(c.pass) << c.id << " " << c.config << " " << c.detail;
  for (const auto& c : verify_filtquot(o)) EXPECT_TRUE(c.pass) << c.id << " " << c.config << " " << c.detail;
}
