#include <gtest/gtest.h>

#include <random>

#include "bruhat/k0.hpp"
#include "bruhat/verify.hpp"

using namespace bruhat;

namespace {

mpz_class det(const IntMatrix& A, std::vector<size_t> rows, std::vector<size_t> cols) {
  if (rows.size() == 1) return A[rows[0]][cols[0]];
  mpz_class s = 0;
  for (size_t j = 0; j < cols.size(); ++j) {
    std::vector<size_t> rr(rows.begin() + 1, rows.end()), cc = cols;
    cc.erase(cc.begin() + static_cast<long>(j));
    mpz_class t = A[rows[0]][cols[j]] * det(A, rr, cc);
    s += (j % 2 ? -t : t);
  }
  return s;
}

void subsets(size_t n, size_t k, size_t from, std::vector<size_t>& cur, std::vector<std::vector<size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (size_t i = from; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Invariant factors from gcds of k x k minors: d_k = D_k / D_{k-1}.
std::vector<mpz_class> determinantal_factors(const IntMatrix& A) {
  size_t R = A.size(), C = A[0].size();
  std::vector<mpz_class> out;
  mpz_class prev = 1;
  for (size_t k = 1; k <= std::min(R, C); ++k) {
    std::vector<std::vector<size_t>> rs, cs;
    std::vector<size_t> cur;
    subsets(R, k, 0, cur, rs);
    subsets(C, k, 0, cur, cs);
    mpz_class g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) g = gcd(g, det(A, r, c));
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

long rational_rank(const IntMatrix& A) {
  std::vector<std::map<int, mpq_class>> cols(A[0].size());
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A[i].size(); ++j)
      if (A[i][j] != 0) cols[j][static_cast<int>(i)] = A[i][j];
  return sparse_rank(cols);
}

}  // namespace

TEST(Smith, HandExamples) {
  SmithForm s = smith_normal_form({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  EXPECT_EQ(s.invariant_factors, (std::vector<mpz_class>{2, 6, 12}));
  EXPECT_EQ(s.coker_str(), "Z/2 + Z/6 + Z/12");
  SmithForm t = smith_normal_form({{1}, {1}, {-1}, {-1}});
  EXPECT_EQ(t.kernel_rank(), 0u);
  EXPECT_EQ(t.coker_str(), "Z^3");
  SmithForm z = smith_normal_form({{0, 0}, {0, 0}});
  EXPECT_EQ(z.coker_str(), "Z^2");
  EXPECT_EQ(z.kernel_rank(), 2u);
}

TEST(Smith, MatchesDeterminantalDivisors) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> d(-6, 6), n(1, 4);
  for (int i = 0; i < 200; ++i) {
    size_t R = n(rng), C = n(rng);
    IntMatrix A(R, std::vector<mpz_class>(C));
    for (auto& row : A)
      for (auto& x : row) x = d(rng);
    SmithForm s = smith_normal_form(A);
    EXPECT_EQ(s.invariant_factors, determinantal_factors(A));
    for (size_t k = 1; k < s.invariant_factors.size(); ++k)
      EXPECT_EQ(s.invariant_factors[k] % s.invariant_factors[k - 1], 0);
  }
}

TEST(K0, BlockExamples) {
  K0Report q = block_k0(parse_character("n=1,gen=2", 5));  // quadratic
  EXPECT_TRUE(q.oracle_ok);
  EXPECT_EQ(q.snf.coker_str(), "Z^3");
  EXPECT_EQ(q.snf.kernel_rank(), 0u);
  K0Report g = block_k0(parse_character("n=1,gen=1", 5));  // order 4
  EXPECT_TRUE(g.oracle_ok);
  EXPECT_EQ(g.snf.coker_str(), "Z");
  EXPECT_EQ(g.snf.kernel_rank(), 1u);
  K0Report t = block_k0(SmoothCharacter::trivial(2));
  EXPECT_EQ(t.snf.coker_str(), "Z^3");
  for (const auto& chi : all_characters(3, 2)) {
    K0Report r = block_k0(chi);
    EXPECT_TRUE(r.oracle_ok) << r.chi;
    EXPECT_EQ(static_cast<long>(r.snf.rank()), rational_rank(r.matrix));
  }
}

TEST(K0, TruncatedLevelOneByHand) {
  K0Report r = group_k0_truncated(2, 1);
  EXPECT_TRUE(r.oracle_ok);
  EXPECT_TRUE(same_up_to_labels(r.matrix, hand_truncated_p2(), 3));
  EXPECT_EQ(r.snf.coker_str(), "Z^4");
}

TEST(K0, TruncatedRanks) {
  struct Row {
    int p, m;
    size_t rows, cols;
    std::string coker;
    size_t kernel;
  };
  // Row counts are twice the class numbers of SL2(Z/p^m); columns are the
  // class numbers of the image of I.
  for (const Row& e : std::vector<Row>{{2, 1, 6, 2, "Z^4", 0}, {3, 1, 14, 6, "Z^8", 0}, {5, 1, 18, 8, "Z^11", 1},
                                       {2, 2, 20, 10, "Z^10", 0}}) {
    K0Report r = group_k0_truncated(e.p, e.m);
    EXPECT_TRUE(r.oracle_ok);
    EXPECT_EQ(r.matrix.size(), e.rows);
    EXPECT_EQ(r.matrix[0].size(), e.cols);
    EXPECT_EQ(r.snf.coker_str(), e.coker) << e.p << "^" << e.m;
    EXPECT_EQ(r.snf.kernel_rank(), e.kernel);
    EXPECT_EQ(static_cast<long>(r.snf.rank()), rational_rank(r.matrix));
  }
}

TEST(K0, TruncationEmbeds) {
  EXPECT_TRUE(truncation_embeds(2, 1));
  EXPECT_TRUE(truncation_embeds(3, 1));
}

TEST(K0, VerifySuitePasses) {
  VerifyOptions o;
  for (const auto& c : verify_k0(o)) EXPECT_TRUE(c.pass) << c.id << " " << c.config << " " << c.detail;
}
