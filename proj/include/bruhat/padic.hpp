#pragma once

// Exact p-adic bookkeeping over the rationals.  Every scalar is an element of
// Q viewed inside Q_p; nothing is truncated until reduce_mod.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "bruhat/errors.hpp"

namespace bruhat {

// p-adic valuation with an explicit infinite value for zero.
class Valuation {
 public:
  constexpr Valuation() : inf_(true), v_(0) {}
  constexpr Valuation(int v) : inf_(false), v_(v) {}  // NOLINT(implicit)
  static constexpr Valuation infinity() { return Valuation(); }

  constexpr bool is_infinite() const { return inf_; }
  int value() const {
    if (inf_) throw std::logic_error("valuation of zero has no finite value");
    return v_;
  }

  friend constexpr bool operator==(Valuation x, Valuation y) {
    return x.inf_ == y.inf_ && (x.inf_ || x.v_ == y.v_);
  }
  friend constexpr std::strong_ordering operator<=>(Valuation x, Valuation y) {
    if (x.inf_ || y.inf_) return x.inf_ == y.inf_ ? std::strong_ordering::equal
                                 : x.inf_ ? std::strong_ordering::greater
                                          : std::strong_ordering::less;
    return x.v_ <=> y.v_;
  }
  friend constexpr Valuation operator+(Valuation x, Valuation y) {
    if (x.inf_ || y.inf_) return Valuation();
    return Valuation(x.v_ + y.v_);
  }
  friend constexpr Valuation min(Valuation x, Valuation y) { return x <= y ? x : y; }
  // Bound check used by valuation patterns: v >= lo.
  constexpr bool at_least(int lo) const { return inf_ || v_ >= lo; }

  std::string str() const { return inf_ ? "inf" : std::to_string(v_); }
  friend std::ostream& operator<<(std::ostream& os, Valuation v) { return os << v.str(); }

 private:
  bool inf_;
  int v_;
};

inline int mpz_valuation(const mpz_class& z, int p) {
  if (z == 0) throw std::logic_error("mpz_valuation of zero");
  mpz_class t = z, pp = p;
  return static_cast<int>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), pp.get_mpz_t()));
}

inline Valuation valuation(const mpq_class& x, int p) {
  if (x == 0) return Valuation::infinity();
  return Valuation(mpz_valuation(x.get_num(), p) - mpz_valuation(x.get_den(), p));
}

inline mpz_class ipow(int p, int e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return r;
}

// p^e as a rational, any sign of e.
inline mpq_class qpow(int p, int e) {
  if (e >= 0) return mpq_class(ipow(p, e));
  return mpq_class(mpz_class(1), ipow(p, -e));
}

// Residue of x in Z/p^e; x must have nonnegative valuation.
inline mpz_class residue(const mpq_class& x, int p, int e) {
  mpz_class q = ipow(p, e);
  if (x == 0) return 0;
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), q.get_mpz_t()) == 0) {
    if (e == 0) return 0;
    throw NegativeValuation(x.get_str());
  }
  mpz_class r = x.get_num() * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
  return r;
}

// A scalar of Q_p carried as an exact rational with cached valuation.
class PadicScalar {
 public:
  PadicScalar(mpq_class x, int p) : x_(std::move(x)), p_(p) {
    x_.canonicalize();
    v_ = bruhat::valuation(x_, p_);
  }
  PadicScalar(long x, int p) : PadicScalar(mpq_class(x), p) {}

  const mpq_class& value() const { return x_; }
  int prime() const { return p_; }
  Valuation valuation() const { return v_; }
  bool is_zero() const { return v_.is_infinite(); }
  // u with x = p^v u, v(u) = 0.
  mpq_class unit_part() const {
    if (is_zero()) return 0;
    return x_ / qpow(p_, v_.value());
  }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    return PadicScalar(a.x_ + b.x_, a.p_);
  }
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
    return PadicScalar(a.x_ - b.x_, a.p_);
  }
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    return PadicScalar(a.x_ * b.x_, a.p_);
  }
  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    return PadicScalar(a.x_ / b.x_, a.p_);
  }
  friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
    return a.p_ == b.p_ && a.x_ == b.x_;
  }

 private:
  mpq_class x_;
  int p_;
  Valuation v_;
};

// 2x2 matrix over Q, row major.  Group elements of SL2(Q_p) and PGL2(Q_p)
// are represented by rational points; the prime enters only through
// valuations.
struct Mat2 {
  std::array<mpq_class, 4> e{1, 0, 0, 1};

  Mat2() = default;
  Mat2(mpq_class a, mpq_class b, mpq_class c, mpq_class d)
      : e{std::move(a), std::move(b), std::move(c), std::move(d)} {}

  const mpq_class& a() const { return e[0]; }
  const mpq_class& b() const { return e[1]; }
  const mpq_class& c() const { return e[2]; }
  const mpq_class& d() const { return e[3]; }

  static Mat2 identity() { return {}; }
  static Mat2 diag(const mpq_class& x, const mpq_class& y) { return Mat2(x, 0, 0, y); }
  static Mat2 upper(const mpq_class& x) { return Mat2(1, x, 0, 1); }
  static Mat2 lower(const mpq_class& y) { return Mat2(1, 0, y, 1); }

  mpq_class det() const { return e[0] * e[3] - e[1] * e[2]; }
  mpq_class trace() const { return e[0] + e[3]; }

  Mat2 inverse() const {
    mpq_class dt = det();
    if (dt == 0) throw SingularBasis();
    if (dt == 1) return Mat2(e[3], -e[1], -e[2], e[0]);
    return Mat2(e[3] / dt, -e[1] / dt, -e[2] / dt, e[0] / dt);
  }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2(x.e[0] * y.e[0] + x.e[1] * y.e[2], x.e[0] * y.e[1] + x.e[1] * y.e[3],
                x.e[2] * y.e[0] + x.e[3] * y.e[2], x.e[2] * y.e[1] + x.e[3] * y.e[3]);
  }
  friend Mat2 operator*(const mpq_class& s, const Mat2& x) {
    return Mat2(s * x.e[0], s * x.e[1], s * x.e[2], s * x.e[3]);
  }
  friend bool operator==(const Mat2& x, const Mat2& y) { return x.e == y.e; }

  bool is_identity() const { return e[0] == 1 && e[1] == 0 && e[2] == 0 && e[3] == 1; }
  // g h g^{-1}
  Mat2 conj(const Mat2& h) const { return (*this) * h * inverse(); }

  Valuation min_valuation(int p) const {
    Valuation m = Valuation::infinity();
    for (const auto& x : e) m = min(m, valuation(x, p));
    return m;
  }

  std::string str() const {
    std::ostringstream os;
    os << "[[" << e[0] << "," << e[1] << "],[" << e[2] << "," << e[3] << "]]";
    return os.str();
  }
  friend std::ostream& operator<<(std::ostream& os, const Mat2& m) { return os << m.str(); }
};

// Parses "a,b;c,d" with rational entries such as 1/5 or -3.
inline Mat2 parse_mat2(const std::string& s) {
  std::array<mpq_class, 4> out;
  std::string cur;
  int idx = 0;
  auto flush = [&]() {
    if (idx >= 4) throw std::invalid_argument("too many matrix entries: " + s);
    out[idx] = mpq_class(cur);
    out[idx].canonicalize();
    ++idx;
    cur.clear();
  };
  for (char ch : s) {
    if (ch == ',' || ch == ';') flush();
    else if (ch != ' ' && ch != '[' && ch != ']') cur.push_back(ch);
  }
  flush();
  if (idx != 4) throw std::invalid_argument("expected 4 matrix entries: " + s);
  return Mat2(out[0], out[1], out[2], out[3]);
}

// Canonical upper-triangular basis [[p^a, u], [0, p^b]] of a lattice class.
// After homothety normalization a, b >= 0, 0 <= u < p^a, and
// min(a, b, v(u)) = 0.
struct LatticeForm {
  int a = 0;
  int b = 0;
  mpz_class u = 0;

  friend bool operator==(const LatticeForm& x, const LatticeForm& y) {
    return x.a == y.a && x.b == y.b && x.u == y.u;
  }
  friend std::strong_ordering operator<=>(const LatticeForm& x, const LatticeForm& y) {
    if (auto c = x.a <=> y.a; c != 0) return c;
    if (auto c = x.b <=> y.b; c != 0) return c;
    int s = cmp(x.u, y.u);
    return s < 0 ? std::strong_ordering::less
                 : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  Mat2 basis(int p) const { return Mat2(mpq_class(ipow(p, a)), mpq_class(u), 0, mpq_class(ipow(p, b))); }
  std::string str() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + u.get_str() + ")";
  }
};

struct LatticeFormHash {
  size_t operator()(const LatticeForm& L) const noexcept {
    size_t h = std::hash<long>()(mpz_get_si(L.u.get_mpz_t()));
    h ^= static_cast<size_t>(L.a) * 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<size_t>(L.b) * 0xc2b2ae3d27d4eb4fULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Column-reduces `basis` to Hermite form and normalizes the homothety class.
inline LatticeForm lattice_canonical(const Mat2& basis, int p) {
  mpq_class a = basis.e[0], b = basis.e[1], c = basis.e[2], d = basis.e[3];
  if (a * d - b * c == 0) throw SingularBasis();
  // Put the row-2 entry of least valuation in column 2, then clear column 1.
  if (valuation(c, p) < valuation(d, p)) {
    std::swap(a, b);
    std::swap(c, d);
  }
  mpq_class x = a - c * b / d;
  int A = valuation(x, p).value();
  int B = valuation(d, p).value();
  mpq_class y = b * qpow(p, B) / d;
  y.canonicalize();
  // Reduce y modulo p^A Z_p, keeping the denominator a power of p.
  mpq_class u = 0;
  if (y != 0) {
    Valuation vy = valuation(y, p);
    int s = vy.value() < 0 ? -vy.value() : 0;
    int ex = A + s;
    if (ex > 0) {
      mpq_class shifted = y * qpow(p, s);
      mpz_class r = residue(shifted, p, ex);
      u = mpq_class(r) / qpow(p, s);
      u.canonicalize();
    }
  }
  int k = std::min(A, B);
  if (u != 0) k = std::min(k, valuation(u, p).value());
  LatticeForm L;
  L.a = A - k;
  L.b = B - k;
  mpq_class uu = u * qpow(p, -k);
  uu.canonicalize();
  if (uu.get_den() != 1) throw std::logic_error("lattice_canonical: non-integral offset");
  L.u = uu.get_num();
  return L;
}

// Exponents (dist, 0) of the relative elementary divisors after homothety
// normalization; dist is the tree distance.
inline std::pair<int, int> elementary_divisor_exponents(const LatticeForm& L1, const LatticeForm& L2, int p) {
  Mat2 M = L1.basis(p).inverse() * L2.basis(p);
  int vdet = valuation(M.det(), p).value();
  int vmin = M.min_valuation(p).value();
  return {vdet - 2 * vmin, 0};
}

// Matrix over Z/p^m.
struct ModMat2 {
  std::int64_t q = 1;
  std::array<std::int64_t, 4> e{1, 0, 0, 1};
  friend bool operator==(const ModMat2& x, const ModMat2& y) { return x.q == y.q && x.e == y.e; }
  ModMat2 operator*(const ModMat2& y) const {
    ModMat2 r;
    r.q = q;
    r.e[0] = (e[0] * y.e[0] + e[1] * y.e[2]) % q;
    r.e[1] = (e[0] * y.e[1] + e[1] * y.e[3]) % q;
    r.e[2] = (e[2] * y.e[0] + e[3] * y.e[2]) % q;
    r.e[3] = (e[2] * y.e[1] + e[3] * y.e[3]) % q;
    return r;
  }
  std::int64_t det() const { return (((e[0] * e[3] - e[1] * e[2]) % q) + q) % q; }
  std::string str() const {
    return "[[" + std::to_string(e[0]) + "," + std::to_string(e[1]) + "],[" + std::to_string(e[2]) +
           "," + std::to_string(e[3]) + "]] mod " + std::to_string(q);
  }
};

inline ModMat2 reduce_mod(const Mat2& g, int p, int m) {
  ModMat2 r;
  r.q = ipow(p, m).get_si();
  for (int i = 0; i < 4; ++i) {
    if (!valuation(g.e[i], p).at_least(0)) throw NegativeValuation(g.e[i].get_str());
    r.e[i] = residue(g.e[i], p, m).get_si();
  }
  return r;
}

inline bool is_integral(const Mat2& g, int p) { return g.min_valuation(p).at_least(0); }

}  // namespace bruhat
