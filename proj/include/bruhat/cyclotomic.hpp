#pragma once

// Exact arithmetic in Q(zeta_N), elements stored in the power basis
// 1, z, ..., z^{phi(N)-1} modulo the N-th cyclotomic polynomial.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bruhat {

class CyclotomicField {
 public:
  explicit CyclotomicField(int N) : N_(N) {
    if (N < 1) throw std::invalid_argument("cyclotomic order must be positive");
    phi_poly_ = cyclotomic_poly(N);
    deg_ = static_cast<int>(phi_poly_.size()) - 1;
    // red_[k] = z^k reduced, for 0 <= k < N.
    std::vector<long> cur(deg_, 0);
    cur[0] = 1;
    if (deg_ == 0) cur = {};
    red_.reserve(N);
    for (int k = 0; k < N; ++k) {
      red_.push_back(cur);
      if (deg_ == 0) continue;
      std::vector<long> nxt(deg_, 0);
      long top = cur[deg_ - 1];
      for (int i = deg_ - 1; i >= 1; --i) nxt[i] = cur[i - 1];
      nxt[0] = 0;
      for (int i = 0; i < deg_; ++i) nxt[i] -= top * phi_poly_[i];
      cur = nxt;
    }
  }

  static std::shared_ptr<const CyclotomicField> get(int N) {
    static std::map<int, std::shared_ptr<const CyclotomicField>> cache;
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    auto f = std::make_shared<const CyclotomicField>(N);
    cache.emplace(N, f);
    return f;
  }

  int order() const { return N_; }
  int degree() const { return deg_; }
  const std::vector<long>& power(int k) const { return red_[((k % N_) + N_) % N_]; }

  // Integer coefficients of Phi_N, lowest degree first, monic.
  static std::vector<long> cyclotomic_poly(int N) {
    std::vector<long> num(N + 1, 0);
    num[0] = -1;
    num[N] = 1;
    for (int d = 1; d < N; ++d) {
      if (N % d != 0) continue;
      num = divide(num, cyclotomic_poly(d));
    }
    return num;
  }

 private:
  static std::vector<long> divide(std::vector<long> a, const std::vector<long>& b) {
    int da = static_cast<int>(a.size()) - 1, db = static_cast<int>(b.size()) - 1;
    std::vector<long> q(da - db + 1, 0);
    for (int i = da; i >= db; --i) {
      long c = a[i];  // b is monic
      q[i - db] = c;
      for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    for (int i = 0; i < db; ++i)
      if (a[i] != 0) throw std::logic_error("cyclotomic division not exact");
    return q;
  }

  int N_;
  int deg_;
  std::vector<long> phi_poly_;
  std::vector<std::vector<long>> red_;
};

class Cyclotomic {
 public:
  Cyclotomic() : Cyclotomic(1) {}
  explicit Cyclotomic(int N) : F_(CyclotomicField::get(N)), c_(F_->degree()) {}
  Cyclotomic(int N, const mpq_class& r) : Cyclotomic(N) {
    if (!c_.empty()) c_[0] = r;
  }

  static Cyclotomic root(int N, int k) {
    Cyclotomic z(N);
    const auto& pw = z.F_->power(k);
    for (size_t i = 0; i < pw.size(); ++i) z.c_[i] = pw[i];
    return z;
  }
  // sum_k counts[k] z^k, k read modulo N.
  static Cyclotomic from_counts(int N, const std::vector<mpz_class>& counts) {
    Cyclotomic z(N);
    for (size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0) continue;
      const auto& pw = z.F_->power(static_cast<int>(k));
      for (size_t i = 0; i < pw.size(); ++i)
        if (pw[i] != 0) z.c_[i] += counts[k] * pw[i];
    }
    return z;
  }

  int order() const { return F_->order(); }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  Cyclotomic& operator+=(const Cyclotomic& o) {
    check(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Cyclotomic& operator-=(const Cyclotomic& o) {
    check(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  Cyclotomic operator-() const {
    Cyclotomic r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Cyclotomic operator*(const mpq_class& s, Cyclotomic a) {
    for (auto& x : a.c_) x *= s;
    return a;
  }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    a.check(b);
    int d = static_cast<int>(a.c_.size());
    Cyclotomic r(a.order());
    if (d == 0) return r;
    std::vector<mpq_class> conv(2 * d - 1, 0);
    for (int i = 0; i < d; ++i) {
      if (a.c_[i] == 0) continue;
      for (int j = 0; j < d; ++j)
        if (b.c_[j] != 0) conv[i + j] += a.c_[i] * b.c_[j];
    }
    for (int k = 0; k < 2 * d - 1; ++k) {
      if (conv[k] == 0) continue;
      const auto& pw = a.F_->power(k);
      for (int i = 0; i < d; ++i)
        if (pw[i] != 0) r.c_[i] += conv[k] * pw[i];
    }
    return r;
  }
  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  // Complex conjugation: z^k -> z^{-k}.
  Cyclotomic conj() const { return galois(-1); }

  // The automorphism z -> z^a, for a prime to the order.
  Cyclotomic galois(int a) const {
    Cyclotomic r(order());
    for (size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == 0) continue;
      const auto& pw = F_->power(a * static_cast<int>(k));
      for (size_t i = 0; i < pw.size(); ++i)
        if (pw[i] != 0) r.c_[i] += c_[k] * pw[i];
    }
    return r;
  }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  mpq_class rational_value() const {
    if (!is_rational()) throw std::domain_error("cyclotomic number is not rational");
    return c_.empty() ? mpq_class(0) : c_[0];
  }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    return a.order() == b.order() && a.c_ == b.c_;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << c_[k];
      if (k > 0) os << "*z" << order() << "^" << k;
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  void check(const Cyclotomic& o) const {
    if (o.order() != order()) throw std::invalid_argument("mixed cyclotomic orders");
  }
  std::shared_ptr<const CyclotomicField> F_;
  std::vector<mpq_class> c_;
};

}  // namespace bruhat
