#pragma once

// Smooth characters of T0 = Z_p^x and the principal-series types (J, rho)
// they determine.  Character values are roots of unity kept as exponents:
// chi(x) = zeta_N^k.

#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bruhat/orbit.hpp"
#include "bruhat/subgroups.hpp"

namespace bruhat {

// A root of unity exp(2 pi i k / N), compared as a reduced fraction k/N.
struct Root {
  long k = 0;
  long N = 1;
  Root() = default;
  Root(long k_, long N_) : k(((k_ % N_) + N_) % N_), N(N_) {
    long g = std::gcd(k, N);
    if (g > 1) {
      k /= g;
      N /= g;
    }
    if (k == 0) N = 1;
  }
  friend bool operator==(const Root& a, const Root& b) { return a.k == b.k && a.N == b.N; }
  friend Root operator*(const Root& a, const Root& b) {
    long L = std::lcm(a.N, b.N);
    return Root(a.k * (L / a.N) + b.k * (L / b.N), L);
  }
  Root inv() const { return Root(-k, N); }
  // Exponent relative to zeta_M; N must divide M.
  long exponent_in(long M) const {
    if (M % N != 0) throw std::invalid_argument("root order does not divide field order");
    return k * (M / N);
  }
};

inline int least_primitive_root(long q, int p) {
  long phi = q / p * (p - 1);
  for (long r = 2; r < q; ++r) {
    if (r % p == 0) continue;
    long x = 1, ord = 0;
    do {
      x = x * r % q;
      ++ord;
    } while (x != 1);
    if (ord == phi) return static_cast<int>(r);
  }
  if (q == 2) return 1;
  throw std::logic_error("no primitive root");
}

// Character of (Z/p^level)^x, extended to Z_p^x through reduction.
class SmoothCharacter {
 public:
  SmoothCharacter() = default;

  // Canonical generators: the least primitive root mod p^level for odd p;
  // -1 and 5 for p = 2.  `gen_exps[i]` is the exponent of zeta_{ord_i} at
  // generator i, where ord_i is the generator's order.
  SmoothCharacter(int p, int level, std::vector<long> gen_exps) : p_(p), level_(level) {
    if (level < 0) throw std::invalid_argument("character level must be nonnegative");
    q_ = ipow(p, level).get_si();
    gen_orders_ = generator_orders(p, level);
    gens_ = generators(p, level);
    gen_exps.resize(gen_orders_.size(), 0);
    N_ = 1;
    for (long o : gen_orders_) N_ = std::lcm(N_, o);
    for (size_t i = 0; i < gen_orders_.size(); ++i) gen_root_.push_back(Root(gen_exps[i], gen_orders_[i]));
    build_table();
  }

  static SmoothCharacter trivial(int p) { return SmoothCharacter(p, 1, {}); }

  static std::vector<long> generator_orders(int p, int level) {
    if (level == 0) return {};
    if (p == 2) {
      if (level == 1) return {};
      if (level == 2) return {2};
      return {2, 1L << (level - 2)};
    }
    long q = ipow(p, level).get_si();
    return {q / p * (p - 1)};
  }
  static std::vector<long> generators(int p, int level) {
    if (level == 0) return {};
    long q = ipow(p, level).get_si();
    if (p == 2) {
      if (level == 1) return {};
      if (level == 2) return {q - 1};
      return {q - 1, 5};
    }
    return {least_primitive_root(q, p)};
  }

  int prime() const { return p_; }
  int level() const { return level_; }
  long modulus() const { return q_; }
  long exponent() const { return N_; }
  const std::vector<Root>& generator_values() const { return gen_root_; }
  const std::vector<long>& canonical_generators() const { return gens_; }

  // chi(x) for x a unit residue mod p^level.
  Root at_residue(long x) const {
    x = ((x % q_) + q_) % q_;
    if (table_[x].N == 0) throw std::domain_error("character evaluated at a non-unit");
    return table_[x];
  }
  Root operator()(const mpq_class& x) const {
    if (level_ == 0) return Root();
    return at_residue(residue(x, p_, level_).get_si());
  }

  // Minimal n with chi trivial on 1 + p^n Z_p; 0 for the trivial character.
  int conductor() const {
    for (int n = 0; n <= level_; ++n) {
      long m = ipow(p_, n).get_si();
      bool triv = true;
      for (long x = 1; x < q_ && triv; x += m)
        if (x % p_ != 0 && !(at_residue(x) == Root())) triv = false;
      if (triv) return n;
    }
    return level_;
  }

  // The same character re-expressed at another level (>= conductor).
  SmoothCharacter at_level(int level) const {
    if (level < conductor()) throw std::invalid_argument("level below conductor");
    auto gs = generators(p_, level);
    auto os = generator_orders(p_, level);
    std::vector<long> ex;
    for (size_t i = 0; i < gs.size(); ++i) {
      Root r = level_ == 0 ? Root() : (*this)(mpq_class(gs[i]));
      ex.push_back(r.exponent_in(os[i]));
    }
    SmoothCharacter c(p_, level, ex);
    return c;
  }

  // Minimal-level form; the trivial character is kept at level 1.
  SmoothCharacter minimal() const { return at_level(std::max(1, conductor())); }

  SmoothCharacter inverse() const {
    std::vector<long> ex;
    for (size_t i = 0; i < gen_root_.size(); ++i) ex.push_back(gen_root_[i].inv().exponent_in(gen_orders_[i]));
    return SmoothCharacter(p_, level_, ex);
  }
  SmoothCharacter power(long k) const {
    std::vector<long> ex;
    for (size_t i = 0; i < gen_root_.size(); ++i)
      ex.push_back(gen_root_[i].exponent_in(gen_orders_[i]) * k);
    return SmoothCharacter(p_, level_, ex);
  }

  // Equality as functions on Z_p^x.
  friend bool operator==(const SmoothCharacter& a, const SmoothCharacter& b) {
    if (a.p_ != b.p_) return false;
    int L = std::max(a.level_, b.level_);
    long q = ipow(a.p_, L).get_si();
    for (long x = 1; x < q; ++x) {
      if (x % a.p_ == 0) continue;
      if (!(a(mpq_class(x)) == b(mpq_class(x)))) return false;
    }
    return true;
  }

  long order() const {
    long o = 1;
    for (const auto& r : gen_root_) o = std::lcm(o, r.N);
    return o;
  }
  bool is_trivial() const { return order() == 1; }

  std::string str() const {
    std::ostringstream os;
    os << "chi(p=" << p_ << ",level=" << level_ << ",cond=" << conductor() << ",order=" << order() << ",gens=[";
    for (size_t i = 0; i < gens_.size(); ++i) {
      if (i) os << ",";
      os << gens_[i] << "->" << gen_root_[i].k << "/" << gen_root_[i].N;
    }
    os << "])";
    return os.str();
  }

 private:
  void build_table() {
    table_.assign(q_, Root(0, 1));
    for (auto& r : table_) r.N = 0;  // non-units
    if (q_ == 1) {
      table_[0] = Root();
      return;
    }
    // Walk the product of cyclic generator subgroups.
    std::vector<long> idx(gens_.size(), 0);
    long total = 1;
    for (long o : gen_orders_) total *= o;
    for (long t = 0; t < total; ++t) {
      long rem = t, x = 1;
      Root val;
      for (size_t i = 0; i < gens_.size(); ++i) {
        long k = rem % gen_orders_[i];
        rem /= gen_orders_[i];
        long y = 1;
        for (long j = 0; j < k; ++j) y = y * gens_[i] % q_;
        x = x * y % q_;
        val = val * Root(gen_root_[i].k * k, gen_root_[i].N);
      }
      table_[x] = val;
    }
    if (q_ > 1 && p_ == 2 && level_ == 1) table_[1] = Root();
  }

  int p_ = 2;
  int level_ = 0;
  long q_ = 1;
  long N_ = 1;
  std::vector<long> gen_orders_;
  std::vector<long> gens_;
  std::vector<Root> gen_root_;
  std::vector<Root> table_;
};

// Every character of (Z/p^level)^x, in generator-exponent order.
inline std::vector<SmoothCharacter> all_characters(int p, int level) {
  auto orders = SmoothCharacter::generator_orders(p, level);
  long total = 1;
  for (long o : orders) total *= o;
  std::vector<SmoothCharacter> out;
  for (long t = 0; t < total; ++t) {
    std::vector<long> ex;
    long rem = t;
    for (long o : orders) {
      ex.push_back(rem % o);
      rem /= o;
    }
    out.emplace_back(p, std::max(level, 1), ex);
  }
  return out;
}

// The principal-series type attached to chi: J = pointwise fixer of
// [w_{-ceil(n/2)}, w_{floor(n/2)}] and rho(g) = chi(g_11).
struct PrincipalSeriesType {
  SmoothCharacter chi;
  int n = 1;  // conductor, with the unramified case raised to 1
  ValuationPattern J;

  Root rho(const Mat2& g) const { return chi(g.a()); }
  int beta() const { return n / 2; }
  int gamma() const { return (n + 1) / 2; }
};

inline PrincipalSeriesType build_type(const SmoothCharacter& chi) {
  PrincipalSeriesType t;
  t.chi = chi.minimal();
  t.n = std::max(1, chi.conductor());
  t.J = std_pattern(t.n / 2, (t.n + 1) / 2, chi.prime(), "J");
  return t;
}

// Image of w in the finite Weyl group: false for diagonal, true for
// antidiagonal elements.
inline bool weyl_reflection_class(const Mat2& w) {
  if (w.b() == 0 && w.c() == 0 && w.a() != 0 && w.d() != 0) return false;
  if (w.a() == 0 && w.d() == 0 && w.b() != 0 && w.c() != 0) return true;
  throw NotInNormalizer();
}

inline SmoothCharacter conjugate_char(const SmoothCharacter& chi, const Mat2& w) {
  return weyl_reflection_class(w) ? chi.inverse() : chi;
}

inline bool w_chi_full(const SmoothCharacter& chi) { return chi.power(2).is_trivial(); }

// Reduced words in s0, s1 of length <= bound: 1, s0, s1, s0 s1, s1 s0, ...
struct WeylElement {
  std::string word;  // e.g. "s0s1"
  int length = 0;
  Mat2 g;
};

inline std::vector<WeylElement> weyl_elements(int bound, int p) {
  std::vector<WeylElement> out{{"1", 0, Mat2::identity()}};
  for (int l = 1; l <= bound; ++l)
    for (int first = 0; first < 2; ++first) {
      std::string w;
      int s = first;
      for (int i = 0; i < l; ++i) {
        w += s == 0 ? "s0" : "s1";
        s ^= 1;
      }
      out.push_back({w, l, alternating_word(first, l, p)});
    }
  return out;
}

// Whether rho_2^g and rho_1 agree on J1 intersect g J2 g^{-1}, where
// rho_2^g(y) = rho_2(g^{-1} y g).  The intersection is the stabilizer in J1
// of g applied to the fixed set of J2; agreement is tested on its Schreier
// generators, which generate a dense subgroup.
inline bool intertwines(const Mat2& g, const PrincipalSeriesType& t1, const PrincipalSeriesType& t2,
                        size_t limit = kDefaultOrbitLimit) {
  int p = t1.chi.prime();
  Tuple base = act(g, *t2.J.fixset, p);
  Orbit O = orbit(t1.J.gens, base, p, limit);
  Mat2 gi = g.inverse();
  for (const auto& y : schreier_generators(O, t1.J.gens))
    if (!(t1.rho(y) == t2.rho(gi * y * g))) return false;
  return true;
}

// Parses "n=2,gen=1[,gen2=0]".  Exponents are taken against the orders of the
// canonical generators of (Z/p^n)^x.
inline SmoothCharacter parse_character(const std::string& s, int p) {
  int n = -1;
  std::vector<long> ex{0, 0};
  std::string key, val;
  bool in_val = false;
  auto flush = [&]() {
    if (key.empty()) return;
    long v = std::stol(val);
    if (key == "n") n = static_cast<int>(v);
    else if (key == "gen") ex[0] = v;
    else if (key == "gen2") ex[1] = v;
    else throw std::invalid_argument("unknown character key: " + key);
    key.clear();
    val.clear();
    in_val = false;
  };
  for (char c : s) {
    if (c == ',') flush();
    else if (c == '=') in_val = true;
    else if (c != ' ') (in_val ? val : key).push_back(c);
  }
  flush();
  if (n < 0) throw std::invalid_argument("character needs n=<level>");
  auto orders = SmoothCharacter::generator_orders(p, n);
  ex.resize(orders.size());
  return SmoothCharacter(p, n, ex);
}

}  // namespace bruhat
