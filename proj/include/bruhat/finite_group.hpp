#pragma once

// Finite congruence quotients SL2(Z/p^m), their subgroups, class functions,
// induced characters and inner products.  Elements are never stored as a
// list for the full group: they are ranked bijectively onto [0, |Q|).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <unordered_map>
#include <vector>

#include "bruhat/characters.hpp"
#include "bruhat/cyclotomic.hpp"
#include "bruhat/padic.hpp"
#include "bruhat/subgroups.hpp"

namespace bruhat {

inline constexpr std::uint64_t kQuotientBudget = 2'000'000;

struct DisjointSets {
  std::vector<std::uint32_t> parent;
  explicit DisjointSets(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

// SL2(Z/q) with q = p^m.  Rank layout: a unit gives (a, b, c) with d
// determined; a non-unit forces c to be a unit and gives (a, c, d).
class SL2Mod {
 public:
  SL2Mod(int p, int m) : p_(p), m_(m) {
    q_ = ipow(p, m).get_si();
    std::uint64_t phi = static_cast<std::uint64_t>(q_ / p * (p - 1));
    std::uint64_t q = static_cast<std::uint64_t>(q_);
    size_ = phi * q * q + (q / p) * phi * q;
    if (size_ > kQuotientBudget) throw BudgetExceeded("SL2(Z/" + std::to_string(q_) + ") exceeds the element budget");
    unit_idx_.assign(q_, -1);
    nonunit_idx_.assign(q_, -1);
    inv_.assign(q_, 0);
    for (long x = 0; x < q_; ++x) {
      if (x % p == 0) {
        nonunit_idx_[x] = static_cast<int>(nonunits_.size());
        nonunits_.push_back(x);
      } else {
        unit_idx_[x] = static_cast<int>(units_.size());
        units_.push_back(x);
        for (long y = 1; y < q_; ++y)
          if (x * y % q_ == 1) {
            inv_[x] = y;
            break;
          }
      }
    }
    if (q_ == 1) throw std::invalid_argument("level must be positive");
  }

  int prime() const { return p_; }
  int level() const { return m_; }
  long modulus() const { return q_; }
  std::uint64_t size() const { return size_; }

  std::uint32_t rank(const ModMat2& g) const {
    long a = g.e[0], b = g.e[1], c = g.e[2], d = g.e[3];
    std::uint64_t q = q_;
    if (unit_idx_[a] >= 0) return static_cast<std::uint32_t>((unit_idx_[a] * q + b) * q + c);
    std::uint64_t off = units_.size() * q * q;
    return static_cast<std::uint32_t>(off + (nonunit_idx_[a] * units_.size() + unit_idx_[c]) * q + d);
  }

  ModMat2 unrank(std::uint32_t r) const {
    ModMat2 g;
    g.q = q_;
    std::uint64_t q = q_, x = r;
    std::uint64_t off = units_.size() * q * q;
    if (x < off) {
      long c = x % q;
      x /= q;
      long b = x % q;
      long a = units_[x / q];
      g.e = {a, b, c, mod((1 + b * c) % q_ * inv_[a])};
    } else {
      x -= off;
      long d = x % q;
      x /= q;
      long c = units_[x % units_.size()];
      long a = nonunits_[x / units_.size()];
      g.e = {a, mod((a * d - 1) % q_ * inv_[c]), c, d};
    }
    return g;
  }

  std::uint32_t mul(std::uint32_t x, std::uint32_t y) const { return rank(unrank(x) * unrank(y)); }
  std::uint32_t inverse(std::uint32_t x) const {
    ModMat2 g = unrank(x);
    ModMat2 h = g;
    h.e = {g.e[3], mod(-g.e[1]), mod(-g.e[2]), g.e[0]};
    return rank(h);
  }
  std::uint32_t identity() const { return rank(ModMat2{q_, {1, 0, 0, 1}}); }
  std::uint32_t image(const Mat2& g) const { return rank(reduce_mod(g, p_, m_)); }
  // Integer lift with entries in [0, q).
  Mat2 lift(std::uint32_t x) const {
    ModMat2 g = unrank(x);
    return Mat2(g.e[0], g.e[1], g.e[2], g.e[3]);
  }
  // Topological generators of SL2(Z_p) reduce to generators here.
  std::vector<std::uint32_t> generators() const { return {image(Mat2::upper(1)), image(Mat2::lower(1))}; }
  long mod(long x) const { return ((x % q_) + q_) % q_; }

 private:
  int p_, m_;
  long q_;
  std::uint64_t size_;
  std::vector<long> units_, nonunits_, inv_;
  std::vector<int> unit_idx_, nonunit_idx_;
};

// A subgroup of SL2(Z/q) with its own conjugacy classes.
class FiniteGroup {
 public:
  FiniteGroup(std::shared_ptr<const SL2Mod> Q, std::vector<std::uint32_t> elems, std::vector<std::uint32_t> gens)
      : Q_(std::move(Q)), elems_(std::move(elems)), gens_(std::move(gens)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    pos_.assign(Q_->size(), -1);
    for (size_t i = 0; i < elems_.size(); ++i) pos_[elems_[i]] = static_cast<int>(i);
  }

  // Closure of the generators.
  static FiniteGroup generated(std::shared_ptr<const SL2Mod> Q, std::vector<std::uint32_t> gens) {
    std::vector<char> seen(Q->size(), 0);
    std::uint32_t id = Q->identity();
    std::vector<std::uint32_t> out{id};
    seen[id] = 1;
    for (size_t i = 0; i < out.size(); ++i)
      for (auto s : gens) {
        std::uint32_t y = Q->mul(out[i], s);
        if (!seen[y]) {
          seen[y] = 1;
          out.push_back(y);
        }
      }
    return FiniteGroup(std::move(Q), std::move(out), std::move(gens));
  }

  static FiniteGroup whole(std::shared_ptr<const SL2Mod> Q) {
    std::vector<std::uint32_t> all(Q->size());
    std::iota(all.begin(), all.end(), 0u);
    auto gens = Q->generators();
    return FiniteGroup(std::move(Q), std::move(all), std::move(gens));
  }

  // Image of a pattern through its generators.
  static FiniteGroup image_of(std::shared_ptr<const SL2Mod> Q, const ValuationPattern& P) {
    if (P.gens.empty()) throw std::logic_error("pattern has no generators");
    std::vector<std::uint32_t> g;
    for (const auto& x : P.gens) g.push_back(Q->image(x));
    return generated(std::move(Q), std::move(g));
  }

  // Image of a pattern through lift membership; valid when the pattern's
  // determinacy level is at most m and the pattern lies in SL2(Z_p).
  static FiniteGroup image_by_lifts(std::shared_ptr<const SL2Mod> Q, const ValuationPattern& P) {
    if (P.determinacy_level() > Q->level()) throw std::invalid_argument("pattern not determined at this level");
    if (!P.inside_k0()) throw std::invalid_argument("pattern is not inside SL2(Z_p)");
    std::vector<std::uint32_t> out;
    for (std::uint32_t x = 0; x < Q->size(); ++x)
      if (P.contains(Q->lift(x))) out.push_back(x);
    std::vector<std::uint32_t> gens;
    for (const auto& g : P.gens) gens.push_back(Q->image(g));
    return FiniteGroup(std::move(Q), std::move(out), std::move(gens));
  }

  const SL2Mod& quotient() const { return *Q_; }
  std::shared_ptr<const SL2Mod> quotient_ptr() const { return Q_; }
  size_t order() const { return elems_.size(); }
  const std::vector<std::uint32_t>& elements() const { return elems_; }
  const std::vector<std::uint32_t>& gens() const { return gens_; }
  bool contains(std::uint32_t x) const { return pos_[x] >= 0; }
  int position(std::uint32_t x) const { return pos_[x]; }

  // Closed under multiplication by its generators.
  bool is_closed() const {
    for (auto x : elems_)
      for (auto s : gens_)
        if (!contains(Q_->mul(x, s))) return false;
    return true;
  }

  void compute_classes() const {
    if (!class_of_.empty()) return;
    DisjointSets ds(elems_.size());
    std::vector<std::uint32_t> ginv;
    for (auto s : gens_) ginv.push_back(Q_->inverse(s));
    for (size_t i = 0; i < elems_.size(); ++i)
      for (size_t k = 0; k < gens_.size(); ++k) {
        std::uint32_t y = Q_->mul(Q_->mul(gens_[k], elems_[i]), ginv[k]);
        ds.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(pos_[y]));
      }
    class_of_.assign(elems_.size(), -1);
    std::vector<int> root_id(elems_.size(), -1);
    for (size_t i = 0; i < elems_.size(); ++i) {
      std::uint32_t r = ds.find(static_cast<std::uint32_t>(i));
      if (root_id[r] < 0) {
        root_id[r] = static_cast<int>(class_rep_.size());
        class_rep_.push_back(elems_[i]);
        class_size_.push_back(0);
      }
      class_of_[i] = root_id[r];
      ++class_size_[root_id[r]];
    }
  }
  size_t num_classes() const {
    compute_classes();
    return class_rep_.size();
  }
  int class_of(std::uint32_t x) const {
    compute_classes();
    return class_of_[pos_[x]];
  }
  const std::vector<std::uint64_t>& class_sizes() const {
    compute_classes();
    return class_size_;
  }
  const std::vector<std::uint32_t>& class_reps() const {
    compute_classes();
    return class_rep_;
  }

  long element_order(std::uint32_t x) const {
    long k = 1;
    std::uint32_t y = x, id = Q_->identity();
    while (y != id) {
      y = Q_->mul(y, x);
      ++k;
    }
    return k;
  }
  long exponent() const {
    long e = 1;
    for (auto r : class_reps()) e = std::lcm(e, element_order(r));
    return e;
  }

 private:
  std::shared_ptr<const SL2Mod> Q_;
  std::vector<std::uint32_t> elems_;
  std::vector<std::uint32_t> gens_;
  std::vector<int> pos_;
  mutable std::vector<int> class_of_;
  mutable std::vector<std::uint32_t> class_rep_;
  mutable std::vector<std::uint64_t> class_size_;
};

using CharFn = std::function<Root(std::uint32_t)>;

// Exact class function on a finite group, values in Q(zeta_M).
struct ClassFunction {
  const FiniteGroup* G = nullptr;
  int M = 1;
  std::vector<Cyclotomic> values;  // per class of G

  Cyclotomic degree() const { return values[G->class_of(G->quotient().identity())]; }
  Cyclotomic at(std::uint32_t x) const { return values[G->class_of(x)]; }
  friend bool operator==(const ClassFunction& a, const ClassFunction& b) {
    return a.G == b.G && a.values == b.values;
  }
  ClassFunction operator-(const ClassFunction& o) const {
    ClassFunction r = *this;
    for (size_t i = 0; i < values.size(); ++i) r.values[i] -= o.values[i];
    return r;
  }
  ClassFunction operator+(const ClassFunction& o) const {
    ClassFunction r = *this;
    for (size_t i = 0; i < values.size(); ++i) r.values[i] += o.values[i];
    return r;
  }
  ClassFunction scaled(const mpq_class& s) const {
    ClassFunction r = *this;
    for (auto& v : r.values) v = s * v;
    return r;
  }
  ClassFunction times(const ClassFunction& o) const {
    ClassFunction r = *this;
    for (size_t i = 0; i < values.size(); ++i) r.values[i] = values[i] * o.values[i];
    return r;
  }
};

// Class function given by a character of G itself.
inline ClassFunction class_function(const FiniteGroup& G, int M, const CharFn& rho) {
  ClassFunction f{&G, M, {}};
  f.values.assign(G.num_classes(), Cyclotomic(M));
  std::vector<char> done(G.num_classes(), 0);
  for (auto x : G.elements()) {
    int c = G.class_of(x);
    if (done[c]) continue;
    done[c] = 1;
    f.values[c] = Cyclotomic::root(M, static_cast<int>(rho(x).exponent_in(M)));
  }
  return f;
}

inline ClassFunction trivial_character(const FiniteGroup& G, int M = 1) {
  return class_function(G, M, [](std::uint32_t) { return Root(); });
}

// ind_H^G rho at a class c: |G| / (|H| |c|) * sum over h in H meeting c.
inline ClassFunction induced_character(const FiniteGroup& H, const CharFn& rho, const FiniteGroup& G, int M) {
  size_t nc = G.num_classes();
  std::vector<std::vector<mpz_class>> counts(nc, std::vector<mpz_class>(M, 0));
  for (auto h : H.elements()) {
    if (!G.contains(h)) throw std::invalid_argument("induced_character: H is not inside G");
    long k = rho(h).exponent_in(M);
    counts[G.class_of(h)][k] += 1;
  }
  ClassFunction f{&G, M, {}};
  const auto& cs = G.class_sizes();
  for (size_t c = 0; c < nc; ++c) {
    mpq_class s(mpz_class(static_cast<unsigned long>(G.order())),
                mpz_class(static_cast<unsigned long>(H.order())) * mpz_class(static_cast<unsigned long>(cs[c])));
    s.canonicalize();
    f.values.push_back(s * Cyclotomic::from_counts(M, counts[c]));
  }
  return f;
}

// Induction of a class function of H (a subgroup of G with the same field).
inline ClassFunction induce(const ClassFunction& f, const FiniteGroup& G) {
  const FiniteGroup& H = *f.G;
  size_t nc = G.num_classes();
  std::vector<Cyclotomic> sums(nc, Cyclotomic(f.M));
  for (auto h : H.elements()) sums[G.class_of(h)] += f.at(h);
  ClassFunction r{&G, f.M, {}};
  const auto& cs = G.class_sizes();
  for (size_t c = 0; c < nc; ++c) {
    mpq_class s(mpz_class(static_cast<unsigned long>(G.order())),
                mpz_class(static_cast<unsigned long>(H.order())) * mpz_class(static_cast<unsigned long>(cs[c])));
    s.canonicalize();
    r.values.push_back(s * sums[c]);
  }
  return r;
}

// Re-expresses a class function over Q(zeta_M) for a multiple M of its order.
inline ClassFunction widen(const ClassFunction& f, int M) {
  if (M == f.M) return f;
  if (M % f.M != 0) throw std::invalid_argument("field order must be a multiple");
  ClassFunction g{f.G, M, {}};
  for (const auto& v : f.values) {
    Cyclotomic acc(M);
    for (size_t k = 0; k < v.coeffs().size(); ++k)
      if (v.coeffs()[k] != 0) acc += v.coeffs()[k] * Cyclotomic::root(M, static_cast<int>(k * (M / f.M)));
    g.values.push_back(acc);
  }
  return g;
}

// (1/|G|) sum_c |c| f1(c) conj(f2(c)).
inline Cyclotomic inner_product_value(const ClassFunction& f1, const ClassFunction& f2) {
  if (f1.G != f2.G || f1.M != f2.M) throw std::invalid_argument("inner product of unrelated class functions");
  Cyclotomic acc(f1.M);
  const auto& cs = f1.G->class_sizes();
  for (size_t c = 0; c < f1.values.size(); ++c)
    acc += mpq_class(static_cast<unsigned long>(cs[c])) * (f1.values[c] * f2.values[c].conj());
  return mpq_class(1, static_cast<unsigned long>(f1.G->order())) * acc;
}

// Integer-valued inner product; raises NonIntegral otherwise.
inline long inner_product(const ClassFunction& f1, const ClassFunction& f2) {
  Cyclotomic v = inner_product_value(f1, f2);
  if (!v.is_rational() || v.rational_value().get_den() != 1) throw NonIntegral(v.str());
  return v.rational_value().get_num().get_si();
}

// Double coset representatives H1 \ G / H2 (least rank in each).
inline std::vector<std::uint32_t> double_coset_reps(const FiniteGroup& H1, const FiniteGroup& G,
                                                    const FiniteGroup& H2) {
  const SL2Mod& Q = G.quotient();
  DisjointSets ds(G.order());
  for (size_t i = 0; i < G.order(); ++i) {
    std::uint32_t x = G.elements()[i];
    for (auto s : H1.gens()) ds.unite(static_cast<std::uint32_t>(i), G.position(Q.mul(s, x)));
    for (auto s : H2.gens()) ds.unite(static_cast<std::uint32_t>(i), G.position(Q.mul(x, s)));
  }
  std::vector<std::uint32_t> reps;
  for (size_t i = 0; i < G.order(); ++i)
    if (ds.find(static_cast<std::uint32_t>(i)) == i) reps.push_back(G.elements()[i]);
  return reps;
}

// Sum over double cosets of [rho1 = rho2^x on H1 intersect x H2 x^{-1}].
inline long mackey_dim_hom_finite(const FiniteGroup& H1, const CharFn& rho1, const FiniteGroup& G,
                                  const FiniteGroup& H2, const CharFn& rho2, size_t* num_double_cosets = nullptr) {
  const SL2Mod& Q = G.quotient();
  auto reps = double_coset_reps(H1, G, H2);
  if (num_double_cosets) *num_double_cosets = reps.size();
  long total = 0;
  for (auto x : reps) {
    std::uint32_t xi = Q.inverse(x);
    bool ok = true;
    for (auto y : H1.elements()) {
      std::uint32_t z = Q.mul(Q.mul(xi, y), x);
      if (!H2.contains(z)) continue;
      if (!(rho1(y) == rho2(z))) {
        ok = false;
        break;
      }
    }
    if (ok) ++total;
  }
  return total;
}

// Character of a type, read on a level-m quotient.
inline CharFn rho_on_quotient(const PrincipalSeriesType& t, const SL2Mod& Q) {
  if (t.chi.level() > Q.level()) throw std::invalid_argument("character level exceeds quotient level");
  const SmoothCharacter chi = t.chi;
  const SL2Mod* q = &Q;
  return [chi, q](std::uint32_t x) { return chi.at_residue(q->unrank(x).e[0]); };
}

// x -> f(x^k).
inline ClassFunction power_map(const ClassFunction& f, int k) {
  const FiniteGroup& G = *f.G;
  const SL2Mod& Q = G.quotient();
  ClassFunction r = f;
  const auto& reps = G.class_reps();
  for (size_t c = 0; c < reps.size(); ++c) {
    std::uint32_t y = Q.identity();
    for (int i = 0; i < k; ++i) y = Q.mul(y, reps[c]);
    r.values[c] = f.values[G.class_of(y)];
  }
  return r;
}

// Irreducible characters by splitting, used as an independent cross-check of
// the modular route below on small quotients.  Candidates are inductions of linear
// characters of cyclic subgroups and tensor products of characters found so
// far.  Each candidate is reduced against the known irreducibles; remainders
// are pooled and pairwise size-reduced (they are virtual characters, so all
// inner products are integers), and a remainder of norm 1 is +-(a new
// irreducible).  Complete when the count reaches the number of classes.
inline constexpr size_t kSplittingBudget = 340;

inline std::vector<ClassFunction> split_irreducibles(const FiniteGroup& G,
                                                     const std::vector<ClassFunction>& extra = {}) {
  if (G.order() > kSplittingBudget) throw BudgetExceeded("character splitting is limited to small quotients");
  int M = static_cast<int>(G.exponent());
  const SL2Mod& Q = G.quotient();
  std::vector<ClassFunction> irr{trivial_character(G, M)};
  const size_t target = G.num_classes();
  std::vector<ClassFunction> pool;
  std::vector<long> norms;

  auto reduce = [&](ClassFunction f) {
    for (const auto& chi : irr) {
      long c = inner_product(f, chi);
      if (c != 0) f = f - chi.scaled(c);
    }
    return f;
  };
  // Galois conjugates of an irreducible are irreducible.
  auto accept = [&](ClassFunction r) {
    if (r.degree().rational_value() < 0) r = r.scaled(-1);
    for (int a = 1; a < M; ++a) {
      if (std::gcd(a, M) != 1) continue;
      ClassFunction s = r;
      for (auto& v : s.values) v = v.galois(a);
      if (std::find(irr.begin(), irr.end(), s) == irr.end()) irr.push_back(std::move(s));
    }
  };
  // Adds a candidate; returns true when new irreducibles appeared.
  auto absorb = [&](const ClassFunction& cand) {
    ClassFunction r = reduce(cand);
    long n = inner_product(r, r);
    if (n == 0) return false;
    if (n == 1) {
      accept(r);
      return true;
    }
    pool.push_back(std::move(r));
    norms.push_back(n);
    return false;
  };
  // Re-reduces the pool after new irreducibles, then size-reduces it.
  auto tidy = [&]() {
    bool changed = true;
    while (changed && irr.size() < target) {
      changed = false;
      for (size_t i = 0; i < pool.size(); ++i) {
        pool[i] = reduce(pool[i]);
        norms[i] = inner_product(pool[i], pool[i]);
      }
      for (size_t i = 0; i < pool.size() && !changed; ++i) {
        if (norms[i] == 0) continue;
        for (size_t j = 0; j < pool.size() && !changed; ++j) {
          if (i == j || norms[j] == 0 || norms[j] > norms[i]) continue;
          long ip = inner_product(pool[i], pool[j]);
          // Nearest integer to ip / norms[j].
          long c = (2 * ip + (ip >= 0 ? norms[j] : -norms[j])) / (2 * norms[j]);
          if (c == 0) continue;
          ClassFunction r = pool[i] - pool[j].scaled(c);
          long n = inner_product(r, r);
          if (n >= norms[i]) continue;
          pool[i] = std::move(r);
          norms[i] = n;
          if (n == 1) {
            accept(pool[i]);
            norms[i] = 0;
          }
          changed = true;
        }
      }
      std::vector<ClassFunction> keep;
      std::vector<long> kn;
      for (size_t i = 0; i < pool.size(); ++i)
        if (norms[i] > 0) {
          keep.push_back(std::move(pool[i]));
          kn.push_back(norms[i]);
        }
      pool = std::move(keep);
      norms = std::move(kn);
    }
  };

  std::vector<ClassFunction> inductions;
  for (auto x : G.class_reps()) {
    FiniteGroup C = FiniteGroup::generated(G.quotient_ptr(), {x});
    long o = static_cast<long>(C.order());
    std::unordered_map<std::uint32_t, long> power;
    std::uint32_t y = Q.identity();
    for (long k = 0; k < o; ++k) {
      power.emplace(y, k);
      y = Q.mul(y, x);
    }
    for (long j = 0; j < o; ++j) {
      auto rho = [&power, j, o](std::uint32_t z) { return Root(j * power.at(z), o); };
      inductions.push_back(induced_character(C, rho, G, M));
    }
  }
  for (const auto& f : extra) inductions.push_back(f);
  for (const auto& f : inductions) {
    if (irr.size() >= target) break;
    absorb(f);
    tidy();
  }
  // Symmetric and alternating squares, then tensor products, until stable.
  for (size_t done = 0; done < irr.size() && irr.size() < target; ++done) {
    const ClassFunction f = irr[done];
    ClassFunction sq = f.times(f), f2 = power_map(f, 2);
    absorb((sq + f2).scaled(mpq_class(1, 2)));
    absorb((sq - f2).scaled(mpq_class(1, 2)));
    tidy();
    for (size_t j = 0; j <= done && irr.size() < target; ++j) {
      absorb(f.times(irr[j]));
      tidy();
    }
    for (size_t j = 0; j < inductions.size() && irr.size() < target; ++j) {
      absorb(f.times(inductions[j]));
      tidy();
    }
  }
  if (irr.size() != target) throw std::runtime_error("irreducible character splitting incomplete");
  return irr;
}


namespace detail {

// Arithmetic in F_r for a prime r < 2^31.
struct ModP {
  std::int64_t r;
  std::int64_t mul(std::int64_t a, std::int64_t b) const { return a * b % r; }
  std::int64_t add(std::int64_t a, std::int64_t b) const { return (a + b) % r; }
  std::int64_t sub(std::int64_t a, std::int64_t b) const { return ((a - b) % r + r) % r; }
  std::int64_t pow(std::int64_t a, std::int64_t e) const {
    std::int64_t x = 1;
    a %= r;
    for (; e > 0; e >>= 1, a = a * a % r)
      if (e & 1) x = x * a % r;
    return x;
  }
  std::int64_t inv(std::int64_t a) const { return pow(a, r - 2); }
};

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::int64_t primitive_root_mod(std::int64_t r) {
  std::vector<std::int64_t> qs;
  std::int64_t n = r - 1;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      qs.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) qs.push_back(n);
  ModP F{r};
  for (std::int64_t g = 2;; ++g) {
    bool ok = true;
    for (auto q : qs)
      if (F.pow(g, (r - 1) / q) == 1) ok = false;
    if (ok) return g;
  }
}

using ModMatrix = std::vector<std::vector<std::int64_t>>;

// Basis of the right null space of A (rows x cols).
inline std::vector<std::vector<std::int64_t>> null_space(ModMatrix A, const ModP& F) {
  size_t R = A.size(), C = R ? A[0].size() : 0;
  std::vector<int> pivot_col;
  size_t row = 0;
  for (size_t c = 0; c < C && row < R; ++c) {
    size_t piv = row;
    while (piv < R && A[piv][c] == 0) ++piv;
    if (piv == R) continue;
    std::swap(A[row], A[piv]);
    std::int64_t iv = F.inv(A[row][c]);
    for (auto& x : A[row]) x = F.mul(x, iv);
    for (size_t i = 0; i < R; ++i)
      if (i != row && A[i][c] != 0) {
        std::int64_t f = A[i][c];
        for (size_t j = 0; j < C; ++j) A[i][j] = F.sub(A[i][j], F.mul(f, A[row][j]));
      }
    pivot_col.push_back(static_cast<int>(c));
    ++row;
  }
  std::vector<char> is_pivot(C, 0);
  for (int c : pivot_col) is_pivot[c] = 1;
  std::vector<std::vector<std::int64_t>> basis;
  for (size_t f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::int64_t> v(C, 0);
    v[f] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = F.sub(0, A[i][f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Characteristic polynomial (low degree first) through Hessenberg form.
inline std::vector<std::int64_t> char_poly(ModMatrix H, const ModP& F) {
  size_t n = H.size();
  for (size_t m = 1; m + 1 < n; ++m) {
    size_t i = m;
    while (i < n && H[i][m - 1] == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(H[i], H[m]);
      for (auto& row : H) std::swap(row[i], row[m]);
    }
    std::int64_t iv = F.inv(H[m][m - 1]);
    for (size_t k = m + 1; k < n; ++k) {
      std::int64_t u = F.mul(H[k][m - 1], iv);
      if (u == 0) continue;
      for (size_t j = 0; j < n; ++j) H[k][j] = F.sub(H[k][j], F.mul(u, H[m][j]));
      for (size_t j = 0; j < n; ++j) H[j][m] = F.add(H[j][m], F.mul(u, H[j][k]));
    }
  }
  // p_k(x) = (x - h_kk) p_{k-1} - sum_i h_ik (prod h_{j,j-1}) p_{i-1}
  std::vector<std::vector<std::int64_t>> P(n + 1);
  P[0] = {1};
  for (size_t k = 1; k <= n; ++k) {
    std::vector<std::int64_t> q(k + 1, 0);
    for (size_t d = 0; d < P[k - 1].size(); ++d) {
      q[d + 1] = F.add(q[d + 1], P[k - 1][d]);
      q[d] = F.sub(q[d], F.mul(H[k - 1][k - 1], P[k - 1][d]));
    }
    std::int64_t t = 1;
    for (size_t i = k - 1; i >= 1; --i) {
      t = F.mul(t, H[i][i - 1]);
      std::int64_t c = F.mul(t, H[i - 1][k - 1]);
      if (c != 0)
        for (size_t d = 0; d < P[i - 1].size(); ++d) q[d] = F.sub(q[d], F.mul(c, P[i - 1][d]));
    }
    P[k] = std::move(q);
  }
  return P[n];
}

}  // namespace detail

// Irreducible characters through the class algebra over F_r, r = 1 mod the
// exponent: the vectors (|C| chi(C) / chi(1))_C are the common eigenvectors
// of the class multiplication matrices.  Values are lifted to Q(zeta_M) from
// their eigenvalue multiplicities and the result is checked exactly (unit
// norms, degree sum |G|).
inline std::vector<ClassFunction> irreducible_characters(const FiniteGroup& G) {
  const SL2Mod& Q = G.quotient();
  const size_t k = G.num_classes();
  const auto& reps = G.class_reps();
  const auto& sizes = G.class_sizes();
  const std::int64_t order = static_cast<std::int64_t>(G.order());
  const int M = static_cast<int>(G.exponent());

  std::int64_t bound = 2 * static_cast<std::int64_t>(std::sqrt(static_cast<double>(order))) + 2;
  std::int64_t r = M + 1;
  while (r <= bound || !detail::is_prime(r) || order % r == 0) r += M;
  detail::ModP F{r};
  std::int64_t zM = F.pow(detail::primitive_root_mod(r), (r - 1) / M);

  // a[i][j][c] = #{x in C_i : x^{-1} g_c in C_j}.
  std::vector<detail::ModMatrix> A(k, detail::ModMatrix(k, std::vector<std::int64_t>(k, 0)));
  for (size_t c = 0; c < k; ++c)
    for (auto x : G.elements()) {
      int i = G.class_of(x), j = G.class_of(Q.mul(Q.inverse(x), reps[c]));
      A[i][j][c] = (A[i][j][c] + 1) % r;
    }

  // Split F_r^k into common eigenlines.  Subspaces are kept in echelon form:
  // basis vector t is 1 at piv[t] and 0 at the other pivots.
  struct Space {
    std::vector<std::vector<std::int64_t>> basis;
    std::vector<size_t> piv;
  };
  auto echelon = [&](std::vector<std::vector<std::int64_t>> B) {
    Space S;
    for (size_t t = 0; t < B.size(); ++t) {
      size_t p = 0;
      while (B[t][p] == 0) ++p;
      std::int64_t iv = F.inv(B[t][p]);
      for (auto& x : B[t]) x = F.mul(x, iv);
      for (size_t s = 0; s < B.size(); ++s)
        if (s != t && B[s][p] != 0) {
          std::int64_t f = B[s][p];
          for (size_t j = 0; j < k; ++j) B[s][j] = F.sub(B[s][j], F.mul(f, B[t][j]));
        }
      S.piv.push_back(p);
    }
    S.basis = std::move(B);
    return S;
  };
  std::vector<std::vector<std::int64_t>> id(k, std::vector<std::int64_t>(k, 0));
  for (size_t i = 0; i < k; ++i) id[i][i] = 1;
  std::vector<Space> spaces{echelon(id)}, lines;

  std::mt19937_64 rng(0x5eedULL);
  std::vector<detail::ModMatrix> ops;
  for (int t = 0; t < 3; ++t) {
    detail::ModMatrix Z(k, std::vector<std::int64_t>(k, 0));
    for (size_t i = 0; i < k; ++i) {
      std::int64_t c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(r));
      for (size_t a = 0; a < k; ++a)
        for (size_t b = 0; b < k; ++b) Z[a][b] = F.add(Z[a][b], F.mul(c, A[i][a][b]));
    }
    ops.push_back(std::move(Z));
  }
  for (const auto& Ai : A) ops.push_back(Ai);

  for (const auto& Op : ops) {
    std::vector<Space> next;
    for (auto& S : spaces) {
      size_t d = S.basis.size();
      if (d == 1) {
        lines.push_back(std::move(S));
        continue;
      }
      // Restriction: column t holds the pivot coordinates of Op * basis[t].
      detail::ModMatrix B(d, std::vector<std::int64_t>(d, 0));
      std::vector<std::vector<std::int64_t>> images(d, std::vector<std::int64_t>(k, 0));
      for (size_t t = 0; t < d; ++t) {
        for (size_t a = 0; a < k; ++a) {
          std::int64_t acc = 0;
          for (size_t b = 0; b < k; ++b)
            if (Op[a][b] && S.basis[t][b]) acc = F.add(acc, F.mul(Op[a][b], S.basis[t][b]));
          images[t][a] = acc;
        }
        for (size_t s = 0; s < d; ++s) B[s][t] = images[t][S.piv[s]];
      }
      auto cp = detail::char_poly(B, F);
      size_t found = 0;
      std::vector<Space> parts;
      for (std::int64_t lam = 0; lam < r && found < d; ++lam) {
        std::int64_t v = 0;
        for (size_t e = cp.size(); e-- > 0;) v = F.add(F.mul(v, lam), cp[e]);
        if (v != 0) continue;
        detail::ModMatrix Bl = B;
        for (size_t s = 0; s < d; ++s) Bl[s][s] = F.sub(Bl[s][s], lam);
        auto ns = detail::null_space(Bl, F);
        std::vector<std::vector<std::int64_t>> sub;
        for (const auto& coef : ns) {
          std::vector<std::int64_t> w(k, 0);
          for (size_t t = 0; t < d; ++t)
            if (coef[t])
              for (size_t j = 0; j < k; ++j) w[j] = F.add(w[j], F.mul(coef[t], S.basis[t][j]));
          sub.push_back(std::move(w));
        }
        found += sub.size();
        parts.push_back(echelon(std::move(sub)));
      }
      if (found != d) throw std::runtime_error("class algebra does not split over the chosen prime");
      for (auto& P : parts) (P.basis.size() == 1 ? lines : next).push_back(std::move(P));
    }
    spaces = std::move(next);
    if (spaces.empty()) break;
  }
  if (!spaces.empty() || lines.size() != k) throw std::runtime_error("class algebra splitting incomplete");

  const int id_class = G.class_of(Q.identity());
  std::vector<int> inv_class(k), elem_order(k);
  std::vector<std::vector<int>> powers(k);  // powers[c][t] = class of g_c^t
  for (size_t c = 0; c < k; ++c) {
    inv_class[c] = G.class_of(Q.inverse(reps[c]));
    elem_order[c] = static_cast<int>(G.element_order(reps[c]));
    std::uint32_t y = Q.identity();
    for (int t = 0; t < elem_order[c]; ++t) {
      powers[c].push_back(G.class_of(y));
      y = Q.mul(y, reps[c]);
    }
  }

  std::vector<ClassFunction> out;
  std::int64_t sqrt_order = static_cast<std::int64_t>(std::sqrt(static_cast<double>(order))) + 1;
  for (const auto& L : lines) {
    std::vector<std::int64_t> w = L.basis[0];
    std::int64_t s = F.inv(w[id_class]);
    for (auto& x : w) x = F.mul(x, s);
    std::int64_t denom = 0;
    for (size_t c = 0; c < k; ++c)
      denom = F.add(denom, F.mul(F.mul(w[c], w[inv_class[c]]), F.inv(static_cast<std::int64_t>(sizes[c] % r))));
    std::int64_t d2 = F.mul(order % r, F.inv(denom));
    std::int64_t deg = 0;
    for (std::int64_t d = 1; d <= sqrt_order; ++d)
      if (order % d == 0 && d * d % r == d2) deg = d;
    if (deg == 0) throw std::runtime_error("no admissible degree for an eigenline");
    std::vector<std::int64_t> val(k);
    for (size_t c = 0; c < k; ++c) val[c] = F.mul(F.mul(w[c], deg), F.inv(static_cast<std::int64_t>(sizes[c] % r)));

    ClassFunction f{&G, M, {}};
    for (size_t c = 0; c < k; ++c) {
      int o = elem_order[c];
      std::int64_t zo = F.pow(zM, M / o), oinv = F.inv(o);
      std::vector<mpz_class> counts(M, 0);
      std::int64_t total = 0;
      for (int e = 0; e < o; ++e) {
        std::int64_t acc = 0, step = F.pow(zo, (static_cast<std::int64_t>(o) - e) % o);
        std::int64_t z = 1;
        for (int t = 0; t < o; ++t, z = F.mul(z, step)) acc = F.add(acc, F.mul(val[powers[c][t]], z));
        acc = F.mul(acc, oinv);
        if (acc > deg) throw std::runtime_error("eigenvalue multiplicity out of range");
        counts[static_cast<size_t>(e) * (M / o)] = static_cast<long>(acc);
        total += acc;
      }
      if (total != deg) throw std::runtime_error("eigenvalue multiplicities do not add up to the degree");
      f.values.push_back(Cyclotomic::from_counts(M, counts));
    }
    out.push_back(std::move(f));
  }

  mpz_class degsq = 0;
  for (const auto& f : out) {
    if (inner_product(f, f) != 1) throw std::runtime_error("lifted character is not irreducible");
    mpz_class d = f.degree().rational_value().get_num();
    degsq += d * d;
  }
  if (degsq != static_cast<unsigned long>(order)) throw std::runtime_error("degrees do not account for the group order");
  // Trivial character first, then by degree.
  std::stable_sort(out.begin(), out.end(), [](const ClassFunction& a, const ClassFunction& b) {
    return a.degree().rational_value() < b.degree().rational_value();
  });
  auto triv = std::find(out.begin(), out.end(), trivial_character(G, M));
  std::rotate(out.begin(), triv, triv + 1);
  return out;
}

}  // namespace bruhat
