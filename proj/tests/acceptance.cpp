// One PASS/FAIL line per acceptance criterion.  A criterion passes when every
// check it gathers passes, its coverage condition holds and it finishes
// inside its time limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "bruhat/verify.hpp"

using namespace bruhat;

namespace {

struct Outcome {
  std::vector<Check> checks;
  bool coverage = true;
  std::string coverage_note;
};

std::vector<Check> only(const std::vector<Check>& cs, std::initializer_list<const char*> ids) {
  std::vector<Check> out;
  for (const auto& c : cs)
    for (const char* id : ids)
      if (c.id == id) out.push_back(c);
  return out;
}

size_t count_id(const std::vector<Check>& cs, const std::string& id) {
  size_t n = 0;
  for (const auto& c : cs) n += c.id == id;
  return n;
}

int failures = 0;

void criterion(int num, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::string err;
  try {
    o = body();
  } catch (const std::exception& e) {
    err = e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  size_t failed = 0;
  std::string first;
  for (const auto& c : o.checks)
    if (!c.pass) {
      if (!failed) first = c.id + " [" + c.config + "] " + c.detail;
      ++failed;
    }
  bool pass = err.empty() && !o.checks.empty() && failed == 0 && o.coverage && secs < limit_s;
  std::printf("%s %2d %-28s checks=%zu failed=%zu time=%.2fs limit=%.0fs", pass ? "PASS" : "FAIL", num,
              name.c_str(), o.checks.size(), failed, secs, limit_s);
  if (!err.empty()) std::printf(" exception: %s", err.c_str());
  if (failed) std::printf(" first failure: %s", first.c_str());
  if (!o.coverage) std::printf(" coverage: %s", o.coverage_note.c_str());
  if (secs >= limit_s) std::printf(" over time limit");
  std::printf("\n");
  std::fflush(stdout);
  if (!pass) ++failures;
}

}  // namespace

int main() {
  VerifyOptions o;  // all primes, seed 1, distance <= 3, 1000 samples

  criterion(1, "tree", 5, [&] {
    Outcome r;
    r.checks = verify_tree(o);
    r.coverage = count_id(r.checks, "tree.ball_size") == 4 * 5;  // p in {2,3,5,7}, n <= 4
    r.coverage_note = "ball sizes for p in {2,3,5,7}, n <= 4";
    return r;
  });

  criterion(2, "stabilizers/patterns", 30, [&] {
    Outcome r;
    r.checks = verify_patterns(o);
    r.coverage = o.samples >= 1000 && count_id(r.checks, "subgroups.membership_vs_fixset") > 0 &&
                 count_id(r.checks, "subgroups.intersect_oracle") > 0 &&
                 count_id(r.checks, "subgroups.conjugate_oracle") > 0;
    r.coverage_note = ">= 1000 samples per pattern with both oracles";
    return r;
  });

  criterion(3, "types", 60, [&] {
    Outcome r;
    r.checks = verify_type_construction(o);
    r.coverage = count_id(r.checks, "types.bounds") > 0 && count_id(r.checks, "types.rho_multiplicative") > 0 &&
                 count_id(r.checks, "types.iwahori_roundtrip") > 0;
    r.coverage_note = "bounds, multiplicativity and factorization";
    return r;
  });

  criterion(4, "intertwiner law", 120, [&] {
    Outcome r;
    r.checks = verify_intertwiners(o);
    r.coverage = count_id(r.checks, "types.intertwiner_law") > 0 && count_id(r.checks, "types.reflection_swaps") > 0;
    r.coverage_note = "decorated coset samples and the reflection swap";
    return r;
  });

  criterion(5, "diagram (length <= 3)", 60, [&] {
    Outcome r;
    r.checks = verify_diagram(o, 3);
    r.coverage = count_id(r.checks, "diagram.K_two_to_one") > 0;
    r.coverage_note = "collapse under K checked";
    return r;
  });

  criterion(6, "mackey oracle equivalence", 300, [&] {
    Outcome r;
    r.checks = only(verify_mackey(o), {"mackey.oracle_equivalence", "mackey.bruhat_cells"});
    auto configs = mackey_configs({2, 3, 5});
    std::set<int> primes;
    bool cond_ok = true;
    for (const auto& c : configs) {
      primes.insert(c.p);
      cond_ok = cond_ok && c.d1.chi.conductor() <= 2 && c.d2.chi.conductor() <= 2;
    }
    r.coverage = count_id(r.checks, "mackey.oracle_equivalence") >= 20 && primes == std::set<int>{2, 3, 5} && cond_ok;
    r.coverage_note = ">= 20 configurations over p in {2,3,5}, conductors <= 2";
    return r;
  });

  criterion(7, "numbirred/sameind", 120, [&] {
    Outcome r;
    r.checks = only(verify_mackey(o), {"mackey.numbirred", "mackey.sameind", "mackey.edge_irreducible"});
    r.coverage = count_id(r.checks, "mackey.numbirred") > 0 && count_id(r.checks, "mackey.sameind") > 0;
    r.coverage_note = "both statements checked";
    return r;
  });

  criterion(8, "filtquot identity (1..4)", 60, [&] {
    Outcome r;
    r.checks = verify_filtquot(o, 4);
    std::set<std::string> dists;
    for (const auto& c : r.checks)
      if (c.id == "filtquot.identity") dists.insert(c.config.substr(c.config.find("distance=")));
    r.coverage = dists.size() == 4;
    r.coverage_note = "distances 1..4";
    return r;
  });

  criterion(9, "projind (p in {3,5}, d <= 3)", 600, [&] {
    Outcome r;
    r.checks = verify_projind(o);
    size_t expect = 0;
    for (int p : {3, 5}) expect += all_characters(p, 2).size() * 2 * 3;
    r.coverage = count_id(r.checks, "projind.multiplicities") == expect;
    r.coverage_note = "every character of conductor <= 2, both vertices, distances 1..3";
    return r;
  });

  criterion(10, "complex", 300, [&] {
    Outcome r;
    r.checks = verify_complex(o);
    r.coverage = count_id(r.checks, "complex.single_edge") == 2 && count_id(r.checks, "complex.ball_h1") > 0 &&
                 count_id(r.checks, "complex.equivariance") > 0;
    r.coverage_note = "single edge, H1 on neighbourhoods, equivariance for p in {2,3}";
    return r;
  });

  criterion(11, "K0 outputs", 60, [&] {
    Outcome r;
    r.checks = verify_k0(o);
    r.coverage = count_id(r.checks, "k0.block") == 5 && count_id(r.checks, "k0.truncated_hand") == 1;
    r.coverage_note = "three Iwahori blocks, both p = 5 blocks and the hand matrix";
    return r;
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
