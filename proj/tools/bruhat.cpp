// Command-line front end.  Every command prints JSON (or DOT/CSV when asked);
// exit codes: 0 ok, 1 a verification failed, 2 usage, 3 unstable level.

#include <iostream>

#include "CLI11.hpp"
#include "bruhat/verify.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace bruhat;

namespace {

constexpr const char* kSchema = "bruhat/1";

json vertex_json(const Vertex& v) {
  return {{"a", v.a}, {"b", v.b}, {"u", v.u.get_str()}, {"type", orbit_type(v)}};
}

json region_json(const std::string& kind, const Region& R) {
  json j{{"schema", kSchema}, {"kind", kind}, {"vertices", json::array()}, {"edges", json::array()}};
  for (const auto& v : R.vertices) j["vertices"].push_back(vertex_json(v));
  for (const auto& e : R.edges) j["edges"].push_back({vertex_json(e.v0), vertex_json(e.v1)});
  return j;
}

std::string region_csv(const Region& R) {
  std::string s = "a,b,u,type\n";
  for (const auto& v : R.vertices)
    s += std::to_string(v.a) + "," + std::to_string(v.b) + "," + v.u.get_str() + "," +
         std::to_string(orbit_type(v)) + "\n";
  return s;
}

// "v0:1" -> (v0, 1)
std::pair<StdSimplex, int> parse_site(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("expected <simplex>:<radius>, got " + s);
  return {parse_simplex(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

Vertex site_vertex(StdSimplex x, int p) {
  if (x == StdSimplex::Edge) throw std::invalid_argument("a vertex (v0 or v1) is required here");
  return x == StdSimplex::V0 ? std_edge(p).v0 : std_edge(p).v1;
}

json bounds_json(const ValuationPattern& P) {
  auto b = P.standard_bounds();
  if (!b) return nullptr;
  return {{"upper_left", (*b)[0]}, {"upper_right", (*b)[1]}, {"lower_left", (*b)[2]}, {"lower_right", (*b)[3]}};
}

json matrix_json(const IntMatrix& A) {
  json m = json::array();
  for (const auto& row : A) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x.get_si());
    m.push_back(r);
  }
  return m;
}

json k0_json(const K0Report& r) {
  json inv = json::array();
  for (const auto& d : r.snf.invariant_factors) inv.push_back(d.get_str());
  json tors = json::array();
  for (const auto& d : r.snf.torsion()) tors.push_back(d.get_str());
  return {{"schema", kSchema},
          {"p", r.p},
          {"chi", r.chi},
          {"kind", r.kind},
          {"approximation", r.kind == "block" ? "none" : "depth-m approximation"},
          {"lattices", {{"rows", r.row_labels}, {"columns", r.col_labels}}},
          {"matrix", matrix_json(r.matrix)},
          {"invariant_factors", inv},
          {"torsion", tors},
          {"kernel_rank", r.snf.kernel_rank()},
          {"coker", r.snf.coker_str()},
          {"oracle_ok", r.oracle_ok},
          {"interpretation", r.interpretation}};
}

std::string k0_csv(const K0Report& r) {
  std::string s = "row";
  for (const auto& c : r.col_labels) s += "," + c;
  s += "\n";
  for (size_t i = 0; i < r.row_labels.size(); ++i) {
    s += r.row_labels[i];
    for (const auto& x : r.matrix[i]) s += "," + x.get_str();
    s += "\n";
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bruhat-Tits tree, principal-series types and K0 of blocks for SL2(Q_p)"};
  app.require_subcommand(1);
  int p = 2;
  std::string chi_spec;

  auto* tree = app.add_subcommand("tree", "regions of the tree");
  std::string ball_site, half_site, side = "v0";
  std::vector<std::string> dist_mats;
  bool dot = false, csv = false;
  tree->add_option("--p", p, "prime")->required();
  auto* o_ball = tree->add_option("--ball", ball_site, "ball B_n(x), as x:n with x in {v0, v1}");
  auto* o_half = tree->add_option("--halftree", half_site, "half-tree of the standard edge, as e:n");
  tree->add_option("--side", side, "face of e the half-tree grows from")->check(CLI::IsMember({"v0", "v1"}));
  auto* o_dist = tree->add_option("--distance", dist_mats, "distance between g1.std and g2.std, matrices as a,b;c,d")
                     ->expected(2);
  o_ball->excludes(o_half)->excludes(o_dist);
  o_half->excludes(o_dist);
  tree->add_flag("--dot", dot, "emit DOT");
  tree->add_flag("--csv", csv, "emit the vertex list as CSV");

  auto* type = app.add_subcommand("type", "the type (J, rho) of a character");
  type->add_option("--p", p, "prime")->required();
  type->add_option("--chi", chi_spec, "character: n=<level>,gen=<k>[,gen2=<k>]")->required();

  auto* inter = app.add_subcommand("intertwine", "does g intertwine two types");
  std::string g_spec, chi2_spec;
  inter->add_option("--p", p, "prime")->required();
  inter->add_option("--chi", chi_spec, "character of the left type")->required();
  inter->add_option("--chi2", chi2_spec, "character of the right type (default: --chi)");
  inter->add_option("--g", g_spec, "element as a,b;c,d")->required();

  auto* mackey = app.add_subcommand("mackey", "block constituents at a simplex");
  std::string target = "v0";
  mackey->add_option("--p", p, "prime")->required();
  mackey->add_option("--chi", chi_spec, "character")->required();
  mackey->add_option("--target", target, "simplex")->check(CLI::IsMember({"v0", "v1", "e"}));
  mackey->add_flag("--csv", csv, "emit the induction table as CSV");

  auto* k0 = app.add_subcommand("k0", "K0 of a block, or a level-m approximation");
  int trunc = 0, torus = 0;
  k0->add_option("--p", p, "prime")->required();
  auto* o_chi = k0->add_option("--chi", chi_spec, "character of the block");
  auto* o_trunc = k0->add_option("--truncated", trunc, "whole group at level m");
  auto* o_torus = k0->add_option("--torus", torus, "torus line at level m");
  o_chi->excludes(o_trunc)->excludes(o_torus);
  o_trunc->excludes(o_torus);
  k0->add_flag("--csv", csv, "emit the matrix as CSV");

  auto* ver = app.add_subcommand("verify", "run verification suites");
  std::string suite = "all";
  VerifyOptions vo;
  std::vector<std::string> suites = suite_names();
  suites.push_back("all");
  ver->add_option("--suite", suite, "suite")->check(CLI::IsMember(suites));
  ver->add_option("--seed", vo.seed, "seed for sampled checks");
  ver->add_option("--p", vo.p, "restrict to one prime");
  ver->add_option("--max-distance", vo.max_distance, "largest distance for projind")->check(CLI::Range(1, 6));
  ver->add_option("--samples", vo.samples, "samples per sampled check")->check(CLI::Range(1, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto prime_ok = [](int q) {
    if (q < 2) return false;
    for (int d = 2; d * d <= q; ++d)
      if (q % d == 0) return false;
    return true;
  };

  try {
    if (!ver->parsed() && !prime_ok(p)) throw std::invalid_argument("--p must be a prime");
    if (ver->parsed() && vo.p != 0 && !prime_ok(vo.p)) throw std::invalid_argument("--p must be a prime");

    if (tree->parsed()) {
      if (!dist_mats.empty()) {
        Vertex a = act(parse_mat2(dist_mats[0]), std_vertex(), p), b = act(parse_mat2(dist_mats[1]), std_vertex(), p);
        std::cout << distance(a, b, p) << "\n";
        return 0;
      }
      Region R, shown;
      std::string kind;
      std::vector<Region> hl;
      if (!ball_site.empty()) {
        auto [x, n] = parse_site(ball_site);
        R = ball(site_vertex(x, p), n, p);
        shown = R;
        kind = "ball";
      } else if (!half_site.empty()) {
        auto [x, n] = parse_site(half_site);
        if (x != StdSimplex::Edge) throw std::invalid_argument("--halftree expects e:<n>");
        Edge e = std_edge(p);
        Vertex from = side == "v0" ? e.v0 : e.v1;
        R = half_tree(from, e, n, p);
        shown = ball(from, n + 1, p);
        hl.push_back(R);
        kind = "halftree";
      } else {
        throw std::invalid_argument("tree needs --ball, --halftree or --distance");
      }
      if (dot) std::cout << region_dot(shown, hl);
      else if (csv) std::cout << region_csv(R);
      else std::cout << region_json(kind, R).dump(2) << "\n";
      return 0;
    }

    if (type->parsed()) {
      SmoothCharacter c = parse_character(chi_spec, p);
      PrincipalSeriesType t = build_type(c);
      json j{{"schema", kSchema},
             {"p", p},
             {"chi", t.chi.str()},
             {"conductor", t.n},
             {"J", {{"bounds", bounds_json(t.J)}, {"diag_units", true}, {"pattern", t.J.describe()}}},
             {"rho", "chi(g_11)"},
             {"w_chi_full", w_chi_full(t.chi)}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (inter->parsed()) {
      SmoothCharacter c1 = parse_character(chi_spec, p);
      SmoothCharacter c2 = chi2_spec.empty() ? c1 : parse_character(chi2_spec, p);
      Mat2 g = parse_mat2(g_spec);
      if (g.det() != 1) throw std::invalid_argument("--g must have determinant 1");
      bool r = intertwines(g, build_type(c1), build_type(c2));
      std::cout << json{{"schema", kSchema}, {"p", p}, {"g", g.str()}, {"intertwines", r}}.dump(2) << "\n";
      return 0;
    }

    if (mackey->parsed()) {
      SmoothCharacter c = parse_character(chi_spec, p);
      StdSimplex x = parse_simplex(target);
      BlockData b = block_generators(x, c);
      long n = x == StdSimplex::Edge ? static_cast<long>(b.generators.size()) : constituent_count(x, c);
      json j{{"schema", kSchema}, {"p", p},          {"chi", c.minimal().str()},     {"target", target},
             {"w_chi_full", b.full_weyl}, {"constituents", n}, {"labels", b.constituents}};
      if (x != StdSimplex::Edge) {
        // Multiplicities of the vertex constituents in the inductions of the
        // edge generators.
        BlockData e = block_generators(StdSimplex::Edge, c);
        json table = json::array();
        for (size_t col = 0; col < e.generators.size(); ++col)
          table.push_back({{"edge", e.constituents[col]}, {"multiplicities", induction_column(x, c, col)}});
        j["induction"] = table;
        if (csv) {
          std::cout << "edge";
          for (const auto& l : b.constituents) std::cout << "," << l;
          std::cout << "\n";
          for (size_t col = 0; col < e.generators.size(); ++col) {
            std::cout << e.constituents[col];
            for (long m : induction_column(x, c, col)) std::cout << "," << m;
            std::cout << "\n";
          }
          return 0;
        }
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (k0->parsed()) {
      K0Report r;
      if (!chi_spec.empty()) r = block_k0(parse_character(chi_spec, p));
      else if (trunc > 0) r = group_k0_truncated(p, trunc);
      else if (torus > 0) r = torus_k0_truncated(p, torus);
      else throw std::invalid_argument("k0 needs --chi, --truncated or --torus");
      if (csv) std::cout << k0_csv(r);
      else std::cout << k0_json(r).dump(2) << "\n";
      return r.oracle_ok ? 0 : 1;
    }

    if (ver->parsed()) {
      std::vector<Check> checks = run_suite(suite, vo);
      json j{{"schema", kSchema},
             {"suite", suite},
             {"seed", vo.seed},
             {"p", vo.p},
             {"max_distance", vo.max_distance},
             {"samples", vo.samples},
             {"checks", json::array()}};
      size_t failed = 0;
      for (const auto& c : checks) {
        j["checks"].push_back({{"id", c.id}, {"config", c.config}, {"pass", c.pass}, {"detail", c.detail}});
        failed += !c.pass;
      }
      j["total"] = checks.size();
      j["failed"] = failed;
      j["verdict"] = failed == 0 ? "pass" : "fail";
      std::cout << j.dump(2) << "\n";
      return failed == 0 ? 0 : 1;
    }
  } catch (const UnstableLevel& e) {
    std::cerr << "unstable level: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    // Singular bases, non-integral reductions and the like come from the input.
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
