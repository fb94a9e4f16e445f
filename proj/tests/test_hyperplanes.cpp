#include <catch_amalgamated.hpp>

#include "cubex/covers.hpp"
#include "cubex/hyperplanes.hpp"
#include "cubex_testing.hpp"
#include "oracles.hpp"

using namespace cubex;
using namespace cubex::testing;

namespace {

DirectedEdge end_of(const CubeComplex& x, const std::string& token) { return parse_edge_token(x, token); }

bool same_pair(const CubeComplex& x, const EdgeEndPair& p, const std::string& v, const std::string& a, const std::string& b) {
  if (x.vertex_name(p.vertex) != v) return false;
  const DirectedEdge da = end_of(x, a), db = end_of(x, b);
  return (p.first == da && p.second == db) || (p.first == db && p.second == da);
}

}  // namespace

TEST_CASE("single edge has one two-sided hyperplane") {
  const CubeComplex x = parse_complex("vertex u\nvertex w\nedge a u w\n");
  const auto h = compute_hyperplanes(x);
  REQUIRE(h.hyperplanes.size() == 1);
  CHECK(h.hyperplanes[0].two_sided);
  CHECK(h.hyperplanes[0].directed_classes.size() == 2);
}

TEST_CASE("torus and Klein square hyperplanes") {
  const auto t = load_complex("torus.cux");
  const auto ht = compute_hyperplanes(*t);
  REQUIRE(ht.hyperplanes.size() == 2);
  CHECK(ht.hyperplanes[0].edges == std::vector<EdgeId>{0});
  CHECK(ht.hyperplanes[1].edges == std::vector<EdgeId>{1});
  CHECK(ht.hyperplanes[0].two_sided);
  CHECK(ht.hyperplanes[1].two_sided);
  CHECK(detect_pathologies(*t, ht).clean());

  const auto k = load_complex("klein.cux");
  const auto hk = compute_hyperplanes(*k);
  REQUIRE(hk.hyperplanes.size() == 2);
  CHECK_FALSE(hk.hyperplanes[0].two_sided);
  CHECK(hk.hyperplanes[0].directed_classes.size() == 1);
  CHECK(hk.hyperplanes[1].two_sided);
  const auto verdict = check_special(*k);
  CHECK_FALSE(verdict.special);
  CHECK(verdict.witness.find("one-sided") != std::string::npos);
}

TEST_CASE("literal osculation reading rejects the torus") {
  const auto t = load_complex("torus.cux");
  CHECK(check_special(*t, OsculationRule::DirectedClass).special);
  const auto literal = check_special(*t, OsculationRule::Literal);
  CHECK_FALSE(literal.special);
  CHECK_FALSE(literal.report.direct_self_osculations.empty());
}

TEST_CASE("two squares glued to a loop directly self-osculate") {
  const auto x = load_complex("self-osculating.cux");
  REQUIRE(validate(*x).npc);
  const auto v = check_special(*x);
  CHECK_FALSE(v.special);
  bool found = false;
  for (const auto& w : v.report.direct_self_osculations) found = found || same_pair(*x, w.at, "u", "e1+", "e2+");
  CHECK(found);
}

TEST_CASE("crossing hyperplanes that also osculate") {
  const auto x = load_complex("inter-osculating.cux");
  REQUIRE(validate(*x).npc);
  const auto h = compute_hyperplanes(*x);
  const auto r = detect_pathologies(*x, h);
  REQUIRE(r.inter_osculations.size() == 1);
  const auto& w = r.inter_osculations.front();
  const auto hx = h.of_edge[*x->find_edge("hx")];
  const auto f1 = h.of_edge[*x->find_edge("f1")];
  CHECK(h.of_edge[*x->find_edge("hz")] == hx);
  CHECK(h.of_edge[*x->find_edge("f2")] == f1);
  CHECK(std::minmax(w.first, w.second) == std::minmax(hx, f1));
  CHECK(same_pair(*x, w.crossing, "v1", "hx+", "f1+"));
  CHECK(same_pair(*x, w.osculation, "q", "hz+", "f2-"));
  CHECK(r.self_crossings.empty());
  CHECK(r.one_sided.empty());
  CHECK(r.direct_self_osculations.empty());
}

TEST_CASE("graphs are special") {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const auto nv = uniform(rng, 1, 8);
    const CubeComplex g = random_graph(rng, nv, uniform(rng, nv - 1, 20), coin(rng));
    const auto v = check_special(g);
    CHECK(v.special);
    CHECK(v.witness.empty());
  }
}

TEST_CASE("subcomplex osculation") {
  const auto r = load_complex("rose.cux");
  const auto h = compute_hyperplanes(*r);
  auto whole = subcomplex_osculation(*r, h, Subcomplex::whole(*r));
  for (const auto& f : whole) CHECK(f.osculations.empty());

  Subcomplex a = Subcomplex::empty(*r);
  a.vertices[0] = true;
  a.edges[0] = true;
  const auto fa = subcomplex_osculation(*r, h, a);
  CHECK(fa[0].crossing_edge == EdgeId{0});
  CHECK(fa[0].osculations.empty());
  CHECK_FALSE(fa[1].crossing_edge.has_value());
  CHECK(fa[1].osculations.size() == 2);
  CHECK_FALSE(fa[1].inter_osculates());

  Subcomplex bad = Subcomplex::empty(*r);
  bad.edges[0] = true;
  CHECK_THROWS_AS(subcomplex_osculation(*r, h, bad), Error);
}

TEST_CASE("attaching edge of the inter-osculating complex meets with the horizontal-parallel hyperplane") {
  const auto x = load_complex("inter-osculating.cux");
  const auto h = compute_hyperplanes(*x);
  Subcomplex y = Subcomplex::empty(*x);
  for (const char* v : {"v1", "w", "q"}) y.vertices[*x->find_vertex(v)] = true;
  for (const char* e : {"f1", "k"}) y.edges[*x->find_edge(e)] = true;
  const auto found = subcomplex_osculation(*x, h, y);
  const auto& hf = found[h.of_edge[*x->find_edge("f1")]];
  CHECK(hf.inter_osculates());
  bool at_q = false;
  for (const auto& [v, d] : hf.osculations) at_q = at_q || (x->vertex_name(v) == "q" && x->token(d) == "f2-");
  CHECK(at_q);
}

TEST_CASE("property: oracle agreement on the exhaustive small family") {
  std::size_t mismatches = 0;
  const std::size_t n = for_each_small_complex(2, [&](const CubeComplex& x) {
    const auto h = compute_hyperplanes(x);
    std::string why;
    if (!parallelism_agrees(x, h, &why)) ++mismatches;
    for (auto rule : {OsculationRule::DirectedClass, OsculationRule::Literal}) {
      if (!(library_pathologies(x, h, detect_pathologies(x, h, rule)) == brute_force_pathologies(x, rule))) ++mismatches;
    }
  });
  CHECK(n > 1000);
  CHECK(mismatches == 0);
}

TEST_CASE("property: witnesses satisfy their clauses") {
  for_each_small_complex(2, [&](const CubeComplex& x) {
    const auto h = compute_hyperplanes(x);
    const auto r = detect_pathologies(x, h);
    for (const auto& w : r.self_crossings) CHECK(x.consecutive(w.at.first, w.at.second));
    for (const auto& w : r.direct_self_osculations) {
      CHECK_FALSE(x.consecutive(w.at.first, w.at.second));
      CHECK(h.parallel(w.at.first, w.at.second));
    }
    for (const auto& w : r.inter_osculations) {
      CHECK(x.consecutive(w.crossing.first, w.crossing.second));
      CHECK_FALSE(x.consecutive(w.osculation.first, w.osculation.second));
      CHECK(h.dual(w.crossing.first) == w.first);
      CHECK(h.dual(w.osculation.first) == w.first);
    }
    // Undirected classes partition edges; each carries one or two directed classes.
    std::size_t total = 0;
    for (const auto& hp : h.hyperplanes) {
      total += hp.edges.size();
      CHECK((hp.directed_classes.size() == (hp.two_sided ? 2U : 1U)));
    }
    CHECK(total == x.edge_count());
  });
}

TEST_CASE("a double cover of the Klein square has only two-sided hyperplanes") {
  ComplexPtr k = load_complex("klein.cux");
  bool found = false;
  for (const auto& c : enumerate_covers(k, 2)) {
    if (c.degree() != 2) continue;
    const auto h = compute_hyperplanes(*c.total);
    bool all = true;
    for (const auto& hp : h.hyperplanes) all = all && hp.two_sided;
    found = found || all;
  }
  CHECK(found);
}
