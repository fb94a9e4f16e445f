// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cubex/covers.hpp"
#include "cubex/graph_of_complexes.hpp"
#include "cubex/hyperplanes.hpp"
#include "cubex/pipeline.hpp"
#include "cubex_testing.hpp"
#include "goc_generators.hpp"
#include "goc_oracles.hpp"
#include "oracles.hpp"

using namespace cubex;
using namespace cubex::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

Outcome fail(const std::string& why) { return {false, why}; }

Outcome specialness_ground_truths() {
  Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    const std::size_t nv = uniform(rng, 1, 10);
    const std::size_t ne = uniform(rng, nv - 1, 20);
    const CubeComplex g = random_graph(rng, nv, ne, coin(rng));
    const SpecialVerdict v = check_special(g);
    if (!v.special) return fail("graph " + std::to_string(i) + ": " + v.witness);
  }
  if (!check_special(*load_complex("torus.cux")).special) return fail("torus not special");
  const SpecialVerdict k = check_special(*load_complex("klein.cux"));
  if (k.special || k.report.one_sided.empty()) return fail("klein square lacks a 1-sided witness");
  const SpecialVerdict l = check_special(*load_complex("self-osculating.cux"));
  if (l.report.direct_self_osculations.empty()) return fail("self-osculating complex: no direct self-osculation");
  const SpecialVerdict r = check_special(*load_complex("inter-osculating.cux"));
  if (r.report.inter_osculations.empty()) return fail("inter-osculating complex: no inter-osculation");
  return {true, "100 graphs special; torus special; klein 1-sided; osculation witnesses found"};
}

Outcome hyperplane_oracle() {
  std::size_t mismatches = 0;
  const std::size_t n = for_each_small_complex(2, [&](const CubeComplex& x) {
    const HyperplaneStructure h = compute_hyperplanes(x);
    if (!parallelism_agrees(x, h)) ++mismatches;
    for (auto rule : {OsculationRule::DirectedClass, OsculationRule::Literal}) {
      if (!(library_pathologies(x, h, detect_pathologies(x, h, rule)) == brute_force_pathologies(x, rule))) ++mismatches;
    }
  });
  std::ostringstream d;
  d << n << " complexes, " << mismatches << " discrepancies";
  return {mismatches == 0 && n > 0, d.str()};
}

Outcome cover_elevation_consistency() {
  Rng rng(103);
  std::size_t pairs = 0, bad = 0;
  while (pairs < 100) {
    const std::size_t nv = uniform(rng, 1, 3);
    ComplexPtr x = share(random_graph(rng, nv, uniform(rng, std::max<std::size_t>(nv, 2), 4)));
    const auto walk = immersed_walk(rng, *x, uniform(rng, 1, 6), coin(rng));
    if (!walk) continue;
    const bool closed = x->initial(walk->front()) == x->terminal(walk->back()) && coin(rng);
    const CubicalMap f = map_along(x, *walk, closed);
    const std::size_t d = uniform(rng, 1, 6);
    const CoveringSpace c = build_cover(x, random_graph_voltages(rng, *x, d));
    ++pairs;
    bad += !verify_cover(c);
    bad += c.total->euler_characteristic() != static_cast<long>(d) * x->euler_characteristic();
    bad += fiber_product(f, c).component_count() != elevation_count_oracle(f, c);
  }
  return {bad == 0, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " discrepancies"};
}

Outcome vertical_hyperplanes() {
  Rng rng(104);
  std::size_t violations = 0, embedded = 0, clean = 0;
  for (int i = 0; i < 50; ++i) {
    const GraphOfComplexes g = random_graph_of_spaces(rng, i % 2 == 0);
    const TotalSpace t = total_space(g);
    classify_hyperplanes(g, t);
    violations += vertical_violations(g, t).total();
    bool emb = true, cl = true;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      for (const CubicalMap* f : {&g.minus[e], &g.plus[e]}) {
        emb = emb && injective_on_cells(*f);
        cl = cl && !image_inter_osculates(*f);
      }
    }
    embedded += emb;
    clean += emb && cl;
  }
  std::ostringstream d;
  d << "50 total spaces (" << embedded << " embedded, " << clean << " clean), " << violations << " violations";
  return {violations == 0 && embedded > 0 && clean > 0, d.str()};
}

Outcome retractions() {
  Rng rng(105);
  std::size_t violations = 0, pairs = 0;
  for (int i = 0; i < 25; ++i) {
    const GraphOfComplexes g = random_constant_goc(rng, coin(rng));
    const TotalSpace t = total_space(g);
    const std::size_t base = uniform(rng, 0, g.vertex_count() - 1);
    const Retraction r = build_retraction(g, *g.constant, t, base);
    violations += !check_retraction(g, t, r).ok();
    const RetractionViolations v = retraction_violations(g, t, r);
    violations += v.total();
    pairs += v.pairs;
  }
  std::ostringstream d;
  d << "25 data, " << pairs << " parallel pairs, " << violations << " violations";
  return {violations == 0, d.str()};
}

Outcome monodromy_trivialization() {
  std::ostringstream d;
  for (const auto& [file, order] : std::vector<std::pair<std::string, std::size_t>>{{"rose-swap.goc", 2}, {"rose3-rot.goc", 3}}) {
    const GraphOfComplexes g = load_goc(data_path(file));
    const MonodromyResult m = compute_monodromy(g, *g.locally_constant);
    if (m.group.size() != order) return fail(file + ": monodromy order " + std::to_string(m.group.size()));
    const Trivialization tr = trivialize_monodromy(g, *g.locally_constant, m);
    if (tr.degree != order) return fail(file + ": cover degree " + std::to_string(tr.degree));
    const MonodromyResult again = compute_monodromy(tr.graph, tr.locally_constant);
    if (!again.trivial()) return fail(file + ": recomputed monodromy nontrivial");
    const ConstantStructure cs = make_constant(tr.graph, again);
    check_constant(tr.graph, cs);
    d << file << " order " << order << " -> degree " << tr.degree << "; ";
  }
  d << "constant structures verified";
  return {true, d.str()};
}

Outcome corollary_vs_scan() {
  Rng rng(107);
  std::size_t qualifying = 0, special = 0, tried = 0;
  while (qualifying < 50 && tried < 5000) {
    ++tried;
    const GraphOfComplexes g = random_constant_goc(rng, coin(rng, 0.8));
    if (!check_corollary_hypotheses(g).pass() || !check_special(*g.constant->space).special) continue;
    ++qualifying;
    const TotalSpace t = total_space(g);
    special += check_special(*t.complex).special &&
               brute_force_pathologies(*t.complex, OsculationRule::DirectedClass) == PathologySets{};
  }
  std::ostringstream d;
  d << special << "/" << qualifying << " special (" << tried << " instances drawn)";
  return {qualifying == 50 && special == 50, d.str()};
}

Outcome end_to_end() {
  std::ostringstream d;
  const GraphOfComplexes aab = load_goc(data_path("double-aab.goc"));
  Budgets b;
  b.vertex_degree = 8;
  const SpecializeResult r = specialize(aab, b);
  if (!r.ok()) return fail("double along (a,a,b): inconclusive at " + r.inconclusive().stage);
  const std::string text = write_certificate(r.certificate(), aab);
  const VerifyResult v = verify_certificate(text, aab);
  if (!v.ok) return fail("double along (a,a,b): replay rejected: " + v.reason);
  if (!(brute_force_pathologies(**r.final_complex, OsculationRule::DirectedClass) == PathologySets{})) {
    return fail("double along (a,a,b): final complex dirty under the brute-force scan");
  }
  d << "(a,a,b) certified at vertex degree " << r.certificate().vertex_degree << " and replayed; ";

  const GraphOfComplexes a = load_goc(data_path("double-a.goc"));
  const SpecializeResult ra = specialize(a, b);
  if (!ra.ok()) return fail("double along a: inconclusive");
  if (ra.certificate().vertex_degree != 1 || ra.certificate().gamma_degree != 1) return fail("double along a: degree not 1");
  if (!verify_certificate(write_certificate(ra.certificate(), a), a).ok) return fail("double along a: replay rejected");
  d << "loop a certified at degree 1";
  return {true, d.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "specialness ground truths", 1.0, specialness_ground_truths},
      {2, "hyperplane oracle on the exhaustive family", 10.0, hyperplane_oracle},
      {3, "cover/elevation consistency", 30.0, cover_elevation_consistency},
      {4, "vertical hyperplanes of graphs of graphs", 60.0, vertical_hyperplanes},
      {5, "retractions of constant vertex data", 60.0, retractions},
      {6, "monodromy trivialization", 60.0, monodromy_trivialization},
      {7, "corollary hypotheses versus direct scan", 120.0, corollary_vs_scan},
      {8, "end-to-end certificates for doubles of the rose", 300.0, end_to_end},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs > c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    failures += !o.pass;
    std::printf("%s %d %s: %s [%.2fs, limit %.0fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs,
                c.limit_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
