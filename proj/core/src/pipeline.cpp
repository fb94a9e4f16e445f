#include "cubex/pipeline.hpp"

#include <cstdio>
#include <sstream>

namespace cubex {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t input_hash(const GraphOfComplexes& g) { return fnv1a64(write_goc(g)); }

std::vector<CubicalMap> derive_edge_immersions(const GraphOfComplexes& g, const ConstantStructure& cs, std::size_t base) {
  check_constant(g, cs);
  const auto back = inverse(cs.psi.at(base));
  if (!back) throw Error("psi of the base vertex is not an isomorphism");
  std::vector<CubicalMap> fs;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const GraphEdge& ge = g.edges[e];
    CubicalMap f = compose(compose(g.minus[e], cs.psi[ge.from]), *back);
    if (!(f == compose(compose(g.plus[e], cs.psi[ge.to]), *back))) {
      throw Error("constant structure disagrees on the two sides of edge '" + ge.name + "'");
    }
    if (!check_local_isometry(f).ok) throw Error("derived map of edge '" + ge.name + "' is not a local isometry");
    f.set_name("f-" + ge.name);
    fs.push_back(std::move(f));
  }
  return fs;
}

namespace {

std::vector<ElevationReport> judge_elevations(const std::vector<CubicalMap>& fs, const CoveringSpace& c,
                                              const HyperplaneStructure& h, bool stop_early) {
  std::vector<ElevationReport> out;
  for (std::size_t e = 0; e < fs.size(); ++e) {
    const FiberProduct fp = fiber_product(fs[e], c);
    for (const auto& el : fp.elevations) {
      ElevationReport r{e, el.degree, is_embedding(el.to_cover), false};
      for (const auto& finding : subcomplex_osculation(*c.total, h, image(el.to_cover))) {
        r.inter_osculates = r.inter_osculates || finding.inter_osculates();
      }
      out.push_back(r);
      if (stop_early && (!r.embedded || r.inter_osculates)) return out;
    }
  }
  return out;
}

}  // namespace

GoodCoverSearchResult find_good_vertex_cover(const ComplexPtr& x, const std::vector<CubicalMap>& fs, std::size_t max_degree) {
  for (const auto& f : fs) {
    if (f.target_ptr() != x) throw Error("edge immersions must share the vertex space as target");
  }
  GoodCoverSearchResult out;
  for_each_cover(*x, max_degree, [&](const VoltageAssignment& v) {
    if (!is_regular(*x, v)) return true;
    ++out.candidates_tried;
    CoveringSpace c = build_cover(x, v);
    c.regular = true;
    if (!check_special(*c.total).special) return true;
    const auto h = compute_hyperplanes(*c.total);
    auto reports = judge_elevations(fs, c, h, true);
    for (const auto& r : reports) {
      if (!r.embedded || r.inter_osculates) return true;
    }
    out.elevations = std::move(reports);
    out.cover = std::move(c);
    return false;
  });
  out.budget_exhausted = !out.cover;
  return out;
}

FinalCover assemble_final_cover(const GraphOfComplexes& g, const LocallyConstantStructure& lc, std::size_t gamma_degree,
                                const std::vector<Permutation>& gamma_perms, std::size_t base,
                                const VoltageAssignment& vertex_cover) {
  Trivialization tr = lift_graph(g, lc, gamma_degree, gamma_perms);
  if (base >= tr.graph.vertex_count()) throw Error("base vertex out of range");
  const MonodromyResult m = compute_monodromy(tr.graph, tr.locally_constant);
  if (!m.trivial()) throw Error("graph cover does not trivialize the monodromy");
  ConstantStructure cs = make_constant(tr.graph, m);
  TotalSpace t = total_space(tr.graph);
  Retraction r = build_retraction(tr.graph, cs, t, base);
  const CubeComplex& xv = *tr.graph.vertex_spaces[base];
  if (vertex_cover.perms.size() != xv.edge_count()) throw Error("vertex cover has the wrong number of edges");
  if (!satisfies_relators(xv, vertex_cover)) throw Error("vertex cover voltages violate a square relation");
  if (!is_transitive(xv, vertex_cover)) throw Error("vertex cover is not connected");
  CoveringSpace cover = build_cover(t.complex, pull_back(r.map, vertex_cover), g.name + "~");
  return {std::move(tr), std::move(cs), std::move(t), std::move(r), std::move(cover)};
}

namespace {

/// Cells of the cover lying over vertex space u of the total space.
ComplexPtr preimage_of_vertex_space(const FinalCover& fc, std::size_t u) {
  const CubeComplex& x = *fc.cover.total;
  const CubicalMap& p = fc.cover.projection;
  const TotalSpace& t = fc.total;
  CubeComplex out(fc.trivial.graph.vertex_names[u] + "^");
  std::vector<VertexId> vid(x.vertex_count(), 0);
  std::vector<EdgeId> eid(x.edge_count(), 0);
  std::vector<SquareId> sid(x.square_count(), 0);
  for (VertexId v = 0; v < x.vertex_count(); ++v) {
    if (t.vertex_origin[p.vertex(v)].owner == u) vid[v] = out.add_vertex(x.vertex_name(v));
  }
  auto mine = [&](const CellOrigin& o) { return !o.thickened && o.owner == u; };
  auto move = [&](DirectedEdge d) { return DirectedEdge{eid[d.edge], d.forward}; };
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    if (mine(t.edge_origin[p.edge({e, true}).edge])) eid[e] = out.add_edge(x.edge_name(e), vid[x.edge(e).initial], vid[x.edge(e).terminal]);
  }
  for (SquareId s = 0; s < x.square_count(); ++s) {
    if (!mine(t.square_origin[p.square(s)])) continue;
    const Square& q = x.square(s);
    sid[s] = out.add_square(x.square_name(s), {move(q.bottom), move(q.right), move(q.top), move(q.left)});
  }
  for (Cube3Id c = 0; c < x.cube_count(); ++c) {
    if (!mine(t.cube_origin[p.cube(c)])) continue;
    const Cube3& k = x.cube(c);
    std::array<DirectedEdge, 4> corners{};
    for (int i = 0; i < 4; ++i) corners[i] = move(k.corners[i]);
    out.add_cube3(x.cube_name(c), sid[k.bottom], sid[k.top], corners);
  }
  return share(std::move(out));
}

std::string stats_of(const CubeComplex& x) {
  return std::to_string(x.vertex_count()) + " " + std::to_string(x.edge_count()) + " " + std::to_string(x.square_count()) +
         " " + std::to_string(x.cube_count());
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

SpecializeResult specialize(const GraphOfComplexes& g, const Budgets& budgets) {
  std::vector<std::string> log;
  auto stop = [&](const std::string& stage, const std::string& reason) {
    log.push_back(stage + ": " + reason);
    return SpecializeResult{Inconclusive{stage, reason, log}, std::nullopt};
  };

  LocallyConstantStructure lc;
  MonodromyResult m;
  try {
    lc = locally_constant_structure(g);
    m = compute_monodromy(g, lc, 0, budgets.gamma_degree);
  } catch (const Error& e) {
    return stop("trivialize", e.what());
  }
  const Trivialization tr = trivialize_monodromy(g, lc, m);
  log.push_back("trivialize: monodromy order " + std::to_string(m.group.size()) + ", graph cover of degree " +
                std::to_string(tr.degree) + " with " + std::to_string(tr.graph.vertex_count()) + " vertices");

  const MonodromyResult again = compute_monodromy(tr.graph, tr.locally_constant);
  if (!again.trivial()) throw InternalError("trivialized datum has monodromy of order " + std::to_string(again.group.size()));
  const ConstantStructure cs = make_constant(tr.graph, again);
  const std::size_t base = 0;
  const ComplexPtr xv = tr.graph.vertex_spaces[base];
  log.push_back("constant: vertex spaces identified with '" + xv->name() + "'");

  const std::vector<CubicalMap> fs = derive_edge_immersions(tr.graph, cs, base);
  log.push_back("immersions: " + std::to_string(fs.size()) + " edge maps into '" + xv->name() + "'");

  const GoodCoverSearchResult search = find_good_vertex_cover(xv, fs, budgets.vertex_degree);
  if (!search.cover) {
    return stop("vertex-cover", "no regular cover of degree <= " + std::to_string(budgets.vertex_degree) + " among " +
                                    std::to_string(search.candidates_tried) +
                                    " candidates is special with embedded, inter-osculation-free elevations");
  }
  const CoveringSpace& vc = *search.cover;
  log.push_back("vertex-cover: degree " + std::to_string(vc.degree()) + " after " + std::to_string(search.candidates_tried) +
                " regular candidates; " + std::to_string(search.elevations.size()) +
                " elevations, all embedded and inter-osculation-free");

  const FinalCover fc = assemble_final_cover(g, lc, tr.degree, tr.sheet_perms, base, vc.voltages);
  const CubeComplex& x = *fc.cover.total;
  if (!is_connected(x)) throw InternalError("pulled-back cover of the total space is disconnected");
  if (!verify_cover(fc.cover)) throw InternalError("pulled-back cover fails the covering check");
  log.push_back("final-cover: degree " + std::to_string(fc.cover.degree()) + " over the trivialized total space, cells " +
                stats_of(x));

  // Induced splitting: every vertex space is a copy of the vertex cover and
  // the edge spaces are the elevations of the f_e.
  for (std::size_t u = 0; u < tr.graph.vertex_count(); ++u) {
    const ComplexPtr piece = preimage_of_vertex_space(fc, u);
    if (!is_connected(*piece) || find_isomorphisms(piece, vc.total, 1).empty()) {
      throw InternalError("preimage of vertex space '" + tr.graph.vertex_names[u] + "' is not a copy of the vertex cover");
    }
  }
  GraphOfComplexes split;
  split.name = g.name + "~";
  split.vertex_names = tr.graph.vertex_names;
  split.vertex_spaces.assign(tr.graph.vertex_count(), vc.total);
  for (std::size_t e = 0; e < tr.graph.edge_count(); ++e) {
    const FiberProduct fp = fiber_product(fs[e], vc);
    for (std::size_t k = 0; k < fp.elevations.size(); ++k) {
      const GraphEdge& ge = tr.graph.edges[e];
      split.edges.push_back({ge.name + "." + std::to_string(k + 1), ge.from, ge.to});
      split.edge_spaces.push_back(fp.elevations[k].complex);
      split.minus.push_back(fp.elevations[k].to_cover);
      split.plus.push_back(fp.elevations[k].to_cover);
    }
  }
  validate_goc(split);
  const TotalSpace split_total = total_space(split);
  if (find_isomorphisms(split_total.complex, fc.cover.total, 1).empty()) {
    throw InternalError("induced splitting does not reassemble the final cover");
  }
  log.push_back("splitting: " + std::to_string(split.vertex_count()) + " vertex spaces isomorphic to the vertex cover, " +
                std::to_string(split.edge_count()) + " edge spaces");

  const CorollaryReport cor = check_corollary_hypotheses(split);
  if (!cor.pass()) throw InternalError("split datum fails the hypotheses the search established: " + cor.failures.front().witness);
  log.push_back("corollary: hypotheses hold on every edge space");

  const SpecialVerdict verdict = check_special(x);
  if (!verdict.special) throw InternalError("corollary hypotheses hold but the final cover is not special: " + verdict.witness);
  log.push_back("scan: final cover is special");

  Certificate cert;
  cert.input_hash = input_hash(g);
  cert.gamma_degree = tr.degree;
  cert.gamma_perms = tr.sheet_perms;
  cert.base = base;
  cert.voltage_lines = split_lines(write_voltages(*xv, vc.voltages));
  cert.vertex_degree = vc.degree();
  cert.vertices = x.vertex_count();
  cert.edges = x.edge_count();
  cert.squares = x.square_count();
  cert.cubes = x.cube_count();
  cert.transcript = log;
  return SpecializeResult{std::move(cert), fc.cover.total};
}

std::string write_certificate(const Certificate& c, const GraphOfComplexes& g) {
  if (c.gamma_perms.size() != g.edge_count()) throw Error("certificate does not match the graph");
  std::ostringstream out;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(c.input_hash));
  out << "cubex-cert v1\n";
  out << "input-hash " << hash << "\n";
  out << "gamma-degree " << c.gamma_degree << "\n";
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    out << "gamma-perm " << g.edges[e].name << " " << perm::to_cycles(c.gamma_perms[e]) << "\n";
  }
  out << "base " << c.base << "\n";
  out << "vertex-degree " << c.vertex_degree << "\n";
  for (const auto& line : c.voltage_lines) {
    if (!line.empty()) out << line << "\n";
  }
  out << "stats " << c.vertices << " " << c.edges << " " << c.squares << " " << c.cubes << "\n";
  out << "pathologies 0\n";
  out << "transcript\n";
  for (const auto& line : c.transcript) out << "| " << line << "\n";
  out << "end\n";
  return out.str();
}

Certificate parse_certificate(const std::string& text, const GraphOfComplexes& g) {
  Certificate c;
  const auto lines = split_lines(text);
  bool header = false, pathologies = false, ended = false, in_transcript = false, have_stats = false;
  std::vector<std::optional<Permutation>> gamma(g.edge_count());
  std::vector<std::string> pending;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::string where = "certificate line " + std::to_string(i + 1) + ": ";
    if (line.empty()) continue;
    if (ended) throw Error(where + "text after 'end'");
    if (in_transcript && line.rfind("| ", 0) == 0) {
      c.transcript.push_back(line.substr(2));
      continue;
    }
    std::istringstream in(line);
    std::string key;
    in >> key;
    if (!header) {
      std::string version;
      in >> version;
      if (key != "cubex-cert" || version != "v1") throw Error(where + "not a cubex certificate");
      header = true;
      continue;
    }
    if (key == "input-hash") {
      std::string hex;
      in >> hex;
      if (hex.size() != 16) throw Error(where + "bad hash");
      try {
        c.input_hash = std::stoull(hex, nullptr, 16);
      } catch (const std::exception&) {
        throw Error(where + "bad hash");
      }
    } else if (key == "gamma-degree") {
      if (!(in >> c.gamma_degree) || c.gamma_degree == 0) throw Error(where + "bad degree");
    } else if (key == "gamma-perm") {
      std::string edge, cycles;
      in >> edge;
      std::getline(in, cycles);
      std::size_t e = 0;
      while (e < g.edge_count() && g.edges[e].name != edge) ++e;
      if (e == g.edge_count()) throw Error(where + "unknown graph edge '" + edge + "'");
      gamma[e] = perm::from_cycles(cycles, c.gamma_degree);
    } else if (key == "base") {
      if (!(in >> c.base)) throw Error(where + "bad base");
    } else if (key == "vertex-degree") {
      if (!(in >> c.vertex_degree) || c.vertex_degree == 0) throw Error(where + "bad degree");
    } else if (key == "cover" || key == "perm") {
      c.voltage_lines.push_back(line);
    } else if (key == "stats") {
      if (!(in >> c.vertices >> c.edges >> c.squares >> c.cubes)) throw Error(where + "bad stats");
      have_stats = true;
    } else if (key == "pathologies") {
      std::size_t n = 1;
      in >> n;
      if (n != 0) throw Error(where + "certificate records pathologies");
      pathologies = true;
    } else if (key == "transcript") {
      in_transcript = true;
    } else if (key == "end") {
      ended = true;
    } else {
      throw Error(where + "unknown keyword '" + key + "'");
    }
  }
  if (!header || !ended || !pathologies || !have_stats) throw Error("certificate is incomplete");
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!gamma[e]) throw Error("certificate has no gamma-perm for edge '" + g.edges[e].name + "'");
    c.gamma_perms.push_back(*gamma[e]);
  }
  return c;
}

VerifyResult verify_certificate(const std::string& text, const GraphOfComplexes& g) {
  try {
    const Certificate c = parse_certificate(text, g);
    if (c.input_hash != input_hash(g)) return {false, "input hash mismatch"};
    const LocallyConstantStructure lc = locally_constant_structure(g);
    const Trivialization tr = lift_graph(g, lc, c.gamma_degree, c.gamma_perms);
    if (c.base >= tr.graph.vertex_count()) return {false, "base vertex out of range"};
    const VoltageAssignment vc = parse_voltages(*tr.graph.vertex_spaces[c.base], c.voltage_lines);
    if (vc.degree != c.vertex_degree) return {false, "vertex degree does not match the voltage table"};
    const FinalCover fc = assemble_final_cover(g, lc, c.gamma_degree, c.gamma_perms, c.base, vc);
    const CubeComplex& x = *fc.cover.total;
    if (!is_connected(x)) return {false, "final cover is disconnected"};
    if (!verify_cover(fc.cover)) return {false, "final cover fails the covering check"};
    if (x.vertex_count() != c.vertices || x.edge_count() != c.edges || x.square_count() != c.squares ||
        x.cube_count() != c.cubes) {
      return {false, "final cover statistics differ: " + stats_of(x)};
    }
    const SpecialVerdict v = check_special(x);
    if (!v.special) return {false, "final cover is not special: " + v.witness};
    return {true, "final cover rebuilt with cells " + stats_of(x) + " and is special"};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

}  // namespace cubex
