#include "cubex/graph_of_complexes.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "cubex/union_find.hpp"

namespace cubex {

std::optional<std::size_t> GraphOfComplexes::find_vertex(const std::string& n) const {
  for (std::size_t u = 0; u < vertex_names.size(); ++u) {
    if (vertex_names[u] == n) return u;
  }
  return std::nullopt;
}

namespace {

void check_space(const ComplexPtr& x, const std::string& who) {
  if (!x || x->vertex_count() == 0) throw Error(who + " is empty");
  if (!is_connected(*x)) throw Error(who + " ('" + x->name() + "') is not connected");
  const auto report = validate(*x);
  if (!report.npc) {
    const auto& v = report.violations.front();
    throw Error(who + " ('" + x->name() + "') is not nonpositively curved: " + to_string(v.kind) + " at vertex " +
                x->vertex_name(v.vertex));
  }
}

std::string describe(const LinkFailure& f, const CubeComplex& src) {
  std::string out = f.kind == LinkFailure::Kind::NotInjective ? "link map not injective" : "link map not full";
  out += " at vertex " + src.vertex_name(f.vertex) + " (";
  for (std::size_t i = 0; i < f.edge_ends.size(); ++i) out += (i ? ", " : "") + src.token(f.edge_ends[i]);
  return out + ")";
}

void check_attaching(const CubicalMap& f, const ComplexPtr& source, const ComplexPtr& target, const std::string& who) {
  if (f.source_ptr() != source || f.target_ptr() != target) throw Error(who + " has the wrong source or target");
  const auto rep = check_local_isometry(f);
  if (!rep.ok) throw Error(who + " is not a local isometry: " + describe(rep.failures.front(), f.source()));
}

void check_theta(const GraphOfComplexes& g, const LocallyConstantStructure& lc) {
  if (lc.theta.size() != g.edge_count()) throw Error("theta data does not cover every edge");
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& th = lc.theta[e];
    const std::string who = "theta of edge '" + g.edges[e].name + "'";
    if (th.source_ptr() != g.vertex_spaces[g.edges[e].from] || th.target_ptr() != g.vertex_spaces[g.edges[e].to]) {
      throw Error(who + " has the wrong source or target");
    }
    if (!is_isomorphism(th)) throw Error(who + " is not an isomorphism");
    if (!(compose(g.minus[e], th) == g.plus[e])) throw Error(who + " does not carry phi^- to phi^+");
  }
}

}  // namespace

void validate_goc(const GraphOfComplexes& g) {
  if (g.vertex_count() == 0) throw Error("graph of complexes has no vertices");
  if (g.vertex_names.size() != g.vertex_count()) throw Error("vertex names do not match vertex spaces");
  if (g.edge_spaces.size() != g.edge_count() || g.minus.size() != g.edge_count() || g.plus.size() != g.edge_count()) {
    throw Error("edge data is incomplete");
  }
  for (std::size_t u = 0; u < g.vertex_count(); ++u) check_space(g.vertex_spaces[u], "vertex space of '" + g.vertex_names[u] + "'");
  UnionFind uf(g.vertex_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const GraphEdge& ge = g.edges[e];
    if (ge.from >= g.vertex_count() || ge.to >= g.vertex_count()) throw Error("edge '" + ge.name + "' has a bad endpoint");
    check_space(g.edge_spaces[e], "edge space of '" + ge.name + "'");
    if (g.edge_spaces[e]->cube_count() != 0) throw Error("edge space of '" + ge.name + "' has dimension 3");
    check_attaching(g.minus[e], g.edge_spaces[e], g.vertex_spaces[ge.from], "phi^- of edge '" + ge.name + "'");
    check_attaching(g.plus[e], g.edge_spaces[e], g.vertex_spaces[ge.to], "phi^+ of edge '" + ge.name + "'");
    uf.unite(ge.from, ge.to);
  }
  for (std::size_t u = 1; u < g.vertex_count(); ++u) {
    if (!uf.same(0, u)) throw Error("underlying graph is not connected: '" + g.vertex_names[u] + "' is unreachable");
  }
  if (g.locally_constant) check_theta(g, *g.locally_constant);
  if (g.constant) check_constant(g, *g.constant);
}

GraphOfComplexes build_goc(const Workspace& ws, const GocDecl& decl) {
  GraphOfComplexes g;
  g.name = decl.name;
  try {
    for (const auto& v : decl.vertices) {
      if (g.find_vertex(v.name)) throw Error("duplicate graph vertex '" + v.name + "'");
      g.vertex_names.push_back(v.name);
      g.vertex_spaces.push_back(ws.complex(v.complex));
    }
    std::set<std::string> edge_names;
    for (const auto& e : decl.edges) {
      if (!edge_names.insert(e.name).second) throw Error("duplicate graph edge '" + e.name + "'");
      const auto from = g.find_vertex(e.from);
      const auto to = g.find_vertex(e.to);
      if (!from || !to) throw Error("edge '" + e.name + "' names an unknown graph vertex");
      const ComplexPtr xe = ws.complex(e.complex);
      g.edges.push_back({e.name, *from, *to});
      g.edge_spaces.push_back(xe);
      g.minus.push_back(ws.map_or_identity(e.minus, xe, g.vertex_spaces[*from]));
      g.plus.push_back(ws.map_or_identity(e.plus, xe, g.vertex_spaces[*to]));
    }
    if (!decl.theta.empty()) {
      LocallyConstantStructure lc;
      for (const auto& ge : g.edges) {
        auto it = decl.theta.find(ge.name);
        if (it == decl.theta.end()) throw Error("no theta for edge '" + ge.name + "'");
        lc.theta.push_back(ws.map_or_identity(it->second, g.vertex_spaces[ge.from], g.vertex_spaces[ge.to]));
      }
      for (const auto& [e, m] : decl.theta) {
        if (edge_names.count(e) == 0) throw Error("theta for unknown edge '" + e + "'");
      }
      g.locally_constant = std::move(lc);
    }
    if (!decl.constant.empty() || !decl.psi.empty()) {
      if (decl.constant.empty()) throw Error("psi maps given without a constant space");
      ConstantStructure cs{ws.complex(decl.constant), {}};
      for (std::size_t u = 0; u < g.vertex_count(); ++u) {
        auto it = decl.psi.find(g.vertex_names[u]);
        if (it == decl.psi.end()) throw Error("no psi for vertex '" + g.vertex_names[u] + "'");
        cs.psi.push_back(ws.map_or_identity(it->second, g.vertex_spaces[u], cs.space));
      }
      g.constant = std::move(cs);
    }
    validate_goc(g);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(decl.line, "goc '" + decl.name + "': " + e.what());
  }
  return g;
}

GraphOfComplexes load_goc(const std::string& path, const std::string& name) {
  Workspace ws;
  ws.load_file(path);
  if (ws.gocs().empty()) throw Error("'" + path + "' declares no graph of complexes");
  if (name.empty()) {
    if (ws.gocs().size() > 1) throw Error("'" + path + "' declares several graphs; name one");
    return build_goc(ws, ws.gocs().front());
  }
  for (const auto& d : ws.gocs()) {
    if (d.name == name) return build_goc(ws, d);
  }
  throw Error("no graph named '" + name + "' in '" + path + "'");
}

namespace {

class GocWriter {
 public:
  std::string name_of(const ComplexPtr& x) {
    auto it = names_.find(x.get());
    if (it != names_.end()) return it->second;
    std::string n = x->name().empty() ? "X" : x->name();
    for (int k = 2; used_.count(n) != 0; ++k) n = x->name() + "_" + std::to_string(k);
    used_.insert(n);
    names_[x.get()] = n;
    CubeComplex copy = *x;
    copy.set_name(n);
    out_ << write_complex(copy) << "\n";
    return n;
  }

  void map(const std::string& name, const CubicalMap& f) {
    const std::string src = name_of(f.source_ptr());
    const std::string dst = name_of(f.target_ptr());
    maps_ << "map " << name << " " << src << " " << dst << "\n";
    for (VertexId v = 0; v < f.source().vertex_count(); ++v) {
      maps_ << "v " << f.source().vertex_name(v) << " " << f.target().vertex_name(f.vertex(v)) << "\n";
    }
    for (EdgeId e = 0; e < f.source().edge_count(); ++e) {
      maps_ << "e " << f.source().edge_name(e) << " " << f.target().token(f.edge({e, true})) << "\n";
    }
    maps_ << "\n";
  }

  std::string text(const std::string& goc) const { return out_.str() + maps_.str() + goc; }

 private:
  std::map<const CubeComplex*, std::string> names_;
  std::set<std::string> used_;
  std::ostringstream out_, maps_;
};

}  // namespace

std::string write_goc(const GraphOfComplexes& g) {
  GocWriter w;
  std::ostringstream goc;
  goc << "goc " << g.name << "\n";
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    goc << "gvertex " << g.vertex_names[u] << " " << w.name_of(g.vertex_spaces[u]) << "\n";
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const GraphEdge& ge = g.edges[e];
    const std::string minus = ge.name + "-minus", plus = ge.name + "-plus";
    w.map(minus, g.minus[e]);
    w.map(plus, g.plus[e]);
    goc << "gedge " << ge.name << " " << g.vertex_names[ge.from] << " " << g.vertex_names[ge.to] << " "
        << w.name_of(g.edge_spaces[e]) << " " << minus << " " << plus << "\n";
  }
  if (g.locally_constant) {
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const std::string theta = g.edges[e].name + "-theta";
      w.map(theta, g.locally_constant->theta[e]);
      goc << "theta " << g.edges[e].name << " " << theta << "\n";
    }
  }
  if (g.constant) {
    goc << "constant " << w.name_of(g.constant->space) << "\n";
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
      const std::string psi = g.vertex_names[u] + "-psi";
      w.map(psi, g.constant->psi[u]);
      goc << "psi " << g.vertex_names[u] << " " << psi << "\n";
    }
  }
  return w.text(goc.str());
}

GraphOfComplexes make_double(const CubicalMap& f, const std::string& name) {
  GraphOfComplexes g;
  g.name = name;
  g.vertex_names = {"u", "w"};
  g.vertex_spaces = {f.target_ptr(), f.target_ptr()};
  g.edges = {{"e", 0, 1}};
  g.edge_spaces = {f.source_ptr()};
  g.minus = {f};
  g.plus = {f};
  g.locally_constant = LocallyConstantStructure{{CubicalMap::identity(f.target_ptr())}};
  validate_goc(g);
  return g;
}

LocallyConstantStructure locally_constant_structure(const GraphOfComplexes& g) {
  if (g.locally_constant) return *g.locally_constant;
  LocallyConstantStructure lc;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const GraphEdge& ge = g.edges[e];
    if (g.vertex_spaces[ge.from] != g.vertex_spaces[ge.to] || !(g.minus[e] == g.plus[e])) {
      throw Error("edge '" + ge.name + "' needs theta data: its two sides differ");
    }
    lc.theta.push_back(CubicalMap::identity(g.vertex_spaces[ge.from]));
  }
  return lc;
}

CubicalMap TotalSpace::inclusion(const GraphOfComplexes& g, std::size_t u) const {
  const CubeComplex& x = *g.vertex_spaces.at(u);
  std::vector<VertexId> vm(x.vertex_count());
  std::vector<DirectedEdge> em(x.edge_count());
  for (VertexId v = 0; v < vm.size(); ++v) vm[v] = vertex_offset[u] + v;
  for (EdgeId e = 0; e < em.size(); ++e) em[e] = {edge_offset[u] + e, true};
  return CubicalMap(g.vertex_spaces[u], complex, std::move(vm), std::move(em), "incl-" + g.vertex_names[u]);
}

TotalSpace total_space(const GraphOfComplexes& g) {
  TotalSpace t;
  CubeComplex x(g.name);
  const std::size_t nu = g.vertex_count();
  t.vertex_offset.resize(nu);
  t.edge_offset.resize(nu);
  t.square_offset.resize(nu);
  t.cube_offset.resize(nu);

  for (std::size_t u = 0; u < nu; ++u) {
    const CubeComplex& xu = *g.vertex_spaces[u];
    t.vertex_offset[u] = static_cast<std::uint32_t>(x.vertex_count());
    for (VertexId v = 0; v < xu.vertex_count(); ++v) {
      x.add_vertex(g.vertex_names[u] + "." + xu.vertex_name(v));
      t.vertex_origin.push_back({false, u, v});
    }
  }
  auto vert = [&](std::size_t u, VertexId v) { return t.vertex_offset[u] + v; };
  auto dir = [&](std::size_t u, DirectedEdge d) { return DirectedEdge{t.edge_offset[u] + d.edge, d.forward}; };

  for (std::size_t u = 0; u < nu; ++u) {
    const CubeComplex& xu = *g.vertex_spaces[u];
    t.edge_offset[u] = static_cast<std::uint32_t>(x.edge_count());
    for (EdgeId e = 0; e < xu.edge_count(); ++e) {
      x.add_edge(g.vertex_names[u] + "." + xu.edge_name(e), vert(u, xu.edge(e).initial), vert(u, xu.edge(e).terminal));
      t.edge_origin.push_back({false, u, e});
    }
  }
  t.horizontal.resize(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const CubeComplex& xe = *g.edge_spaces[e];
    const GraphEdge& ge = g.edges[e];
    for (VertexId v = 0; v < xe.vertex_count(); ++v) {
      t.horizontal[e].push_back(x.add_edge(ge.name + "/" + xe.vertex_name(v), vert(ge.from, g.minus[e].vertex(v)),
                                           vert(ge.to, g.plus[e].vertex(v))));
      t.edge_origin.push_back({true, e, v});
    }
  }

  for (std::size_t u = 0; u < nu; ++u) {
    const CubeComplex& xu = *g.vertex_spaces[u];
    t.square_offset[u] = static_cast<std::uint32_t>(x.square_count());
    for (SquareId s = 0; s < xu.square_count(); ++s) {
      const Square& q = xu.square(s);
      x.add_square(g.vertex_names[u] + "." + xu.square_name(s), {dir(u, q.bottom), dir(u, q.right), dir(u, q.top), dir(u, q.left)});
      t.square_origin.push_back({false, u, s});
    }
  }
  t.vertical_squares.resize(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const CubeComplex& xe = *g.edge_spaces[e];
    const GraphEdge& ge = g.edges[e];
    for (EdgeId f = 0; f < xe.edge_count(); ++f) {
      const DirectedEdge d{f, true};
      const DirectedEdge left{t.horizontal[e][xe.initial(d)], true};
      const DirectedEdge right{t.horizontal[e][xe.terminal(d)], true};
      t.vertical_squares[e].push_back(x.add_square(ge.name + "/" + xe.edge_name(f),
                                                   {dir(ge.from, g.minus[e].edge(d)), right, dir(ge.to, g.plus[e].edge(d)), left}));
      t.square_origin.push_back({true, e, f});
    }
  }

  for (std::size_t u = 0; u < nu; ++u) {
    const CubeComplex& xu = *g.vertex_spaces[u];
    t.cube_offset[u] = static_cast<std::uint32_t>(x.cube_count());
    for (Cube3Id c = 0; c < xu.cube_count(); ++c) {
      const Cube3& k = xu.cube(c);
      std::array<DirectedEdge, 4> corners{};
      for (int i = 0; i < 4; ++i) corners[i] = dir(u, k.corners[i]);
      x.add_cube3(g.vertex_names[u] + "." + xu.cube_name(c), t.square_offset[u] + k.bottom, t.square_offset[u] + k.top, corners);
      t.cube_origin.push_back({false, u, c});
    }
  }
  t.prisms.resize(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const CubeComplex& xe = *g.edge_spaces[e];
    const GraphEdge& ge = g.edges[e];
    const CubeComplex& below = *g.vertex_spaces[ge.from];
    for (SquareId s = 0; s < xe.square_count(); ++s) {
      const Square& q = xe.square(s);
      const CubicalMap& fm = g.minus[e];
      const auto hit = below.find_square_matching({fm.edge(q.bottom), fm.edge(q.right), fm.edge(q.top), fm.edge(q.left)});
      if (!hit) throw Error("square '" + xe.square_name(s) + "' of edge space '" + ge.name + "' has no image");
      const auto r = reparametrizations(below.square(hit->first))[static_cast<std::size_t>(hit->second)];
      std::array<DirectedEdge, 4> corners{};
      for (Corner c = 0; c < 4; ++c) {
        corners[static_cast<std::size_t>(r.corner_of[c])] = {t.horizontal[e][corner_vertex(xe, q, c)], true};
      }
      t.prisms[e].push_back(x.add_cube3(ge.name + "/" + xe.square_name(s), t.square_offset[ge.from] + hit->first,
                                        t.square_offset[ge.to] + g.plus[e].square(s), corners));
      t.cube_origin.push_back({true, e, s});
    }
  }

  const auto report = validate(x);
  if (!report.npc) {
    const auto& v = report.violations.front();
    throw Error("total space is not nonpositively curved: " + to_string(v.kind) + " at " + x.vertex_name(v.vertex));
  }
  t.complex = share(std::move(x));
  return t;
}

HyperplaneClassification classify_hyperplanes(const GraphOfComplexes& g, const TotalSpace& t) {
  HyperplaneClassification c;
  c.hyperplanes = compute_hyperplanes(*t.complex);
  c.pathologies = detect_pathologies(*t.complex, c.hyperplanes);
  c.vertical_of.assign(c.hyperplanes.hyperplanes.size(), std::nullopt);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    std::set<HyperplaneId> hs;
    for (EdgeId h : t.horizontal[e]) hs.insert(c.hyperplanes.of_edge[h]);
    if (hs.size() != 1) throw InternalError("edge space '" + g.edges[e].name + "' does not give exactly one vertical hyperplane");
    const HyperplaneId id = *hs.begin();
    if (c.vertical_of[id]) throw InternalError("two edge spaces share a vertical hyperplane");
    c.vertical_of[id] = e;
    c.vertical.push_back(id);
  }
  for (const auto& w : c.pathologies.self_crossings) {
    if (c.vertical_of[w.hyperplane]) throw InternalError("vertical hyperplane H" + std::to_string(w.hyperplane) + " crosses itself");
  }
  for (auto h : c.pathologies.one_sided) {
    if (c.vertical_of[h]) throw InternalError("vertical hyperplane H" + std::to_string(h) + " is 1-sided");
  }
  return c;
}

namespace {

using MapKey = std::pair<std::vector<VertexId>, std::vector<std::uint32_t>>;

MapKey key_of(const CubicalMap& f) {
  MapKey k{f.vertex_map(), {}};
  for (const auto& d : f.edge_map()) k.second.push_back(d.index());
  return k;
}

CubicalMap inverse_or_throw(const CubicalMap& f, const std::string& who) {
  auto inv = inverse(f);
  if (!inv) throw Error(who + " is not an isomorphism");
  return *inv;
}

}  // namespace

MonodromyResult compute_monodromy(const GraphOfComplexes& g, const LocallyConstantStructure& lc, std::size_t base,
                                  std::size_t cap) {
  check_theta(g, lc);
  if (base >= g.vertex_count()) throw Error("base vertex out of range");
  MonodromyResult m;
  m.base = base;
  m.tree_edge.assign(g.edge_count(), false);
  std::vector<std::vector<std::size_t>> incident(g.vertex_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    incident[g.edges[e].from].push_back(e);
    if (g.edges[e].to != g.edges[e].from) incident[g.edges[e].to].push_back(e);
  }
  std::vector<std::optional<CubicalMap>> transport(g.vertex_count());
  transport[base] = CubicalMap::identity(g.vertex_spaces[base]);
  std::deque<std::size_t> queue{base};
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t e : incident[u]) {
      const GraphEdge& ge = g.edges[e];
      const std::size_t w = ge.from == u ? ge.to : ge.from;
      if (transport[w]) continue;
      m.tree_edge[e] = true;
      const CubicalMap& th = lc.theta[e];
      transport[w] = ge.from == u ? compose(inverse_or_throw(th, "theta"), *transport[u]) : compose(th, *transport[u]);
      queue.push_back(w);
    }
  }
  for (auto& a : transport) {
    if (!a) throw Error("underlying graph is not connected");
    m.transport.push_back(*a);
  }

  const ComplexPtr xv = g.vertex_spaces[base];
  m.group.push_back(CubicalMap::identity(xv));
  std::map<MapKey, std::size_t> index{{key_of(m.group.front()), 0}};
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (m.tree_edge[e]) continue;
    const GraphEdge& ge = g.edges[e];
    CubicalMap loop = compose(compose(inverse_or_throw(m.transport[ge.from], "transport"), lc.theta[e]), m.transport[ge.to]);
    loop.set_name("theta-" + ge.name);
    m.generator_edges.push_back(e);
    m.generators.push_back(std::move(loop));
  }
  for (std::size_t i = 0; i < m.group.size(); ++i) {
    for (const auto& gen : m.generators) {
      CubicalMap next = compose(m.group[i], gen);
      auto k = key_of(next);
      if (index.count(k) != 0) continue;
      if (m.group.size() >= cap) throw Error("monodromy group exceeds " + std::to_string(cap) + " elements");
      index.emplace(std::move(k), m.group.size());
      m.group.push_back(std::move(next));
    }
  }
  m.element_of_edge.assign(g.edge_count(), 0);
  for (std::size_t k = 0; k < m.generators.size(); ++k) m.element_of_edge[m.generator_edges[k]] = index.at(key_of(m.generators[k]));
  return m;
}

void check_constant(const GraphOfComplexes& g, const ConstantStructure& cs) {
  if (cs.psi.size() != g.vertex_count()) throw Error("psi data does not cover every vertex");
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const auto& p = cs.psi[u];
    if (p.source_ptr() != g.vertex_spaces[u] || p.target_ptr() != cs.space) {
      throw Error("psi of '" + g.vertex_names[u] + "' has the wrong source or target");
    }
    if (!is_isomorphism(p)) throw Error("psi of '" + g.vertex_names[u] + "' is not an isomorphism");
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const GraphEdge& ge = g.edges[e];
    if (!(compose(g.minus[e], cs.psi[ge.from]) == compose(g.plus[e], cs.psi[ge.to]))) {
      throw Error("psi data is not compatible with the attaching maps of edge '" + ge.name + "'");
    }
  }
}

ConstantStructure make_constant(const GraphOfComplexes& g, const MonodromyResult& m) {
  if (!m.trivial()) throw Error("monodromy group has order " + std::to_string(m.group.size()) + ", not 1");
  ConstantStructure cs{g.vertex_spaces[m.base], m.transport};
  check_constant(g, cs);
  return cs;
}

Trivialization lift_graph(const GraphOfComplexes& g, const LocallyConstantStructure& lc, std::size_t n,
                          const std::vector<Permutation>& perms) {
  if (n == 0 || perms.size() != g.edge_count() || lc.theta.size() != g.edge_count()) throw Error("bad graph cover data");
  for (const auto& p : perms) {
    std::vector<bool> hit(n, false);
    for (auto j : p) {
      if (j >= n || hit[j]) throw Error("bad sheet permutation");
      hit[j] = true;
    }
    if (p.size() != n) throw Error("bad sheet permutation");
  }
  Trivialization t;
  t.degree = n;
  t.sheet_perms = perms;
  GraphOfComplexes& h = t.graph;
  h.name = g.name;
  auto sheet = [&](const std::string& name, std::size_t i) { return n == 1 ? name : name + "#" + std::to_string(i + 1); };
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    for (std::size_t i = 0; i < n; ++i) {
      h.vertex_names.push_back(sheet(g.vertex_names[u], i));
      h.vertex_spaces.push_back(g.vertex_spaces[u]);
      t.vertex_projection.push_back(u);
    }
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const GraphEdge& ge = g.edges[e];
    for (std::size_t i = 0; i < n; ++i) {
      h.edges.push_back({sheet(ge.name, i), ge.from * n + i, ge.to * n + perms[e][i]});
      h.edge_spaces.push_back(g.edge_spaces[e]);
      h.minus.push_back(g.minus[e]);
      h.plus.push_back(g.plus[e]);
      t.locally_constant.theta.push_back(lc.theta[e]);
      t.edge_projection.push_back(e);
    }
  }
  h.locally_constant = t.locally_constant;
  validate_goc(h);
  return t;
}

Trivialization trivialize_monodromy(const GraphOfComplexes& g, const LocallyConstantStructure& lc,
                                    const MonodromyResult& m) {
  const std::size_t n = m.group.size();
  std::map<MapKey, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(key_of(m.group[i]), i);
  std::vector<Permutation> perms;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const CubicalMap& me = m.group[m.element_of_edge[e]];
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(index.at(key_of(compose(m.group[i], me))));
    perms.push_back(std::move(p));
  }
  return lift_graph(g, lc, n, perms);
}

Retraction build_retraction(const GraphOfComplexes& g, const ConstantStructure& cs, const TotalSpace& t, std::size_t base) {
  check_constant(g, cs);
  const CubicalMap back = inverse_or_throw(cs.psi.at(base), "psi of the base vertex");
  std::vector<CubicalMap> to_base;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) to_base.push_back(compose(cs.psi[u], back));

  const CubeComplex& x = *t.complex;
  Retraction r{base, {t.complex, g.vertex_spaces[base], {}, {}}, {}, t.inclusion(g, base)};
  for (VertexId v = 0; v < x.vertex_count(); ++v) {
    const CellOrigin& o = t.vertex_origin[v];
    r.map.vertex_map.push_back(to_base[o.owner].vertex(o.cell));
  }
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    const CellOrigin& o = t.edge_origin[e];
    if (o.thickened) {
      r.map.edge_map.emplace_back(std::nullopt);
    } else {
      r.map.edge_map.emplace_back(to_base[o.owner].edge({o.cell, true}));
    }
  }
  for (SquareId s = 0; s < x.square_count(); ++s) {
    const CellOrigin& o = t.square_origin[s];
    if (!o.thickened) {
      r.square_map.emplace_back(to_base[o.owner].square(o.cell));
      continue;
    }
    const GraphEdge& ge = g.edges[o.owner];
    const DirectedEdge f{o.cell, true};
    const DirectedEdge low = to_base[ge.from].edge(g.minus[o.owner].edge(f));
    const DirectedEdge high = to_base[ge.to].edge(g.plus[o.owner].edge(f));
    if (low != high) throw Error("retraction is not cellular on the square '" + x.square_name(s) + "'");
    r.square_map.emplace_back(std::nullopt);
  }
  for (Cube3Id c = 0; c < x.cube_count(); ++c) {
    const CellOrigin& o = t.cube_origin[c];
    if (!o.thickened) continue;
    const GraphEdge& ge = g.edges[o.owner];
    if (to_base[ge.from].square(g.minus[o.owner].square(o.cell)) != to_base[ge.to].square(g.plus[o.owner].square(o.cell))) {
      throw Error("retraction is not cellular on the cube '" + x.cube_name(c) + "'");
    }
  }
  return r;
}

RetractionCheck check_retraction(const GraphOfComplexes& g, const TotalSpace& t, const Retraction& r) {
  RetractionCheck out;
  const CubeComplex& xv = *g.vertex_spaces[r.base];
  for (VertexId v = 0; v < xv.vertex_count(); ++v) {
    if (r.map.vertex_map[r.section.vertex(v)] != v) {
      out.section_ok = false;
      out.failures.push_back("r o section moves vertex " + xv.vertex_name(v));
    }
  }
  for (EdgeId e = 0; e < xv.edge_count(); ++e) {
    const auto img = r.map.edge(r.section.edge({e, true}));
    if (!img || *img != DirectedEdge{e, true}) {
      out.section_ok = false;
      out.failures.push_back("r o section moves edge " + xv.edge_name(e));
    }
  }
  for (SquareId s = 0; s < xv.square_count(); ++s) {
    if (r.square_map[r.section.square(s)] != s) {
      out.section_ok = false;
      out.failures.push_back("r o section moves square " + xv.square_name(s));
    }
  }

  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const CubicalMap incl = t.inclusion(g, u);
    const CubeComplex& xu = *g.vertex_spaces[u];
    std::vector<VertexId> vm;
    std::vector<DirectedEdge> em;
    bool collapsed = false;
    for (VertexId v = 0; v < xu.vertex_count(); ++v) vm.push_back(r.map.vertex_map[incl.vertex(v)]);
    for (EdgeId e = 0; e < xu.edge_count(); ++e) {
      const auto img = r.map.edge(incl.edge({e, true}));
      collapsed = collapsed || !img;
      em.push_back(img.value_or(DirectedEdge{}));
    }
    bool iso = false;
    if (!collapsed) {
      try {
        iso = is_isomorphism(CubicalMap(g.vertex_spaces[u], g.vertex_spaces[r.base], vm, em));
      } catch (const Error&) {
        iso = false;
      }
    }
    if (!iso) {
      out.restrictions_ok = false;
      out.failures.push_back("restriction of r to '" + g.vertex_names[u] + "' is not an isomorphism");
    }
  }

  const CubeComplex& x = *t.complex;
  const auto hx = compute_hyperplanes(x);
  const auto hv = compute_hyperplanes(xv);
  std::map<std::size_t, std::vector<DirectedEdge>> classes;
  for (std::uint32_t i = 0; i < 2 * x.edge_count(); ++i) classes[hx.directed_class[i]].push_back(DirectedEdge::from_index(i));
  for (const auto& [label, members] : classes) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto a = r.map.edge(members[i]);
      if (!a) continue;
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto b = r.map.edge(members[j]);
        if (!b) continue;
        ++out.pairs_checked;
        if (!hv.parallel(*a, *b)) {
          out.parallel_ok = false;
          out.failures.push_back("parallel edges " + x.token(members[i]) + " and " + x.token(members[j]) +
                                 " have non-parallel images " + xv.token(*a) + " and " + xv.token(*b));
        }
      }
    }
  }
  return out;
}

CorollaryReport check_corollary_hypotheses(const GraphOfComplexes& g) {
  CorollaryReport out;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const CubicalMap& f = g.minus[e];
    const CubeComplex& xe = f.source();
    const CubeComplex& xu = f.target();
    const std::string edge = "edge '" + g.edges[e].name + "': ";
    if (!is_embedding(f)) {
      std::string witness = edge + "phi^- is not injective";
      std::map<VertexId, VertexId> seen;
      for (VertexId v = 0; v < xe.vertex_count(); ++v) {
        auto [it, fresh] = seen.emplace(f.vertex(v), v);
        if (!fresh) {
          witness = edge + "vertices " + xe.vertex_name(it->second) + " and " + xe.vertex_name(v) + " both map to " +
                    xu.vertex_name(f.vertex(v));
          break;
        }
      }
      out.failures.push_back({e, 1, witness});
    }
    const auto h = compute_hyperplanes(xu);
    for (const auto& finding : subcomplex_osculation(xu, h, image(f))) {
      if (!finding.inter_osculates()) continue;
      const auto& [v, d] = finding.osculations.front();
      out.failures.push_back({e, 2,
                              edge + "image crosses the hyperplane dual to " + xu.edge_name(*finding.crossing_edge) +
                                  " and osculates it at (" + xu.vertex_name(v) + "; " + xu.token(d) + ")"});
    }
  }
  return out;
}

}  // namespace cubex
