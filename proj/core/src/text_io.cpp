#include "cubex/text_io.hpp"

#include <fstream>
#include <memory>
#include <sstream>

namespace cubex {

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

void expect_arity(const std::vector<std::string>& t, std::size_t n, std::size_t line) {
  if (t.size() != n) {
    throw ParseError(line, "'" + t[0] + "' expects " + std::to_string(n - 1) + " arguments, got " +
                               std::to_string(t.size() - 1));
  }
}

VertexId need_vertex(const CubeComplex& x, const std::string& name, std::size_t line) {
  auto v = x.find_vertex(name);
  if (!v) throw ParseError(line, "unknown vertex '" + name + "'");
  return *v;
}

SquareId need_square(const CubeComplex& x, const std::string& name, std::size_t line) {
  auto s = x.find_square(name);
  if (!s) throw ParseError(line, "unknown square '" + name + "'");
  return *s;
}

// Applies one cell line to a complex under construction.
void apply_cell_line(CubeComplex& x, const std::vector<std::string>& t, std::size_t line) {
  try {
    if (t[0] == "vertex") {
      expect_arity(t, 2, line);
      x.add_vertex(t[1]);
    } else if (t[0] == "edge") {
      expect_arity(t, 4, line);
      x.add_edge(t[1], need_vertex(x, t[2], line), need_vertex(x, t[3], line));
    } else if (t[0] == "square") {
      expect_arity(t, 6, line);
      x.add_square(t[1], {parse_edge_token(x, t[2]), parse_edge_token(x, t[3]), parse_edge_token(x, t[4]),
                          parse_edge_token(x, t[5])});
    } else if (t[0] == "cube3") {
      expect_arity(t, 8, line);
      x.add_cube3(t[1], need_square(x, t[2], line), need_square(x, t[3], line),
                  {parse_edge_token(x, t[4]), parse_edge_token(x, t[5]), parse_edge_token(x, t[6]),
                   parse_edge_token(x, t[7])});
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

bool is_cell_keyword(const std::string& k) { return k == "vertex" || k == "edge" || k == "square" || k == "cube3"; }

}  // namespace

DirectedEdge parse_edge_token(const CubeComplex& x, const std::string& token) {
  if (token.size() < 2 || (token.back() != '+' && token.back() != '-')) {
    throw Error("malformed edge token '" + token + "' (expected EDGEID+ or EDGEID-)");
  }
  const std::string name = token.substr(0, token.size() - 1);
  auto e = x.find_edge(name);
  if (!e) throw Error("unknown edge '" + name + "'");
  return {*e, token.back() == '+'};
}

CubeComplex parse_complex(std::string_view text) {
  Workspace ws;
  ws.load_text(text);
  if (ws.complex_order().empty()) throw Error("no complex in input");
  return *ws.complex(ws.complex_order().front());
}

std::string write_complex(const CubeComplex& x) {
  std::ostringstream out;
  out << "complex " << x.name() << "\n";
  for (VertexId v = 0; v < x.vertex_count(); ++v) out << "vertex " << x.vertex_name(v) << "\n";
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    out << "edge " << x.edge_name(e) << " " << x.vertex_name(x.edge(e).initial) << " "
        << x.vertex_name(x.edge(e).terminal) << "\n";
  }
  for (SquareId s = 0; s < x.square_count(); ++s) {
    const Square& q = x.square(s);
    out << "square " << x.square_name(s) << " " << x.token(q.bottom) << " " << x.token(q.right) << " "
        << x.token(q.top) << " " << x.token(q.left) << "\n";
  }
  for (Cube3Id c = 0; c < x.cube_count(); ++c) {
    const Cube3& q = x.cube(c);
    out << "cube3 " << x.cube_name(c) << " " << x.square_name(q.bottom) << " " << x.square_name(q.top);
    for (const auto& d : q.corners) out << " " << x.token(d);
    out << "\n";
  }
  return out.str();
}

std::string write_map(const CubicalMap& f) {
  std::ostringstream out;
  out << "map " << f.name() << " " << f.source().name() << " " << f.target().name() << "\n";
  for (VertexId v = 0; v < f.source().vertex_count(); ++v) {
    out << "v " << f.source().vertex_name(v) << " " << f.target().vertex_name(f.vertex(v)) << "\n";
  }
  for (EdgeId e = 0; e < f.source().edge_count(); ++e) {
    out << "e " << f.source().edge_name(e) << " " << f.target().token(f.edge({e, true})) << "\n";
  }
  return out.str();
}

void Workspace::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path.parent_path());
}

void Workspace::load_text(std::string_view text, const std::filesystem::path& base_dir) {
  enum class Block { None, Complex, Map, Goc };
  Block block = Block::None;
  std::unique_ptr<CubeComplex> current;
  std::vector<RawMap> raw_maps;
  GocDecl* goc = nullptr;

  auto finish_complex = [&] {
    if (!current) return;
    const std::string name = current->name();
    if (complexes_.count(name) != 0) throw Error("duplicate complex '" + name + "'");
    complex_order_.push_back(name);
    complexes_.emplace(name, share(std::move(*current)));
    current.reset();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto t = tokenize(line);
    if (t.empty()) continue;
    const std::string& k = t[0];

    if (k == "complex") {
      expect_arity(t, 2, line_no);
      finish_complex();
      current = std::make_unique<CubeComplex>(t[1]);
      block = Block::Complex;
    } else if (is_cell_keyword(k)) {
      if (block != Block::Complex) {
        if (block != Block::None) throw ParseError(line_no, "'" + k + "' outside a complex block");
        current = std::make_unique<CubeComplex>("");
        block = Block::Complex;
      }
      apply_cell_line(*current, t, line_no);
    } else if (k == "map") {
      expect_arity(t, 4, line_no);
      finish_complex();
      raw_maps.push_back({t[1], t[2], t[3], {}, {}, line_no});
      block = Block::Map;
    } else if (k == "v" || k == "e") {
      if (block != Block::Map) throw ParseError(line_no, "'" + k + "' outside a map block");
      expect_arity(t, 3, line_no);
      (k == "v" ? raw_maps.back().vertices : raw_maps.back().edges).emplace_back(t[1], t[2]);
    } else if (k == "goc") {
      expect_arity(t, 2, line_no);
      finish_complex();
      gocs_.push_back({});
      goc = &gocs_.back();
      goc->name = t[1];
      goc->line = line_no;
      block = Block::Goc;
    } else if (k == "gvertex" || k == "gedge" || k == "theta" || k == "psi" || k == "constant") {
      if (block != Block::Goc) throw ParseError(line_no, "'" + k + "' outside a goc block");
      if (k == "gvertex") {
        expect_arity(t, 3, line_no);
        goc->vertices.push_back({t[1], t[2]});
      } else if (k == "gedge") {
        expect_arity(t, 7, line_no);
        goc->edges.push_back({t[1], t[2], t[3], t[4], t[5], t[6]});
      } else if (k == "theta") {
        expect_arity(t, 3, line_no);
        goc->theta[t[1]] = t[2];
      } else if (k == "psi") {
        expect_arity(t, 3, line_no);
        goc->psi[t[1]] = t[2];
      } else {
        expect_arity(t, 2, line_no);
        goc->constant = t[1];
      }
    } else if (k == "load") {
      expect_arity(t, 2, line_no);
      finish_complex();
      block = Block::None;
      try {
        load_file(base_dir / t[1]);
      } catch (const ParseError& e) {
        throw ParseError(line_no, t[1] + ": " + e.what());
      } catch (const Error& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      throw ParseError(line_no, "unknown directive '" + k + "'");
    }
  }
  finish_complex();
  resolve_maps(raw_maps);
}

void Workspace::resolve_maps(std::vector<RawMap>& raw) {
  for (auto& r : raw) {
    try {
      const ComplexPtr src = complex(r.source);
      const ComplexPtr dst = complex(r.target);
      constexpr VertexId kUnset = static_cast<VertexId>(-1);
      std::vector<VertexId> vm(src->vertex_count(), kUnset);
      std::vector<DirectedEdge> em(src->edge_count());
      std::vector<bool> seen(src->edge_count(), false);
      for (const auto& [a, b] : r.vertices) {
        auto sv = src->find_vertex(a);
        auto dv = dst->find_vertex(b);
        if (!sv || !dv) throw Error("unknown vertex in 'v " + a + " " + b + "'");
        vm[*sv] = *dv;
      }
      for (const auto& [a, b] : r.edges) {
        auto se = src->find_edge(a);
        if (!se) throw Error("unknown edge '" + a + "'");
        em[*se] = parse_edge_token(*dst, b);
        seen[*se] = true;
      }
      for (VertexId v = 0; v < vm.size(); ++v) {
        if (vm[v] == kUnset) throw Error("vertex '" + src->vertex_name(v) + "' has no image");
      }
      for (EdgeId e = 0; e < em.size(); ++e) {
        if (!seen[e]) throw Error("edge '" + src->edge_name(e) + "' has no image");
      }
      if (maps_.count(r.name) != 0) throw Error("duplicate map '" + r.name + "'");
      maps_.emplace(r.name, CubicalMap(src, dst, std::move(vm), std::move(em), r.name));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(r.line, "map '" + r.name + "': " + e.what());
    }
  }
}

ComplexPtr Workspace::complex(const std::string& name) const {
  auto it = complexes_.find(name);
  if (it == complexes_.end()) throw Error("unknown complex '" + name + "'");
  return it->second;
}

const CubicalMap& Workspace::map(const std::string& name) const {
  auto it = maps_.find(name);
  if (it == maps_.end()) throw Error("unknown map '" + name + "'");
  return it->second;
}

CubicalMap Workspace::map_or_identity(const std::string& name, const ComplexPtr& source,
                                      const ComplexPtr& target) const {
  if (name == "id") {
    if (source != target) throw Error("'id' used between different complexes");
    return CubicalMap::identity(source);
  }
  const CubicalMap& f = map(name);
  if (f.source_ptr() != source || f.target_ptr() != target) {
    throw Error("map '" + name + "' has the wrong source or target");
  }
  return f;
}

void Workspace::add_complex(ComplexPtr x) {
  const std::string name = x->name();
  if (complexes_.count(name) != 0) throw Error("duplicate complex '" + name + "'");
  complex_order_.push_back(name);
  complexes_.emplace(name, std::move(x));
}

void Workspace::add_map(CubicalMap f) {
  const std::string name = f.name();
  if (maps_.count(name) != 0) throw Error("duplicate map '" + name + "'");
  maps_.emplace(name, std::move(f));
}

}  // namespace cubex
