#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cubex/complex.hpp"
#include "cubex/covers.hpp"
#include "cubex/cubical_map.hpp"
#include "cubex/text_io.hpp"

namespace cubex::testing {

using Rng = std::mt19937_64;

inline std::string data_path(const std::string& name) { return std::string(CUBEX_TEST_DATA) + "/" + name; }

inline Workspace load(const std::string& name) {
  Workspace ws;
  ws.load_file(data_path(name));
  return ws;
}

inline ComplexPtr load_complex(const std::string& file, const std::string& name = {}) {
  Workspace ws = load(file);
  return ws.complex(name.empty() ? ws.complex_order().front() : name);
}

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Random multigraph with loops; a spanning tree is laid first when
/// `connected` is set, so edges >= vertices - 1 in that case.
inline CubeComplex random_graph(Rng& rng, std::size_t vertices, std::size_t edges, bool connected = true,
                                const std::string& name = "g") {
  CubeComplex g(name);
  for (std::size_t i = 0; i < vertices; ++i) g.add_vertex("v" + std::to_string(i));
  std::size_t made = 0;
  if (connected) {
    for (std::size_t i = 1; i < vertices; ++i) {
      const auto j = static_cast<VertexId>(uniform(rng, 0, i - 1));
      if (coin(rng)) {
        g.add_edge("e" + std::to_string(made++), j, static_cast<VertexId>(i));
      } else {
        g.add_edge("e" + std::to_string(made++), static_cast<VertexId>(i), j);
      }
    }
  }
  while (made < edges) {
    const auto a = static_cast<VertexId>(uniform(rng, 0, vertices - 1));
    const auto b = static_cast<VertexId>(uniform(rng, 0, vertices - 1));
    g.add_edge("e" + std::to_string(made++), a, b);
  }
  return g;
}

inline CubeComplex rose(std::size_t petals, const std::string& name = "rose") {
  CubeComplex r(name);
  r.add_vertex("v");
  for (std::size_t i = 0; i < petals; ++i) r.add_edge(std::string(1, static_cast<char>('a' + i)), 0, 0);
  return r;
}

inline CubeComplex cycle_graph(std::size_t length, const std::string& name = "cycle") {
  CubeComplex c(name);
  for (std::size_t i = 0; i < length; ++i) c.add_vertex("y" + std::to_string(i));
  for (std::size_t i = 0; i < length; ++i) {
    c.add_edge("f" + std::to_string(i), static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % length));
  }
  return c;
}

inline CubeComplex path_graph(std::size_t length, const std::string& name = "path") {
  CubeComplex c(name);
  for (std::size_t i = 0; i <= length; ++i) c.add_vertex("y" + std::to_string(i));
  for (std::size_t i = 0; i < length; ++i) {
    c.add_edge("f" + std::to_string(i), static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
  }
  return c;
}

/// Two edge-ends at one vertex may be the link image of a 1-dimensional
/// source vertex iff distinct and not a corner pair.
inline bool turn_ok(const CubeComplex& x, DirectedEdge in_reversed, DirectedEdge out) {
  return in_reversed != out && !x.consecutive(in_reversed, out);
}

/// Random walk of `length` steps whose turns are all legal; closed when
/// `closed` is set (the closing turn is legal too).
inline std::optional<std::vector<DirectedEdge>> immersed_walk(Rng& rng, const CubeComplex& x, std::size_t length,
                                                              bool closed, int attempts = 200) {
  if (x.vertex_count() == 0 || length == 0) return std::nullopt;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<DirectedEdge> walk;
    VertexId at = static_cast<VertexId>(uniform(rng, 0, x.vertex_count() - 1));
    const VertexId start = at;
    bool stuck = false;
    for (std::size_t i = 0; i < length && !stuck; ++i) {
      std::vector<DirectedEdge> options;
      for (const DirectedEdge& d : x.edge_ends(at)) {
        if (walk.empty() || turn_ok(x, walk.back().reversed(), d)) options.push_back(d);
      }
      if (options.empty()) {
        stuck = true;
        break;
      }
      const DirectedEdge d = options[uniform(rng, 0, options.size() - 1)];
      walk.push_back(d);
      at = x.terminal(d);
    }
    if (stuck) continue;
    if (closed && (at != start || !turn_ok(x, walk.back().reversed(), walk.front()))) continue;
    return walk;
  }
  return std::nullopt;
}

/// Map from a cycle or path graph along a walk.
inline CubicalMap map_along(const ComplexPtr& x, const std::vector<DirectedEdge>& walk, bool closed,
                            const std::string& name = "f") {
  ComplexPtr y = share(closed ? cycle_graph(walk.size(), "y") : path_graph(walk.size(), "y"));
  std::vector<VertexId> vm(y->vertex_count());
  for (std::size_t i = 0; i < walk.size(); ++i) vm[i] = x->initial(walk[i]);
  if (!closed) vm[walk.size()] = x->terminal(walk.back());
  return CubicalMap(y, x, vm, walk, name);
}

inline CubicalMap point_map(const ComplexPtr& x, VertexId v, const std::string& name = "pt") {
  CubeComplex p("pt");
  p.add_vertex("o");
  return CubicalMap(share(std::move(p)), x, {v}, {}, name);
}

inline Permutation random_permutation(Rng& rng, std::size_t n) {
  Permutation p = perm::identity(n);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Random (possibly disconnected) voltages on a 1-dimensional complex.
inline VoltageAssignment random_graph_voltages(Rng& rng, const CubeComplex& x, std::size_t degree) {
  VoltageAssignment v{degree, {}};
  for (EdgeId e = 0; e < x.edge_count(); ++e) v.perms.push_back(random_permutation(rng, degree));
  return v;
}

/// X x [0,1] for complexes of dimension <= 2, layers suffixed 0 and 1.
inline CubeComplex thicken(const CubeComplex& x, const std::string& name = "prod") {
  CubeComplex p(name);
  const auto nv = static_cast<VertexId>(x.vertex_count());
  const auto ne = static_cast<EdgeId>(x.edge_count());
  const auto ns = static_cast<SquareId>(x.square_count());
  for (int layer = 0; layer < 2; ++layer) {
    for (VertexId v = 0; v < nv; ++v) p.add_vertex(x.vertex_name(v) + std::to_string(layer));
  }
  for (int layer = 0; layer < 2; ++layer) {
    for (EdgeId e = 0; e < ne; ++e) {
      p.add_edge(x.edge_name(e) + std::to_string(layer), x.edge(e).initial + layer * nv, x.edge(e).terminal + layer * nv);
    }
  }
  for (VertexId v = 0; v < nv; ++v) p.add_edge("h" + x.vertex_name(v), v, v + nv);
  auto up = [&](DirectedEdge d, int layer) { return DirectedEdge{d.edge + layer * ne, d.forward}; };
  auto vertical = [&](VertexId v) { return DirectedEdge{2 * ne + v, true}; };
  for (int layer = 0; layer < 2; ++layer) {
    for (SquareId s = 0; s < ns; ++s) {
      const Square& q = x.square(s);
      p.add_square(x.square_name(s) + std::to_string(layer), {up(q.bottom, layer), up(q.right, layer), up(q.top, layer), up(q.left, layer)});
    }
  }
  for (EdgeId e = 0; e < ne; ++e) {
    const DirectedEdge d{e, true};
    p.add_square("q" + x.edge_name(e), {up(d, 0), vertical(x.terminal(d)), up(d, 1), vertical(x.initial(d))});
  }
  for (SquareId s = 0; s < ns; ++s) {
    const Square& q = x.square(s);
    std::array<DirectedEdge, 4> corners{};
    for (int c = 0; c < 4; ++c) corners[c] = vertical(corner_vertex(x, q, c));
    p.add_cube3("c" + x.square_name(s), s, s + ns, corners);
  }
  return p;
}

}  // namespace cubex::testing
