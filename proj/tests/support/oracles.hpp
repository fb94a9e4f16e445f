#pragma once

// Independent re-derivations used to cross-check the library: naive
// transitive closure for parallelism and a brute-force pathology scan that
// reads consecutiveness straight off square boundaries.

#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cubex/complex.hpp"
#include "cubex/hyperplanes.hpp"

namespace cubex::testing {

using Relation = std::vector<std::vector<bool>>;

inline void close_transitively(Relation& r) {
  const std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (r[k][j]) r[i][j] = true;
      }
    }
  }
}

struct NaiveParallelism {
  Relation edges;     // undirected
  Relation directed;  // indexed by DirectedEdge::index()
};

inline NaiveParallelism naive_parallelism(const CubeComplex& x) {
  const std::size_t n = x.edge_count();
  NaiveParallelism p{Relation(n, std::vector<bool>(n, false)), Relation(2 * n, std::vector<bool>(2 * n, false))};
  for (std::size_t i = 0; i < n; ++i) p.edges[i][i] = true;
  for (std::size_t i = 0; i < 2 * n; ++i) p.directed[i][i] = true;
  auto link = [&](DirectedEdge a, DirectedEdge b) {
    p.edges[a.edge][b.edge] = p.edges[b.edge][a.edge] = true;
    for (const auto& [u, w] : {std::pair{a, b}, std::pair{a.reversed(), b.reversed()}}) {
      p.directed[u.index()][w.index()] = p.directed[w.index()][u.index()] = true;
    }
  };
  for (const Square& s : x.squares()) {
    link(s.bottom, s.top);
    link(s.left, s.right);
  }
  close_transitively(p.edges);
  close_transitively(p.directed);
  return p;
}

/// Union-find classes agree with the naive closure (both relations).
inline bool parallelism_agrees(const CubeComplex& x, const HyperplaneStructure& h, std::string* why = nullptr) {
  const NaiveParallelism p = naive_parallelism(x);
  for (EdgeId a = 0; a < x.edge_count(); ++a) {
    for (EdgeId b = 0; b < x.edge_count(); ++b) {
      if (p.edges[a][b] != (h.of_edge[a] == h.of_edge[b])) {
        if (why) *why = "edge classes differ on " + x.edge_name(a) + ", " + x.edge_name(b);
        return false;
      }
    }
  }
  for (std::uint32_t a = 0; a < 2 * x.edge_count(); ++a) {
    for (std::uint32_t b = 0; b < 2 * x.edge_count(); ++b) {
      if (p.directed[a][b] != (h.directed_class[a] == h.directed_class[b])) {
        if (why) *why = "directed classes differ";
        return false;
      }
    }
  }
  for (const auto& hp : h.hyperplanes) {
    bool one_sided = false;
    for (EdgeId e : hp.edges) one_sided = one_sided || p.directed[DirectedEdge{e, true}.index()][DirectedEdge{e, false}.index()];
    if (one_sided == hp.two_sided) {
      if (why) *why = "sidedness differs";
      return false;
    }
  }
  return true;
}

/// Pathology lists keyed by the smallest edge of each hyperplane so that
/// the oracle does not depend on the library's hyperplane numbering.
struct PathologySets {
  using EndPair = std::tuple<EdgeId, VertexId, std::uint32_t, std::uint32_t>;
  std::set<EndPair> self_crossings;
  std::set<EdgeId> one_sided;
  std::set<EndPair> direct_self_osculations;
  std::set<std::pair<EdgeId, EdgeId>> inter_osculations;
  bool operator==(const PathologySets&) const = default;
};

inline PathologySets::EndPair end_pair(EdgeId key, VertexId v, DirectedEdge a, DirectedEdge b) {
  const auto i = a.index(), j = b.index();
  return {key, v, std::min(i, j), std::max(i, j)};
}

inline PathologySets brute_force_pathologies(const CubeComplex& x, OsculationRule rule) {
  const NaiveParallelism p = naive_parallelism(x);
  const std::size_t n = x.edge_count();
  std::vector<EdgeId> key(n);
  for (EdgeId e = 0; e < n; ++e) {
    key[e] = e;
    for (EdgeId f = 0; f < e; ++f) {
      if (p.edges[e][f]) {
        key[e] = f;
        break;
      }
    }
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> corner_pairs;
  auto add_corner = [&](DirectedEdge a, DirectedEdge b) {
    corner_pairs.insert({std::min(a.index(), b.index()), std::max(a.index(), b.index())});
  };
  for (const Square& s : x.squares()) {
    add_corner(s.bottom, s.left);
    add_corner(s.bottom.reversed(), s.right);
    add_corner(s.left.reversed(), s.top);
    add_corner(s.top.reversed(), s.right.reversed());
  }
  auto start = [&](DirectedEdge d) { return d.forward ? x.edge(d.edge).initial : x.edge(d.edge).terminal; };

  PathologySets out;
  std::set<std::pair<EdgeId, EdgeId>> crossing, osculating;
  for (std::uint32_t i = 0; i < 2 * n; ++i) {
    for (std::uint32_t j = i + 1; j < 2 * n; ++j) {
      const DirectedEdge a = DirectedEdge::from_index(i), b = DirectedEdge::from_index(j);
      if (start(a) != start(b)) continue;
      const VertexId v = start(a);
      const bool consecutive = corner_pairs.count({i, j}) != 0;
      const EdgeId ka = key[a.edge], kb = key[b.edge];
      if (ka == kb) {
        if (consecutive) {
          out.self_crossings.insert(end_pair(ka, v, a, b));
        } else if (rule == OsculationRule::Literal || p.directed[i][j]) {
          out.direct_self_osculations.insert(end_pair(ka, v, a, b));
        }
      } else {
        (consecutive ? crossing : osculating).insert({std::min(ka, kb), std::max(ka, kb)});
      }
    }
  }
  for (const auto& c : crossing) {
    if (osculating.count(c) != 0) out.inter_osculations.insert(c);
  }
  for (EdgeId e = 0; e < n; ++e) {
    if (p.directed[DirectedEdge{e, true}.index()][DirectedEdge{e, false}.index()]) out.one_sided.insert(key[e]);
  }
  return out;
}

inline PathologySets library_pathologies(const CubeComplex& x, const HyperplaneStructure& h, const PathologyReport& r) {
  auto key = [&](HyperplaneId id) { return h.hyperplanes[id].edges.front(); };
  PathologySets out;
  for (const auto& w : r.self_crossings) out.self_crossings.insert(end_pair(key(w.hyperplane), w.at.vertex, w.at.first, w.at.second));
  for (auto id : r.one_sided) out.one_sided.insert(key(id));
  for (const auto& w : r.direct_self_osculations) {
    out.direct_self_osculations.insert(end_pair(key(w.hyperplane), w.at.vertex, w.at.first, w.at.second));
  }
  for (const auto& w : r.inter_osculations) {
    const EdgeId a = key(w.first), b = key(w.second);
    out.inter_osculations.insert({std::min(a, b), std::max(a, b)});
  }
  (void)x;
  return out;
}

/// Every complex with at most `max_vertices` vertices, at most two edges
/// and at most two squares (squares as a multiset over all corner-compatible
/// boundaries).
inline std::size_t for_each_small_complex(std::size_t max_vertices, const std::function<void(const CubeComplex&)>& visit) {
  std::size_t count = 0;
  for (std::size_t nv = 1; nv <= max_vertices; ++nv) {
    for (std::size_t ne = 0; ne <= 2; ++ne) {
      std::size_t endpoint_choices = 1;
      for (std::size_t i = 0; i < 2 * ne; ++i) endpoint_choices *= nv;
      for (std::size_t code = 0; code < endpoint_choices; ++code) {
        CubeComplex g("small");
        for (std::size_t v = 0; v < nv; ++v) g.add_vertex("v" + std::to_string(v));
        std::size_t c = code;
        for (std::size_t e = 0; e < ne; ++e) {
          const auto a = static_cast<VertexId>(c % nv);
          c /= nv;
          const auto b = static_cast<VertexId>(c % nv);
          c /= nv;
          g.add_edge(std::string(1, static_cast<char>('a' + e)), a, b);
        }
        std::vector<Square> boundaries;
        const std::uint32_t ends = static_cast<std::uint32_t>(2 * ne);
        for (std::uint32_t q = 0; ne > 0 && q < ends * ends * ends * ends; ++q) {
          const Square s{DirectedEdge::from_index(q % ends), DirectedEdge::from_index(q / ends % ends),
                         DirectedEdge::from_index(q / ends / ends % ends), DirectedEdge::from_index(q / ends / ends / ends)};
          if (g.initial(s.bottom) == g.initial(s.left) && g.terminal(s.bottom) == g.initial(s.right) &&
              g.terminal(s.left) == g.initial(s.top) && g.terminal(s.right) == g.terminal(s.top)) {
            boundaries.push_back(s);
          }
        }
        visit(g);
        ++count;
        for (std::size_t i = 0; i < boundaries.size(); ++i) {
          CubeComplex one = g;
          one.add_square("s", boundaries[i]);
          visit(one);
          ++count;
          for (std::size_t j = i; j < boundaries.size(); ++j) {
            CubeComplex two = one;
            two.add_square("t", boundaries[j]);
            visit(two);
            ++count;
          }
        }
      }
    }
  }
  return count;
}

}  // namespace cubex::testing
