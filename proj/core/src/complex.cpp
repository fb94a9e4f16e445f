#include "cubex/complex.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cubex/union_find.hpp"

namespace cubex {

namespace {

// (x, y) -> (y, x)
Reparametrization swap_axes(const Reparametrization& r) {
  const Square& s = r.square;
  constexpr std::array<Corner, 4> moved{0, 2, 1, 3};
  Reparametrization out{{s.left, s.top, s.right, s.bottom}, {}};
  for (Corner c = 0; c < 4; ++c) out.corner_of[c] = r.corner_of[moved[c]];
  return out;
}

// (x, y) -> (1 - x, y)
Reparametrization flip_x(const Reparametrization& r) {
  const Square& s = r.square;
  constexpr std::array<Corner, 4> moved{1, 0, 3, 2};
  Reparametrization out{{s.bottom.reversed(), s.left, s.top.reversed(), s.right}, {}};
  for (Corner c = 0; c < 4; ++c) out.corner_of[c] = r.corner_of[moved[c]];
  return out;
}

using BoundaryKey = std::array<std::uint32_t, 4>;

BoundaryKey key_of(const Square& s) {
  return {s.bottom.index(), s.right.index(), s.top.index(), s.left.index()};
}

BoundaryKey canonical_key(const Square& s) {
  BoundaryKey best = key_of(s);
  for (const auto& r : reparametrizations(s)) best = std::min(best, key_of(r.square));
  return best;
}

std::uint64_t pair_key(DirectedEdge a, DirectedEdge b) {
  std::uint64_t x = a.index();
  std::uint64_t y = b.index();
  if (x > y) std::swap(x, y);
  return (x << 32) | y;
}

}  // namespace

std::array<Reparametrization, 8> reparametrizations(const Square& s) {
  std::array<Reparametrization, 8> out;
  std::vector<Reparametrization> found{{s, {0, 1, 2, 3}}};
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& next : {swap_axes(found[i]), flip_x(found[i])}) {
      const bool seen = std::any_of(found.begin(), found.end(),
                                    [&](const auto& r) { return r.corner_of == next.corner_of; });
      if (!seen) found.push_back(next);
    }
  }
  std::copy(found.begin(), found.end(), out.begin());
  return out;
}

SquareCorner corner_of_square(const CubeComplex& x, const Square& s, Corner c) {
  switch (c) {
    case 0:
      return {0, 0, x.initial(s.bottom), s.bottom, s.left};
    case 1:
      return {0, 1, x.terminal(s.bottom), s.bottom.reversed(), s.right};
    case 2:
      return {0, 2, x.terminal(s.left), s.left.reversed(), s.top};
    default:
      return {0, 3, x.terminal(s.top), s.top.reversed(), s.right.reversed()};
  }
}

VertexId corner_vertex(const CubeComplex& x, const Square& s, Corner c) {
  return corner_of_square(x, s, c).vertex;
}

VertexId CubeComplex::add_vertex(std::string name) {
  if (vertex_index_.count(name) != 0) throw Error("duplicate vertex '" + name + "'");
  const auto id = static_cast<VertexId>(vertex_names_.size());
  vertex_index_.emplace(name, id);
  vertex_names_.push_back(std::move(name));
  edge_ends_.emplace_back();
  corners_at_.emplace_back();
  return id;
}

EdgeId CubeComplex::add_edge(std::string name, VertexId initial, VertexId terminal) {
  if (edge_index_.count(name) != 0) throw Error("duplicate edge '" + name + "'");
  if (initial >= vertex_count() || terminal >= vertex_count()) throw Error("edge '" + name + "' has unknown endpoint");
  const auto id = static_cast<EdgeId>(edges_.size());
  edge_index_.emplace(name, id);
  edge_names_.push_back(std::move(name));
  edges_.push_back({initial, terminal});
  edge_ends_[initial].push_back({id, true});
  edge_ends_[terminal].push_back({id, false});
  std::sort(edge_ends_[initial].begin(), edge_ends_[initial].end());
  std::sort(edge_ends_[terminal].begin(), edge_ends_[terminal].end());
  return id;
}

SquareId CubeComplex::add_square(std::string name, const Square& s) {
  if (square_index_.count(name) != 0) throw Error("duplicate square '" + name + "'");
  for (DirectedEdge d : {s.bottom, s.right, s.top, s.left}) {
    if (d.edge >= edge_count()) throw Error("square '" + name + "' references unknown edge");
  }
  if (initial(s.bottom) != initial(s.left) || terminal(s.bottom) != initial(s.right) ||
      terminal(s.left) != initial(s.top) || terminal(s.right) != terminal(s.top)) {
    throw Error("square '" + name + "' has incompatible corners");
  }
  const auto id = static_cast<SquareId>(squares_.size());
  square_index_.emplace(name, id);
  square_names_.push_back(std::move(name));
  squares_.push_back(s);
  square_lookup_[canonical_key(s)].push_back(id);
  for (Corner c = 0; c < 4; ++c) {
    SquareCorner sc = corner_of_square(*this, s, c);
    sc.square = id;
    corners_at_[sc.vertex].push_back(sc);
  }
  return id;
}

std::optional<std::pair<SquareId, int>> CubeComplex::find_square_matching(const Square& s) const {
  auto it = square_lookup_.find(canonical_key(s));
  if (it == square_lookup_.end()) return std::nullopt;
  for (SquareId id : it->second) {
    const auto reps = reparametrizations(squares_[id]);
    for (int i = 0; i < 8; ++i) {
      if (reps[i].square == s) return std::make_pair(id, i);
    }
  }
  return std::nullopt;
}

Cube3Id CubeComplex::add_cube3(std::string name, SquareId bottom, SquareId top,
                               const std::array<DirectedEdge, 4>& corners) {
  if (cube_index_.count(name) != 0) throw Error("duplicate cube3 '" + name + "'");
  if (bottom >= square_count() || top >= square_count()) throw Error("cube3 '" + name + "' references unknown square");
  for (DirectedEdge d : corners) {
    if (d.edge >= edge_count()) throw Error("cube3 '" + name + "' references unknown edge");
  }
  const Square& b = squares_[bottom];
  for (Corner c = 0; c < 4; ++c) {
    if (initial(corners[c]) != corner_vertex(*this, b, c)) {
      throw Error("cube3 '" + name + "': corner edge does not start at the bottom corner");
    }
  }
  const auto reps = reparametrizations(squares_[top]);
  for (int ri = 0; ri < 8; ++ri) {
    const Square& a = reps[ri].square;
    bool ok = true;
    for (Corner c = 0; c < 4 && ok; ++c) ok = terminal(corners[c]) == corner_vertex(*this, a, c);
    if (!ok) continue;
    const std::array<Square, 4> sides{{
        {b.bottom, corners[1], a.bottom, corners[0]},
        {b.top, corners[3], a.top, corners[2]},
        {b.left, corners[2], a.left, corners[0]},
        {b.right, corners[3], a.right, corners[1]},
    }};
    for (const auto& side : sides) {
      if (!find_square_matching(side)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const auto id = static_cast<Cube3Id>(cubes_.size());
    cube_index_.emplace(name, id);
    cube_names_.push_back(std::move(name));
    cubes_.push_back({bottom, top, corners, a, ri});
    return id;
  }
  throw Error("cube3 '" + name + "': side squares are missing or corners do not match the top square");
}

std::size_t CubeComplex::dimension() const {
  if (!cubes_.empty()) return 3;
  if (!squares_.empty()) return 2;
  if (!edges_.empty()) return 1;
  return 0;
}

long CubeComplex::euler_characteristic() const {
  return static_cast<long>(vertex_count()) - static_cast<long>(edge_count()) +
         static_cast<long>(square_count()) - static_cast<long>(cube_count());
}

std::optional<VertexId> CubeComplex::find_vertex(const std::string& name) const {
  auto it = vertex_index_.find(name);
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> CubeComplex::find_edge(const std::string& name) const {
  auto it = edge_index_.find(name);
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<SquareId> CubeComplex::find_square(const std::string& name) const {
  auto it = square_index_.find(name);
  if (it == square_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<SquareCorner> CubeComplex::square_corners() const {
  std::vector<SquareCorner> out;
  out.reserve(4 * squares_.size());
  for (SquareId id = 0; id < squares_.size(); ++id) {
    for (Corner c = 0; c < 4; ++c) {
      SquareCorner sc = corner_of_square(*this, squares_[id], c);
      sc.square = id;
      out.push_back(sc);
    }
  }
  return out;
}

bool CubeComplex::consecutive(DirectedEdge a, DirectedEdge b) const {
  const VertexId v = initial(a);
  if (initial(b) != v) return false;
  const std::uint64_t want = pair_key(a, b);
  for (const auto& sc : corners_at_[v]) {
    if (pair_key(sc.first, sc.second) == want) return true;
  }
  return false;
}

std::array<std::pair<VertexId, std::array<DirectedEdge, 3>>, 8> CubeComplex::cube_corner_triples(Cube3Id id) const {
  const Cube3& q = cubes_.at(id);
  const Square& b = squares_[q.bottom];
  std::array<std::pair<VertexId, std::array<DirectedEdge, 3>>, 8> out;
  for (Corner c = 0; c < 4; ++c) {
    const SquareCorner lo = corner_of_square(*this, b, c);
    const SquareCorner hi = corner_of_square(*this, q.top_aligned, c);
    out[c] = {lo.vertex, {lo.first, lo.second, q.corners[c]}};
    out[4 + c] = {hi.vertex, {hi.first, hi.second, q.corners[c].reversed()}};
  }
  return out;
}

std::optional<std::size_t> LinkComplex::index_of(DirectedEdge d) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), d);
  if (it == vertices.end() || *it != d) return std::nullopt;
  return static_cast<std::size_t>(it - vertices.begin());
}

bool LinkComplex::adjacent(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::array<std::size_t, 2>{i, j});
}

bool LinkComplex::has_triangle(std::size_t i, std::size_t j, std::size_t k) const {
  std::array<std::size_t, 3> t{i, j, k};
  std::sort(t.begin(), t.end());
  return std::binary_search(triangles.begin(), triangles.end(), t);
}

LinkComplex link(const CubeComplex& x, VertexId v) {
  if (v >= x.vertex_count()) throw Error("unknown vertex");
  LinkComplex lk;
  lk.vertex = v;
  lk.vertices = x.edge_ends(v);
  for (const auto& sc : x.corners_at(v)) {
    auto i = *lk.index_of(sc.first);
    auto j = *lk.index_of(sc.second);
    if (i > j) std::swap(i, j);
    lk.edges.push_back({i, j});
  }
  std::sort(lk.edges.begin(), lk.edges.end());
  lk.edges.erase(std::unique(lk.edges.begin(), lk.edges.end()), lk.edges.end());
  for (Cube3Id c = 0; c < x.cube_count(); ++c) {
    for (const auto& [w, ends] : x.cube_corner_triples(c)) {
      if (w != v) continue;
      std::array<std::size_t, 3> t{*lk.index_of(ends[0]), *lk.index_of(ends[1]), *lk.index_of(ends[2])};
      std::sort(t.begin(), t.end());
      lk.triangles.push_back(t);
    }
  }
  std::sort(lk.triangles.begin(), lk.triangles.end());
  lk.triangles.erase(std::unique(lk.triangles.begin(), lk.triangles.end()), lk.triangles.end());
  return lk;
}

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::LoopedLinkEdge:
      return "looped-link-edge";
    case Violation::Kind::DoubleLinkEdge:
      return "double-link-edge";
    case Violation::Kind::EmptyTriangle:
      return "empty-triangle";
    case Violation::Kind::DoubleTriangle:
      return "double-triangle";
    case Violation::Kind::FourClique:
      return "four-clique";
  }
  return "unknown";
}

ValidationReport validate(const CubeComplex& x) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, VertexId v, std::vector<DirectedEdge> ends) {
    std::sort(ends.begin(), ends.end());
    report.violations.push_back({kind, v, std::move(ends)});
  };

  std::vector<std::vector<std::array<DirectedEdge, 3>>> triples(x.vertex_count());
  for (Cube3Id c = 0; c < x.cube_count(); ++c) {
    for (const auto& [w, ends] : x.cube_corner_triples(c)) triples[w].push_back(ends);
  }

  for (VertexId v = 0; v < x.vertex_count(); ++v) {
    std::map<std::uint64_t, int> pair_count;
    for (const auto& sc : x.corners_at(v)) {
      if (sc.first == sc.second) {
        add(Violation::Kind::LoopedLinkEdge, v, {sc.first});
        continue;
      }
      if (++pair_count[pair_key(sc.first, sc.second)] == 2) add(Violation::Kind::DoubleLinkEdge, v, {sc.first, sc.second});
    }

    const LinkComplex lk = link(x, v);
    std::map<std::array<std::size_t, 3>, int> tri_count;
    for (auto ends : triples[v]) {
      std::array<std::size_t, 3> t{*lk.index_of(ends[0]), *lk.index_of(ends[1]), *lk.index_of(ends[2])};
      std::sort(t.begin(), t.end());
      if (++tri_count[t] == 2) add(Violation::Kind::DoubleTriangle, v, {ends.begin(), ends.end()});
    }

    const std::size_t n = lk.vertices.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [i, j] : lk.edges) adj[i][j] = adj[j][i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!adj[i][j]) continue;
        for (std::size_t k = j + 1; k < n; ++k) {
          if (!adj[i][k] || !adj[j][k]) continue;
          if (!lk.has_triangle(i, j, k)) {
            add(Violation::Kind::EmptyTriangle, v, {lk.vertices[i], lk.vertices[j], lk.vertices[k]});
          }
          for (std::size_t l = k + 1; l < n; ++l) {
            if (adj[i][l] && adj[j][l] && adj[k][l]) {
              add(Violation::Kind::FourClique, v, {lk.vertices[i], lk.vertices[j], lk.vertices[k], lk.vertices[l]});
            }
          }
        }
      }
    }
  }
  report.npc = report.violations.empty();
  return report;
}

bool is_connected(const CubeComplex& x) {
  if (x.vertex_count() == 0) return false;
  UnionFind uf(x.vertex_count());
  std::size_t components = x.vertex_count();
  for (const auto& e : x.edges()) {
    if (uf.unite(e.initial, e.terminal)) --components;
  }
  return components == 1;
}

Subcomplex Subcomplex::empty(const CubeComplex& x) {
  return {std::vector<bool>(x.vertex_count(), false), std::vector<bool>(x.edge_count(), false),
          std::vector<bool>(x.square_count(), false), std::vector<bool>(x.cube_count(), false)};
}

Subcomplex Subcomplex::whole(const CubeComplex& x) {
  return {std::vector<bool>(x.vertex_count(), true), std::vector<bool>(x.edge_count(), true),
          std::vector<bool>(x.square_count(), true), std::vector<bool>(x.cube_count(), true)};
}

bool Subcomplex::is_closed(const CubeComplex& x) const {
  if (vertices.size() != x.vertex_count() || edges.size() != x.edge_count() || squares.size() != x.square_count() ||
      cubes.size() != x.cube_count()) {
    return false;
  }
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    if (edges[e] && (!vertices[x.edge(e).initial] || !vertices[x.edge(e).terminal])) return false;
  }
  for (SquareId s = 0; s < x.square_count(); ++s) {
    if (!squares[s]) continue;
    const Square& q = x.square(s);
    for (DirectedEdge d : {q.bottom, q.right, q.top, q.left}) {
      if (!edges[d.edge]) return false;
    }
  }
  for (Cube3Id c = 0; c < x.cube_count(); ++c) {
    if (!cubes[c]) continue;
    const Cube3& q = x.cube(c);
    if (!squares[q.bottom] || !squares[q.top]) return false;
    for (DirectedEdge d : q.corners) {
      if (!edges[d.edge]) return false;
    }
  }
  return true;
}

}  // namespace cubex
