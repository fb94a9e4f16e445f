#pragma once

#include <array>
#include <compare>
#include <map>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cubex {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using SquareId = std::uint32_t;
using Cube3Id = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An edge with a chosen direction. `forward` follows the edge's intrinsic
/// initial -> terminal orientation.
struct DirectedEdge {
  EdgeId edge = 0;
  bool forward = true;

  [[nodiscard]] constexpr DirectedEdge reversed() const { return {edge, !forward}; }

  // Order used for link vertices: (edge id, forward before backward).
  constexpr auto operator<=>(const DirectedEdge& o) const {
    if (auto c = edge <=> o.edge; c != 0) return c;
    return static_cast<int>(!forward) <=> static_cast<int>(!o.forward);
  }
  constexpr bool operator==(const DirectedEdge&) const = default;

  /// Dense index in [0, 2 * edgeCount).
  [[nodiscard]] constexpr std::uint32_t index() const { return 2 * edge + (forward ? 0 : 1); }
  static constexpr DirectedEdge from_index(std::uint32_t i) { return {i / 2, (i % 2) == 0}; }
};

struct Edge {
  VertexId initial = 0;
  VertexId terminal = 0;
};

/// A square s:[0,1]^2 -> X. bottom runs s(0,0)->s(1,0), top s(0,1)->s(1,1),
/// left s(0,0)->s(0,1), right s(1,0)->s(1,1).
struct Square {
  DirectedEdge bottom, right, top, left;
  bool operator==(const Square&) const = default;
};

/// Corners are numbered 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1).
using Corner = int;

/// A square reparametrized by an element of the dihedral group.
/// `corner_of[c]` is the corner of the original parametrization sitting at
/// corner c of `square`.
struct Reparametrization {
  Square square;
  std::array<Corner, 4> corner_of;
};

/// All eight parametrizations of the same geometric square (index 0 is the
/// identity). Duplicates occur for degenerate squares.
std::array<Reparametrization, 8> reparametrizations(const Square& s);

/// A 3-cube, encoded as a bottom square, a top square and four corner edges
/// E00 E10 E01 E11 running from bottom corner (x,y) to top corner (x,y).
/// `top_aligned` is the top face written in the bottom square's corner
/// convention; it is resolved when the cube is added to a complex.
struct Cube3 {
  SquareId bottom = 0;
  SquareId top = 0;
  std::array<DirectedEdge, 4> corners{};
  Square top_aligned{};
  int top_reparametrization = 0;  // index into reparametrizations(top square)
};

struct LinkComplex {
  VertexId vertex = 0;
  std::vector<DirectedEdge> vertices;  // sorted by (edge id, direction)
  std::vector<std::array<std::size_t, 2>> edges;      // indices into vertices, i < j
  std::vector<std::array<std::size_t, 3>> triangles;  // i < j < k

  [[nodiscard]] std::optional<std::size_t> index_of(DirectedEdge d) const;
  [[nodiscard]] bool adjacent(std::size_t i, std::size_t j) const;
  [[nodiscard]] bool has_triangle(std::size_t i, std::size_t j, std::size_t k) const;
};

/// A corner of a square seen from its vertex: the two edge-ends there.
struct SquareCorner {
  SquareId square = 0;
  Corner corner = 0;
  VertexId vertex = 0;
  DirectedEdge first, second;
};

/// Finite cube complex of dimension at most 3. Cells are addressed by dense
/// indices; names are kept for text I/O.
class CubeComplex {
 public:
  CubeComplex() = default;
  explicit CubeComplex(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  VertexId add_vertex(std::string name);
  EdgeId add_edge(std::string name, VertexId initial, VertexId terminal);
  /// Throws Error on corner incompatibility.
  SquareId add_square(std::string name, const Square& s);
  /// Resolves the top alignment; throws Error when no side-square
  /// configuration exists.
  Cube3Id add_cube3(std::string name, SquareId bottom, SquareId top,
                    const std::array<DirectedEdge, 4>& corners);

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t square_count() const { return squares_.size(); }
  std::size_t cube_count() const { return cubes_.size(); }
  std::size_t dimension() const;
  long euler_characteristic() const;

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const Square& square(SquareId s) const { return squares_.at(s); }
  const Cube3& cube(Cube3Id c) const { return cubes_.at(c); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Square>& squares() const { return squares_; }
  const std::vector<Cube3>& cubes() const { return cubes_; }

  VertexId initial(DirectedEdge d) const { return d.forward ? edges_.at(d.edge).initial : edges_.at(d.edge).terminal; }
  VertexId terminal(DirectedEdge d) const { return initial(d.reversed()); }

  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }
  const std::string& edge_name(EdgeId e) const { return edge_names_.at(e); }
  const std::string& square_name(SquareId s) const { return square_names_.at(s); }
  const std::string& cube_name(Cube3Id c) const { return cube_names_.at(c); }
  std::string token(DirectedEdge d) const { return edge_name(d.edge) + (d.forward ? "+" : "-"); }

  std::optional<VertexId> find_vertex(const std::string& name) const;
  std::optional<EdgeId> find_edge(const std::string& name) const;
  std::optional<SquareId> find_square(const std::string& name) const;

  /// Directed edges with initial vertex v, sorted.
  const std::vector<DirectedEdge>& edge_ends(VertexId v) const { return edge_ends_.at(v); }

  /// All square corners, in (square, corner) order.
  std::vector<SquareCorner> square_corners() const;
  /// Corners of squares at v, sorted by square then corner.
  const std::vector<SquareCorner>& corners_at(VertexId v) const { return corners_at_.at(v); }
  /// True iff {a, b} is a corner pair of some square.
  bool consecutive(DirectedEdge a, DirectedEdge b) const;

  /// The square whose boundary matches `s` up to reparametrization, together
  /// with the matching reparametrization index.
  std::optional<std::pair<SquareId, int>> find_square_matching(const Square& s) const;

  /// Edge-end triples at the eight corners of a 3-cube (in-cube order).
  std::array<std::pair<VertexId, std::array<DirectedEdge, 3>>, 8> cube_corner_triples(Cube3Id c) const;

 private:
  std::string name_;
  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::vector<std::string> square_names_;
  std::vector<std::string> cube_names_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
  std::unordered_map<std::string, SquareId> square_index_;
  std::unordered_map<std::string, Cube3Id> cube_index_;
  std::vector<Edge> edges_;
  std::vector<Square> squares_;
  std::vector<Cube3> cubes_;
  std::vector<std::vector<DirectedEdge>> edge_ends_;
  std::vector<std::vector<SquareCorner>> corners_at_;
  std::map<std::array<std::uint32_t, 4>, std::vector<SquareId>> square_lookup_;
};

/// Corner pair of square s at corner c, as (vertex, edge-end, edge-end).
SquareCorner corner_of_square(const CubeComplex& x, const Square& s, Corner c);

/// Vertex at corner c of s.
VertexId corner_vertex(const CubeComplex& x, const Square& s, Corner c);

struct Violation {
  enum class Kind { LoopedLinkEdge, DoubleLinkEdge, EmptyTriangle, DoubleTriangle, FourClique };
  Kind kind;
  VertexId vertex;
  std::vector<DirectedEdge> edge_ends;
};

std::string to_string(Violation::Kind k);

struct ValidationReport {
  bool npc = true;
  std::vector<Violation> violations;
};

/// Link condition: no looped or doubled link edges and every 3-clique of the
/// link is filled by a 3-cube (4-cliques always violate the dimension cap).
ValidationReport validate(const CubeComplex& x);

LinkComplex link(const CubeComplex& x, VertexId v);

bool is_connected(const CubeComplex& x);

/// Subsets of cells of an ambient complex.
struct Subcomplex {
  std::vector<bool> vertices, edges, squares, cubes;

  static Subcomplex empty(const CubeComplex& x);
  static Subcomplex whole(const CubeComplex& x);
  /// Face closure check.
  bool is_closed(const CubeComplex& x) const;
};

}  // namespace cubex
