#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cubex/complex.hpp"

namespace cubex {

using ComplexPtr = std::shared_ptr<const CubeComplex>;

inline ComplexPtr share(CubeComplex x) { return std::make_shared<const CubeComplex>(std::move(x)); }

/// Combinatorial map given on vertices and directed edges. The square and
/// 3-cube actions are derived at construction; construction throws Error if
/// endpoints do not commute or some cell has no image.
class CubicalMap {
 public:
  CubicalMap(ComplexPtr source, ComplexPtr target, std::vector<VertexId> vertex_map,
             std::vector<DirectedEdge> edge_map, std::string name = {});

  static CubicalMap identity(ComplexPtr x);

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  const CubeComplex& source() const { return *source_; }
  const CubeComplex& target() const { return *target_; }
  const ComplexPtr& source_ptr() const { return source_; }
  const ComplexPtr& target_ptr() const { return target_; }

  VertexId vertex(VertexId v) const { return vertex_map_.at(v); }
  /// Image of a directed edge; reversal commutes with the map.
  DirectedEdge edge(DirectedEdge d) const {
    const DirectedEdge img = edge_map_.at(d.edge);
    return d.forward ? img : img.reversed();
  }
  SquareId square(SquareId s) const { return square_map_.at(s); }
  Cube3Id cube(Cube3Id c) const { return cube_map_.at(c); }

  const std::vector<VertexId>& vertex_map() const { return vertex_map_; }
  const std::vector<DirectedEdge>& edge_map() const { return edge_map_; }
  const std::vector<SquareId>& square_map() const { return square_map_; }

  /// Equality of vertex and directed-edge maps between the same complexes.
  bool operator==(const CubicalMap& o) const;

 private:
  ComplexPtr source_;
  ComplexPtr target_;
  std::vector<VertexId> vertex_map_;
  std::vector<DirectedEdge> edge_map_;
  std::vector<SquareId> square_map_;
  std::vector<Cube3Id> cube_map_;
  std::string name_;
};

/// g after f. Throws Error if f's target is not g's source.
CubicalMap compose(const CubicalMap& f, const CubicalMap& g);

bool is_isomorphism(const CubicalMap& f);

/// Inverse of an isomorphism, nullopt otherwise.
std::optional<CubicalMap> inverse(const CubicalMap& f);

/// Injective on every cell.
bool is_embedding(const CubicalMap& f);

/// Cells in the image of f.
Subcomplex image(const CubicalMap& f);

struct LinkFailure {
  enum class Kind { NotInjective, NotFull };
  Kind kind;
  VertexId vertex;                      // source vertex
  std::vector<DirectedEdge> edge_ends;  // source edge-ends involved
};

struct LocalIsometryReport {
  bool ok = true;
  std::vector<LinkFailure> failures;
};

/// Link maps must be injective and full (edges and triangles).
LocalIsometryReport check_local_isometry(const CubicalMap& f);

/// All isomorphisms a -> b (up to `limit`), in deterministic search order.
std::vector<CubicalMap> find_isomorphisms(const ComplexPtr& a, const ComplexPtr& b, std::size_t limit = 1);

/// Map that may send an edge to a vertex (nullopt). Used for retractions,
/// which collapse the interval direction of thickened edge spaces.
struct CollapsingMap {
  ComplexPtr source;
  ComplexPtr target;
  std::vector<VertexId> vertex_map;
  std::vector<std::optional<DirectedEdge>> edge_map;

  std::optional<DirectedEdge> edge(DirectedEdge d) const {
    const auto img = edge_map.at(d.edge);
    if (!img) return std::nullopt;
    return d.forward ? *img : img->reversed();
  }
};

}  // namespace cubex
