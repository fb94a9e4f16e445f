#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cubex/complex.hpp"
#include "cubex/cubical_map.hpp"
#include "cubex/permutation.hpp"

namespace cubex {

/// Fundamental group presentation read off a breadth-first spanning tree.
/// Generator k is the non-tree edge generators[k]; relator letters are
/// +(k+1) for the generator and -(k+1) for its inverse.
struct Presentation {
  VertexId base = 0;
  std::vector<bool> tree_edge;
  std::vector<std::optional<DirectedEdge>> parent;  // tree edge entering each vertex
  std::vector<EdgeId> generators;
  std::vector<int> generator_of_edge;  // -1 on tree edges
  std::vector<std::vector<int>> relators;

  /// Tree path base -> v as directed edges.
  std::vector<DirectedEdge> path_from_base(const CubeComplex& x, VertexId v) const;
  /// Closed walk at base realizing generator k.
  std::vector<DirectedEdge> generator_loop(const CubeComplex& x, std::size_t k) const;
  std::string relator_text(const CubeComplex& x, std::size_t r) const;
};

/// Throws Error when x is disconnected.
Presentation presentation(const CubeComplex& x, VertexId base = 0);

/// Permutation per edge of the base; traversing edge e forward moves sheet
/// s to perms[e][s].
struct VoltageAssignment {
  std::size_t degree = 1;
  std::vector<Permutation> perms;

  static VoltageAssignment trivial(const CubeComplex& x, std::size_t degree = 1);
  /// Sheet reached from `sheet` by traversing d.
  std::uint32_t move(DirectedEdge d, std::uint32_t sheet) const;
  bool operator==(const VoltageAssignment&) const = default;
};

/// Every square boundary acts trivially on the sheets.
bool satisfies_relators(const CubeComplex& x, const VoltageAssignment& v);
bool is_transitive(const CubeComplex& x, const VoltageAssignment& v);
/// Monodromy permutation of a closed walk given as directed edges.
Permutation walk_permutation(const VoltageAssignment& v, const std::vector<DirectedEdge>& walk);

struct CoveringSpace {
  ComplexPtr base;
  ComplexPtr total;
  CubicalMap projection;
  VoltageAssignment voltages;
  bool regular = false;

  std::size_t degree() const { return voltages.degree; }
  /// Cell numbering of the total space: cell * degree + sheet.
  VertexId lift_vertex(VertexId v, std::uint32_t sheet) const {
    return static_cast<VertexId>(v * voltages.degree + sheet);
  }
};

/// Builds the (possibly disconnected) cover given by the voltages. Cells of
/// the total space are named NAME@SHEET with 1-based sheets. Throws Error if
/// a square does not close up.
CoveringSpace build_cover(const ComplexPtr& base, const VoltageAssignment& v, const std::string& name = {});

/// Checks the projection is a local isometry and cell counts scale by the degree.
bool verify_cover(const CoveringSpace& c);

/// Visits every connected cover of degree 1..max_degree exactly once up to
/// sheet relabeling, as tree-normalized voltages, in deterministic order.
/// The visitor returns false to stop.
void for_each_cover(const CubeComplex& x, std::size_t max_degree,
                    const std::function<bool(const VoltageAssignment&)>& visit);

std::vector<CoveringSpace> enumerate_covers(const ComplexPtr& x, std::size_t max_degree);

/// Cover for the kernel of the voltage action: sheets are the elements of
/// the monodromy group. nullopt when the group order exceeds `cap`.
std::optional<CoveringSpace> regular_closure(const CoveringSpace& c, std::size_t cap = 64);

/// Group generated by the monodromy of loops at vertex 0 has order == degree.
bool is_regular(const CubeComplex& x, const VoltageAssignment& v);

struct Elevation {
  ComplexPtr complex;
  CubicalMap to_cover;   // into the cover's total space
  CubicalMap to_source;  // covering map onto Y
  std::size_t degree = 1;
};

struct FiberProduct {
  CoveringSpace product;  // Y with pulled-back voltages, possibly disconnected
  CubicalMap to_cover;    // product -> cover.total
  std::vector<std::size_t> component_of_vertex;
  std::vector<Elevation> elevations;

  std::size_t component_count() const { return elevations.size(); }
};

/// Voltages on Y pulled back along f.
VoltageAssignment pull_back(const CubicalMap& f, const VoltageAssignment& v);
/// Edges sent to a vertex get the identity permutation.
VoltageAssignment pull_back(const CollapsingMap& f, const VoltageAssignment& v);

/// Throws Error unless f is a local isometry into cover.base.
FiberProduct fiber_product(const CubicalMap& f, const CoveringSpace& cover);

/// Number of orbits of the image of pi_1(Y) on the sheets; Y connected.
std::size_t elevation_count_oracle(const CubicalMap& f, const CoveringSpace& cover);

/// The connected component of `x` containing the given vertices as its own
/// complex, with the inclusion map into x.
CubicalMap extract_component(const ComplexPtr& x, const std::vector<bool>& vertices, const std::string& name);

std::string write_voltages(const CubeComplex& x, const VoltageAssignment& v);
/// Reads `cover DEGREE` followed by `perm EDGEID CYCLES` lines; missing
/// edges get the identity.
VoltageAssignment parse_voltages(const CubeComplex& x, const std::vector<std::string>& lines);

}  // namespace cubex
