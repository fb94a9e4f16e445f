#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubex/complex.hpp"
#include "cubex/cubical_map.hpp"
#include "cubex/hyperplanes.hpp"
#include "cubex/permutation.hpp"
#include "cubex/text_io.hpp"

namespace cubex {

/// Raised when a check that holds by theory fails; indicates a bug rather
/// than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

struct GraphEdge {
  std::string name;
  std::size_t from = 0;  // iota(e)
  std::size_t to = 0;    // tau(e)
};

/// Isomorphisms theta_e : X_iota(e) -> X_tau(e) with theta_e o phi_e^- = phi_e^+.
struct LocallyConstantStructure {
  std::vector<CubicalMap> theta;
};

/// Isomorphisms psi_u : X_u -> X_V with psi_iota o phi^- = psi_tau o phi^+.
struct ConstantStructure {
  ComplexPtr space;
  std::vector<CubicalMap> psi;
};

struct GraphOfComplexes {
  std::string name;
  std::vector<std::string> vertex_names;
  std::vector<ComplexPtr> vertex_spaces;
  std::vector<GraphEdge> edges;
  std::vector<ComplexPtr> edge_spaces;
  std::vector<CubicalMap> minus;  // X_e -> X_iota(e)
  std::vector<CubicalMap> plus;   // X_e -> X_tau(e)
  std::optional<LocallyConstantStructure> locally_constant;
  std::optional<ConstantStructure> constant;

  std::size_t vertex_count() const { return vertex_spaces.size(); }
  std::size_t edge_count() const { return edges.size(); }
  std::optional<std::size_t> find_vertex(const std::string& name) const;
};

/// Checks spaces (nonempty, connected, NPC; edge spaces of dimension <= 2),
/// attaching maps (local isometries with the right ends), connectivity of
/// the underlying graph, and any theta / psi data. Throws Error with a
/// witness.
void validate_goc(const GraphOfComplexes& g);

/// Resolves a declaration against the workspace and validates it.
GraphOfComplexes build_goc(const Workspace& ws, const GocDecl& decl);
/// The single graph declared in `path` (or the one named `name`).
GraphOfComplexes load_goc(const std::string& path, const std::string& name = {});

/// Self-contained text (complexes, maps, goc block) that reloads to the same datum.
std::string write_goc(const GraphOfComplexes& g);

/// Two copies of x glued along f; theta is the identity.
GraphOfComplexes make_double(const CubicalMap& f, const std::string& name = "double");

/// Theta data as declared, or identities on edges where both ends carry the
/// same space and the same attaching map. Throws Error otherwise.
LocallyConstantStructure locally_constant_structure(const GraphOfComplexes& g);

struct CellOrigin {
  bool thickened = false;   // false: cell of a vertex space
  std::size_t owner = 0;    // vertex u or edge e of the graph
  std::uint32_t cell = 0;   // cell of X_u, or cell of X_e crossed with the interval
};

struct TotalSpace {
  ComplexPtr complex;
  std::vector<CellOrigin> vertex_origin, edge_origin, square_origin, cube_origin;
  std::vector<std::uint32_t> vertex_offset, edge_offset, square_offset, cube_offset;  // per graph vertex
  std::vector<std::vector<EdgeId>> horizontal;        // [e][vertex of X_e]
  std::vector<std::vector<SquareId>> vertical_squares;  // [e][edge of X_e]
  std::vector<std::vector<Cube3Id>> prisms;            // [e][square of X_e]

  /// X_u -> total space.
  CubicalMap inclusion(const GraphOfComplexes& g, std::size_t u) const;
  bool is_horizontal(EdgeId e) const { return edge_origin.at(e).thickened; }
};

/// Quotient of the vertex spaces and the thickened edge spaces; throws
/// Error if the result fails the link condition.
TotalSpace total_space(const GraphOfComplexes& g);

struct HyperplaneClassification {
  HyperplaneStructure hyperplanes;
  PathologyReport pathologies;
  std::vector<std::optional<std::size_t>> vertical_of;  // per hyperplane: graph edge
  std::vector<HyperplaneId> vertical;                  // per graph edge
};

/// Labels hyperplanes vertical or not. Throws InternalError if a vertical
/// hyperplane crosses itself, is 1-sided, or an edge space does not give
/// exactly one vertical hyperplane.
HyperplaneClassification classify_hyperplanes(const GraphOfComplexes& g, const TotalSpace& t);

struct MonodromyResult {
  std::size_t base = 0;
  std::vector<bool> tree_edge;
  std::vector<CubicalMap> transport;    // A_u : X_u -> X_base along the tree
  std::vector<std::size_t> generator_edges;
  std::vector<CubicalMap> generators;   // automorphism of X_base per non-tree edge
  std::vector<CubicalMap> group;        // identity first
  std::vector<std::size_t> element_of_edge;  // index into group, identity on tree edges
  bool trivial() const { return group.size() == 1; }
};

/// Throws Error if some theta_e is not an isomorphism compatible with the
/// attaching maps, or the group exceeds `cap` elements.
MonodromyResult compute_monodromy(const GraphOfComplexes& g, const LocallyConstantStructure& lc, std::size_t base = 0,
                                  std::size_t cap = 4096);

/// psi_u = transport to the base. Throws Error unless monodromy is trivial
/// and compatibility holds on every edge.
ConstantStructure make_constant(const GraphOfComplexes& g, const MonodromyResult& m);

/// Checks psi data against the attaching maps.
void check_constant(const GraphOfComplexes& g, const ConstantStructure& cs);

struct Trivialization {
  GraphOfComplexes graph;  // cover of the underlying graph with pulled-back spaces
  LocallyConstantStructure locally_constant;
  std::size_t degree = 1;
  std::vector<std::size_t> vertex_projection;  // graph vertex of the cover -> original vertex
  std::vector<std::size_t> edge_projection;
  std::vector<Permutation> sheet_perms;  // per original edge: sheet at iota -> sheet at tau
};

/// Cover of the underlying graph with n sheets: edge (e, i) runs from
/// (iota(e), i) to (tau(e), perms[e][i]); spaces, attaching maps and theta
/// are pulled back unchanged. Throws Error if the result is invalid.
Trivialization lift_graph(const GraphOfComplexes& g, const LocallyConstantStructure& lc, std::size_t n,
                          const std::vector<Permutation>& perms);

/// Regular cover of the underlying graph for the kernel of the monodromy.
Trivialization trivialize_monodromy(const GraphOfComplexes& g, const LocallyConstantStructure& lc,
                                    const MonodromyResult& m);

struct Retraction {
  std::size_t base = 0;
  CollapsingMap map;                           // total space -> X_base
  std::vector<std::optional<SquareId>> square_map;  // nullopt: square collapses to an edge
  CubicalMap section;                          // X_base -> total space
};

struct RetractionCheck {
  bool section_ok = true;
  bool restrictions_ok = true;
  bool parallel_ok = true;
  std::size_t pairs_checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return section_ok && restrictions_ok && parallel_ok; }
};

/// r = psi_base^-1 psi_u on X_u; thickened cells of e go through phi_e^-.
/// Throws Error if the formula is not cellular.
Retraction build_retraction(const GraphOfComplexes& g, const ConstantStructure& cs, const TotalSpace& t,
                            std::size_t base = 0);

/// r o section = id, restrictions to vertex spaces are isomorphisms, and
/// every pair of parallel directed edges with edge images maps to a
/// parallel pair.
RetractionCheck check_retraction(const GraphOfComplexes& g, const TotalSpace& t, const Retraction& r);

struct CorollaryFailure {
  std::size_t edge = 0;
  int clause = 0;  // 1: not an embedding, 2: image inter-osculates
  std::string witness;
};

struct CorollaryReport {
  std::vector<CorollaryFailure> failures;
  bool pass() const { return failures.empty(); }
};

CorollaryReport check_corollary_hypotheses(const GraphOfComplexes& g);

}  // namespace cubex
