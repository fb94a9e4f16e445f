#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubex/complex.hpp"

namespace cubex {

using HyperplaneId = std::size_t;

struct Hyperplane {
  HyperplaneId id = 0;
  std::vector<EdgeId> edges;                               // sorted
  std::vector<std::vector<DirectedEdge>> directed_classes;  // one or two, each sorted
  bool two_sided = true;
};

/// Parallelism classes of edges and directed edges.
struct HyperplaneStructure {
  std::vector<Hyperplane> hyperplanes;  // ordered by smallest dual edge
  std::vector<HyperplaneId> of_edge;
  std::vector<std::size_t> directed_class;  // indexed by DirectedEdge::index()

  HyperplaneId dual(DirectedEdge d) const { return of_edge.at(d.edge); }
  bool parallel(DirectedEdge a, DirectedEdge b) const {
    return directed_class.at(a.index()) == directed_class.at(b.index());
  }
};

/// Closure of elementary parallelism over all squares: bottom~top and
/// left~right, as undirected edges and as directed edges.
HyperplaneStructure compute_hyperplanes(const CubeComplex& x);

/// How direct self-osculation is read. `DirectedClass` additionally requires
/// the two edge-ends to lie in the same directed parallelism class;
/// `Literal` only requires them to be distinct.
enum class OsculationRule { DirectedClass, Literal };

/// Two edge-ends at a vertex; `first` is dual to the first hyperplane named
/// by whatever record holds the witness.
struct EdgeEndPair {
  VertexId vertex = 0;
  DirectedEdge first, second;
  bool operator==(const EdgeEndPair&) const = default;
};

struct SelfCrossing {
  HyperplaneId hyperplane;
  EdgeEndPair at;
};

struct DirectSelfOsculation {
  HyperplaneId hyperplane;
  EdgeEndPair at;
};

struct InterOsculation {
  HyperplaneId first, second;  // first < second
  EdgeEndPair crossing;        // consecutive in a square
  EdgeEndPair osculation;      // consecutive in no square
};

struct PathologyReport {
  std::vector<SelfCrossing> self_crossings;
  std::vector<HyperplaneId> one_sided;
  std::vector<DirectSelfOsculation> direct_self_osculations;
  std::vector<InterOsculation> inter_osculations;
  /// Distinct hyperplane pairs that cross (first < second).
  std::vector<std::pair<HyperplaneId, HyperplaneId>> crossing_pairs;

  bool clean() const {
    return self_crossings.empty() && one_sided.empty() && direct_self_osculations.empty() && inter_osculations.empty();
  }
};

PathologyReport detect_pathologies(const CubeComplex& x, const HyperplaneStructure& h,
                                   OsculationRule rule = OsculationRule::DirectedClass);

struct SpecialVerdict {
  bool special = true;
  std::string witness;  // first witness in deterministic order, empty when special
  PathologyReport report;
};

SpecialVerdict check_special(const CubeComplex& x, OsculationRule rule = OsculationRule::DirectedClass);

/// Text form of the first pathology (empty string for a clean report).
std::string first_witness(const CubeComplex& x, const PathologyReport& r);

struct OsculationFinding {
  HyperplaneId hyperplane = 0;
  std::optional<EdgeId> crossing_edge;
  std::vector<std::pair<VertexId, DirectedEdge>> osculations;

  bool inter_osculates() const { return crossing_edge.has_value() && !osculations.empty(); }
};

/// One finding per hyperplane of x. Throws Error unless y is face-closed.
std::vector<OsculationFinding> subcomplex_osculation(const CubeComplex& x, const HyperplaneStructure& h,
                                                     const Subcomplex& y);

}  // namespace cubex
