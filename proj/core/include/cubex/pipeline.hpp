#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cubex/covers.hpp"
#include "cubex/graph_of_complexes.hpp"

namespace cubex {

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);
/// Hash of the canonical text of a graph of complexes.
std::uint64_t input_hash(const GraphOfComplexes& g);

/// f_e = psi_v^-1 psi_iota(e) phi_e^- into the base vertex space, checked
/// against the phi^+ side and for local isometry.
std::vector<CubicalMap> derive_edge_immersions(const GraphOfComplexes& g, const ConstantStructure& cs,
                                               std::size_t base = 0);

struct ElevationReport {
  std::size_t edge = 0;
  std::size_t degree = 1;
  bool embedded = true;
  bool inter_osculates = false;
};

struct GoodCoverSearchResult {
  std::optional<CoveringSpace> cover;
  std::vector<ElevationReport> elevations;  // for the accepted cover
  std::size_t candidates_tried = 0;
  bool budget_exhausted = false;
};

/// Regular covers of x (the common target of fs) in increasing degree up to
/// `max_degree`; accepts the first that is special and in which every
/// elevation of every f is embedded and inter-osculation-free.
GoodCoverSearchResult find_good_vertex_cover(const ComplexPtr& x, const std::vector<CubicalMap>& fs, std::size_t max_degree);

struct Budgets {
  std::size_t vertex_degree = 8;
  std::size_t gamma_degree = 64;
};

struct Certificate {
  std::uint64_t input_hash = 0;
  std::size_t gamma_degree = 1;
  std::vector<Permutation> gamma_perms;  // per graph edge
  std::size_t base = 0;                  // vertex of the trivialized graph
  std::vector<std::string> voltage_lines;  // cover of the base vertex space
  std::size_t vertex_degree = 1;
  std::size_t vertices = 0, edges = 0, squares = 0, cubes = 0;
  std::vector<std::string> transcript;
};

std::string write_certificate(const Certificate& c, const GraphOfComplexes& g);
/// Throws Error on malformed text.
Certificate parse_certificate(const std::string& text, const GraphOfComplexes& g);

struct Inconclusive {
  std::string stage;
  std::string reason;
  std::vector<std::string> transcript;
};

struct SpecializeResult {
  std::variant<Certificate, Inconclusive> outcome;
  std::optional<ComplexPtr> final_complex;  // set when a certificate was produced

  bool ok() const { return std::holds_alternative<Certificate>(outcome); }
  const Certificate& certificate() const { return std::get<Certificate>(outcome); }
  const Inconclusive& inconclusive() const { return std::get<Inconclusive>(outcome); }
};

/// Finite special cover of the total space. Throws InternalError when the
/// corollary hypotheses pass but the direct scan of the final complex does not.
SpecializeResult specialize(const GraphOfComplexes& g, const Budgets& budgets = {});

/// Cover of the trivialized total space pulled back from a cover of the
/// base vertex space through the retraction, plus the data it was built from.
struct FinalCover {
  Trivialization trivial;
  ConstantStructure constant;
  TotalSpace total;
  Retraction retraction;
  CoveringSpace cover;
};

/// Rebuilds the final cover from a graph-cover and a vertex-space cover.
FinalCover assemble_final_cover(const GraphOfComplexes& g, const LocallyConstantStructure& lc, std::size_t gamma_degree,
                                const std::vector<Permutation>& gamma_perms, std::size_t base,
                                const VoltageAssignment& vertex_cover);

struct VerifyResult {
  bool ok = false;
  std::string reason;
};

VerifyResult verify_certificate(const std::string& text, const GraphOfComplexes& g);

}  // namespace cubex
