#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cubex/complex.hpp"
#include "cubex/cubical_map.hpp"

namespace cubex {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses "EDGEID+" / "EDGEID-" against x.
DirectedEdge parse_edge_token(const CubeComplex& x, const std::string& token);

/// Parses the first complex in a .cux text. Lines before any `complex`
/// header belong to an unnamed complex.
CubeComplex parse_complex(std::string_view text);

std::string write_complex(const CubeComplex& x);

/// `map NAME SRC DST` block; SRC and DST name the two complexes.
std::string write_map(const CubicalMap& f);

/// Raw graph-of-complexes declaration, resolved by the graph module.
struct GocDecl {
  struct VertexDecl {
    std::string name, complex;
  };
  struct EdgeDecl {
    std::string name, from, to, complex, minus, plus;
  };
  std::string name;
  std::vector<VertexDecl> vertices;
  std::vector<EdgeDecl> edges;
  std::map<std::string, std::string> theta;  // edge -> map name
  std::map<std::string, std::string> psi;    // vertex -> map name
  std::string constant;                      // constant complex name, may be empty
  std::size_t line = 0;
};

/// Named complexes, maps and graph declarations loaded from text files.
/// Map cross-references are resolved once loading finishes; `id` names the
/// identity map wherever a map name is expected.
class Workspace {
 public:
  /// Loads `text`. `load PATH` lines are resolved relative to base_dir.
  void load_text(std::string_view text, const std::filesystem::path& base_dir = {});
  void load_file(const std::filesystem::path& path);

  const std::map<std::string, ComplexPtr>& complexes() const { return complexes_; }
  const std::map<std::string, CubicalMap>& maps() const { return maps_; }
  const std::vector<GocDecl>& gocs() const { return gocs_; }
  /// Complexes in file order.
  const std::vector<std::string>& complex_order() const { return complex_order_; }

  ComplexPtr complex(const std::string& name) const;
  const CubicalMap& map(const std::string& name) const;
  /// Named map, or the identity when `name` is "id" (source must equal target).
  CubicalMap map_or_identity(const std::string& name, const ComplexPtr& source, const ComplexPtr& target) const;

  void add_complex(ComplexPtr x);
  void add_map(CubicalMap f);

 private:
  struct RawMap {
    std::string name, source, target;
    std::vector<std::pair<std::string, std::string>> vertices;
    std::vector<std::pair<std::string, std::string>> edges;
    std::size_t line = 0;
  };
  void resolve_maps(std::vector<RawMap>& raw);

  std::map<std::string, ComplexPtr> complexes_;
  std::vector<std::string> complex_order_;
  std::map<std::string, CubicalMap> maps_;
  std::vector<GocDecl> gocs_;
};

}  // namespace cubex
