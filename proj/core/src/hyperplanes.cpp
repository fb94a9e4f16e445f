#include "cubex/hyperplanes.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cubex/union_find.hpp"

namespace cubex {

HyperplaneStructure compute_hyperplanes(const CubeComplex& x) {
  const std::size_t n = x.edge_count();
  UnionFind edges(n);
  UnionFind directed(2 * n);
  auto join_directed = [&](DirectedEdge a, DirectedEdge b) {
    directed.unite(a.index(), b.index());
    directed.unite(a.reversed().index(), b.reversed().index());
  };
  for (const Square& s : x.squares()) {
    edges.unite(s.bottom.edge, s.top.edge);
    edges.unite(s.left.edge, s.right.edge);
    join_directed(s.bottom, s.top);
    join_directed(s.left, s.right);
  }

  HyperplaneStructure out;
  std::size_t count = 0;
  const auto labels = edges.labels(&count);
  out.of_edge.assign(labels.begin(), labels.end());
  out.directed_class = directed.labels();
  out.hyperplanes.resize(count);
  for (HyperplaneId i = 0; i < count; ++i) out.hyperplanes[i].id = i;
  for (EdgeId e = 0; e < n; ++e) out.hyperplanes[out.of_edge[e]].edges.push_back(e);

  for (auto& h : out.hyperplanes) {
    std::map<std::size_t, std::vector<DirectedEdge>> classes;
    for (EdgeId e : h.edges) {
      for (bool fwd : {true, false}) {
        const DirectedEdge d{e, fwd};
        classes[out.directed_class[d.index()]].push_back(d);
      }
    }
    for (auto& [label, members] : classes) {
      std::sort(members.begin(), members.end());
      h.directed_classes.push_back(std::move(members));
    }
    std::sort(h.directed_classes.begin(), h.directed_classes.end());
    const DirectedEdge first{h.edges.front(), true};
    h.two_sided = out.directed_class[first.index()] != out.directed_class[first.reversed().index()];
  }
  return out;
}

namespace {

auto pair_less = [](const EdgeEndPair& a, const EdgeEndPair& b) {
  if (a.vertex != b.vertex) return a.vertex < b.vertex;
  if (a.first != b.first) return a.first < b.first;
  return a.second < b.second;
};

}  // namespace

PathologyReport detect_pathologies(const CubeComplex& x, const HyperplaneStructure& h, OsculationRule rule) {
  PathologyReport r;
  for (const auto& hp : h.hyperplanes) {
    if (!hp.two_sided) r.one_sided.push_back(hp.id);
  }

  std::map<std::pair<HyperplaneId, HyperplaneId>, EdgeEndPair> crossing, osculating;
  for (VertexId v = 0; v < x.vertex_count(); ++v) {
    const auto& ends = x.edge_ends(v);
    for (std::size_t i = 0; i < ends.size(); ++i) {
      for (std::size_t j = i + 1; j < ends.size(); ++j) {
        DirectedEdge a = ends[i];
        DirectedEdge b = ends[j];
        HyperplaneId ha = h.dual(a);
        HyperplaneId hb = h.dual(b);
        const bool consecutive = x.consecutive(a, b);
        if (ha == hb) {
          if (consecutive) {
            r.self_crossings.push_back({ha, {v, a, b}});
          } else if (rule == OsculationRule::Literal || h.parallel(a, b)) {
            r.direct_self_osculations.push_back({ha, {v, a, b}});
          }
          continue;
        }
        if (ha > hb) {
          std::swap(ha, hb);
          std::swap(a, b);
        }
        auto& table = consecutive ? crossing : osculating;
        table.try_emplace({ha, hb}, EdgeEndPair{v, a, b});
      }
    }
  }

  for (const auto& [key, witness] : crossing) {
    r.crossing_pairs.push_back(key);
    auto it = osculating.find(key);
    if (it != osculating.end()) r.inter_osculations.push_back({key.first, key.second, witness, it->second});
  }

  std::sort(r.self_crossings.begin(), r.self_crossings.end(), [](const auto& a, const auto& b) {
    return a.hyperplane != b.hyperplane ? a.hyperplane < b.hyperplane : pair_less(a.at, b.at);
  });
  std::sort(r.direct_self_osculations.begin(), r.direct_self_osculations.end(), [](const auto& a, const auto& b) {
    return a.hyperplane != b.hyperplane ? a.hyperplane < b.hyperplane : pair_less(a.at, b.at);
  });
  return r;
}

namespace {

std::string show(const CubeComplex& x, const EdgeEndPair& p) {
  return "(" + x.vertex_name(p.vertex) + "; " + x.token(p.first) + ", " + x.token(p.second) + ")";
}

}  // namespace

std::string first_witness(const CubeComplex& x, const PathologyReport& r) {
  std::ostringstream out;
  if (!r.self_crossings.empty()) {
    const auto& w = r.self_crossings.front();
    out << "self-crossing: hyperplane H" << w.hyperplane << " crosses itself at " << show(x, w.at);
  } else if (!r.one_sided.empty()) {
    out << "one-sided: hyperplane H" << r.one_sided.front() << " is not 2-sided";
  } else if (!r.direct_self_osculations.empty()) {
    const auto& w = r.direct_self_osculations.front();
    out << "direct-self-osculation: hyperplane H" << w.hyperplane << " directly self-osculates at " << show(x, w.at);
  } else if (!r.inter_osculations.empty()) {
    const auto& w = r.inter_osculations.front();
    out << "inter-osculation: hyperplanes H" << w.first << " and H" << w.second << " cross at " << show(x, w.crossing)
        << " and osculate at " << show(x, w.osculation);
  }
  return out.str();
}

SpecialVerdict check_special(const CubeComplex& x, OsculationRule rule) {
  SpecialVerdict v;
  v.report = detect_pathologies(x, compute_hyperplanes(x), rule);
  v.special = v.report.clean();
  v.witness = first_witness(x, v.report);
  return v;
}

std::vector<OsculationFinding> subcomplex_osculation(const CubeComplex& x, const HyperplaneStructure& h,
                                                     const Subcomplex& y) {
  if (!y.is_closed(x)) throw Error("subcomplex is not closed under taking faces");
  std::vector<OsculationFinding> out(h.hyperplanes.size());
  for (HyperplaneId i = 0; i < out.size(); ++i) out[i].hyperplane = i;
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    if (y.edges[e] && !out[h.of_edge[e]].crossing_edge) out[h.of_edge[e]].crossing_edge = e;
  }
  for (VertexId v = 0; v < x.vertex_count(); ++v) {
    if (!y.vertices[v]) continue;
    for (const auto& d : x.edge_ends(v)) {
      if (!y.edges[d.edge]) out[h.dual(d)].osculations.emplace_back(v, d);
    }
  }
  return out;
}

}  // namespace cubex
