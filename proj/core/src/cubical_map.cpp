#include "cubex/cubical_map.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace cubex {

namespace {

using Triple = std::array<DirectedEdge, 3>;

Triple sorted(Triple t) {
  std::sort(t.begin(), t.end());
  return t;
}

std::map<std::pair<VertexId, Triple>, Cube3Id> cube_corner_index(const CubeComplex& x) {
  std::map<std::pair<VertexId, Triple>, Cube3Id> index;
  for (Cube3Id c = 0; c < x.cube_count(); ++c) {
    for (const auto& [v, ends] : x.cube_corner_triples(c)) index.emplace(std::make_pair(v, sorted(ends)), c);
  }
  return index;
}

}  // namespace

CubicalMap::CubicalMap(ComplexPtr source, ComplexPtr target, std::vector<VertexId> vertex_map,
                       std::vector<DirectedEdge> edge_map, std::string name)
    : source_(std::move(source)),
      target_(std::move(target)),
      vertex_map_(std::move(vertex_map)),
      edge_map_(std::move(edge_map)),
      name_(std::move(name)) {
  const CubeComplex& src = *source_;
  const CubeComplex& dst = *target_;
  const std::string who = name_.empty() ? std::string("map") : "map '" + name_ + "'";
  if (vertex_map_.size() != src.vertex_count()) throw Error(who + ": vertex map has wrong size");
  if (edge_map_.size() != src.edge_count()) throw Error(who + ": edge map has wrong size");
  for (VertexId v : vertex_map_) {
    if (v >= dst.vertex_count()) throw Error(who + ": vertex image out of range");
  }
  for (EdgeId e = 0; e < src.edge_count(); ++e) {
    const DirectedEdge img = edge_map_[e];
    if (img.edge >= dst.edge_count()) throw Error(who + ": edge image out of range");
    if (dst.initial(img) != vertex_map_[src.edge(e).initial] || dst.terminal(img) != vertex_map_[src.edge(e).terminal]) {
      throw Error(who + ": endpoints of edge '" + src.edge_name(e) + "' do not commute with the map");
    }
  }
  square_map_.resize(src.square_count());
  for (SquareId s = 0; s < src.square_count(); ++s) {
    const Square& q = src.square(s);
    const Square img{edge(q.bottom), edge(q.right), edge(q.top), edge(q.left)};
    auto hit = dst.find_square_matching(img);
    if (!hit) throw Error(who + ": square '" + src.square_name(s) + "' has no image square");
    square_map_[s] = hit->first;
  }
  if (src.cube_count() > 0) {
    const auto index = cube_corner_index(dst);
    cube_map_.resize(src.cube_count());
    for (Cube3Id c = 0; c < src.cube_count(); ++c) {
      const auto [v, ends] = src.cube_corner_triples(c)[0];
      const Triple img{edge(ends[0]), edge(ends[1]), edge(ends[2])};
      auto it = index.find({vertex_map_[v], sorted(img)});
      if (it == index.end()) throw Error(who + ": cube3 '" + src.cube_name(c) + "' has no image cube");
      cube_map_[c] = it->second;
    }
  }
}

CubicalMap CubicalMap::identity(ComplexPtr x) {
  std::vector<VertexId> vm(x->vertex_count());
  for (VertexId v = 0; v < vm.size(); ++v) vm[v] = v;
  std::vector<DirectedEdge> em(x->edge_count());
  for (EdgeId e = 0; e < em.size(); ++e) em[e] = {e, true};
  return CubicalMap(x, x, std::move(vm), std::move(em), "id");
}

bool CubicalMap::operator==(const CubicalMap& o) const {
  return source_ == o.source_ && target_ == o.target_ && vertex_map_ == o.vertex_map_ && edge_map_ == o.edge_map_;
}

CubicalMap compose(const CubicalMap& f, const CubicalMap& g) {
  if (f.target_ptr() != g.source_ptr()) throw Error("compose: incompatible complexes");
  std::vector<VertexId> vm(f.source().vertex_count());
  for (VertexId v = 0; v < vm.size(); ++v) vm[v] = g.vertex(f.vertex(v));
  std::vector<DirectedEdge> em(f.source().edge_count());
  for (EdgeId e = 0; e < em.size(); ++e) em[e] = g.edge(f.edge({e, true}));
  return CubicalMap(f.source_ptr(), g.target_ptr(), std::move(vm), std::move(em));
}

namespace {

template <typename T>
bool is_bijection(const std::vector<T>& images, std::size_t target_size) {
  if (images.size() != target_size) return false;
  std::vector<bool> hit(target_size, false);
  for (const auto& i : images) {
    if (hit[i]) return false;
    hit[i] = true;
  }
  return true;
}

}  // namespace

std::optional<CubicalMap> inverse(const CubicalMap& f) {
  const CubeComplex& src = f.source();
  const CubeComplex& dst = f.target();
  if (!is_bijection(f.vertex_map(), dst.vertex_count())) return std::nullopt;
  std::vector<EdgeId> edge_images;
  edge_images.reserve(src.edge_count());
  for (const auto& d : f.edge_map()) edge_images.push_back(d.edge);
  if (!is_bijection(edge_images, dst.edge_count())) return std::nullopt;
  if (!is_bijection(f.square_map(), dst.square_count())) return std::nullopt;
  if (src.cube_count() != dst.cube_count()) return std::nullopt;

  std::vector<VertexId> vm(dst.vertex_count());
  for (VertexId v = 0; v < src.vertex_count(); ++v) vm[f.vertex(v)] = v;
  std::vector<DirectedEdge> em(dst.edge_count());
  for (EdgeId e = 0; e < src.edge_count(); ++e) {
    const DirectedEdge img = f.edge({e, true});
    em[img.edge] = {e, img.forward};
  }
  try {
    CubicalMap inv(f.target_ptr(), f.source_ptr(), std::move(vm), std::move(em));
    if (!is_bijection(inv.square_map(), src.square_count())) return std::nullopt;
    return inv;
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool is_isomorphism(const CubicalMap& f) { return inverse(f).has_value(); }

bool is_embedding(const CubicalMap& f) {
  std::set<VertexId> vs(f.vertex_map().begin(), f.vertex_map().end());
  if (vs.size() != f.vertex_map().size()) return false;
  std::set<EdgeId> es;
  for (const auto& d : f.edge_map()) es.insert(d.edge);
  if (es.size() != f.edge_map().size()) return false;
  std::set<SquareId> ss(f.square_map().begin(), f.square_map().end());
  if (ss.size() != f.square_map().size()) return false;
  std::set<Cube3Id> cs;
  for (Cube3Id c = 0; c < f.source().cube_count(); ++c) cs.insert(f.cube(c));
  return cs.size() == f.source().cube_count();
}

Subcomplex image(const CubicalMap& f) {
  Subcomplex y = Subcomplex::empty(f.target());
  for (VertexId v : f.vertex_map()) y.vertices[v] = true;
  for (const auto& d : f.edge_map()) y.edges[d.edge] = true;
  for (SquareId s : f.square_map()) y.squares[s] = true;
  for (Cube3Id c = 0; c < f.source().cube_count(); ++c) y.cubes[f.cube(c)] = true;
  return y;
}

LocalIsometryReport check_local_isometry(const CubicalMap& f) {
  LocalIsometryReport report;
  const CubeComplex& src = f.source();
  const CubeComplex& dst = f.target();

  std::vector<std::set<Triple>> src_triangles(src.vertex_count());
  std::vector<std::set<Triple>> dst_triangles(dst.vertex_count());
  for (Cube3Id c = 0; c < src.cube_count(); ++c) {
    for (const auto& [v, ends] : src.cube_corner_triples(c)) src_triangles[v].insert(sorted(ends));
  }
  for (Cube3Id c = 0; c < dst.cube_count(); ++c) {
    for (const auto& [v, ends] : dst.cube_corner_triples(c)) dst_triangles[v].insert(sorted(ends));
  }

  for (VertexId v = 0; v < src.vertex_count(); ++v) {
    const auto& ends = src.edge_ends(v);
    const VertexId w = f.vertex(v);
    std::vector<DirectedEdge> imgs;
    imgs.reserve(ends.size());
    for (const auto& d : ends) imgs.push_back(f.edge(d));

    for (std::size_t i = 0; i < ends.size(); ++i) {
      for (std::size_t j = i + 1; j < ends.size(); ++j) {
        if (imgs[i] == imgs[j]) {
          report.failures.push_back({LinkFailure::Kind::NotInjective, v, {ends[i], ends[j]}});
        } else if (dst.consecutive(imgs[i], imgs[j]) && !src.consecutive(ends[i], ends[j])) {
          report.failures.push_back({LinkFailure::Kind::NotFull, v, {ends[i], ends[j]}});
        }
      }
    }
    if (dst_triangles[w].empty()) continue;
    for (std::size_t i = 0; i < ends.size(); ++i) {
      for (std::size_t j = i + 1; j < ends.size(); ++j) {
        for (std::size_t k = j + 1; k < ends.size(); ++k) {
          if (dst_triangles[w].count(sorted({imgs[i], imgs[j], imgs[k]})) != 0 &&
              src_triangles[v].count(sorted({ends[i], ends[j], ends[k]})) == 0) {
            report.failures.push_back({LinkFailure::Kind::NotFull, v, {ends[i], ends[j], ends[k]}});
          }
        }
      }
    }
  }
  report.ok = report.failures.empty();
  return report;
}

std::vector<CubicalMap> find_isomorphisms(const ComplexPtr& a, const ComplexPtr& b, std::size_t limit) {
  std::vector<CubicalMap> found;
  if (a->vertex_count() != b->vertex_count() || a->edge_count() != b->edge_count() ||
      a->square_count() != b->square_count() || a->cube_count() != b->cube_count() || limit == 0) {
    return found;
  }

  // Search schedule: a component root, then its edges in breadth-first order.
  struct Step {
    bool is_vertex;
    std::uint32_t id;
  };
  std::vector<Step> steps;
  {
    std::vector<bool> seen_v(a->vertex_count(), false);
    std::vector<bool> seen_e(a->edge_count(), false);
    for (VertexId root = 0; root < a->vertex_count(); ++root) {
      if (seen_v[root]) continue;
      seen_v[root] = true;
      steps.push_back({true, root});
      std::vector<VertexId> queue{root};
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        for (const auto& d : a->edge_ends(queue[qi])) {
          if (seen_e[d.edge]) continue;
          seen_e[d.edge] = true;
          steps.push_back({false, d.edge});
          const VertexId other = a->terminal(d);
          if (!seen_v[other]) {
            seen_v[other] = true;
            queue.push_back(other);
          }
        }
      }
    }
  }

  constexpr VertexId kUnset = static_cast<VertexId>(-1);
  std::vector<VertexId> vmap(a->vertex_count(), kUnset);
  std::vector<DirectedEdge> emap(a->edge_count());
  std::vector<bool> used_v(b->vertex_count(), false);
  std::vector<bool> used_e(b->edge_count(), false);

  auto degree_ok = [&](VertexId x, VertexId y) { return a->edge_ends(x).size() == b->edge_ends(y).size(); };

  // Squares are checked as soon as their whole boundary is mapped.
  std::vector<std::vector<SquareId>> squares_on(a->edge_count());
  for (SquareId s = 0; s < a->square_count(); ++s) {
    const Square& q = a->square(s);
    for (const auto& d : {q.bottom, q.right, q.top, q.left}) {
      auto& list = squares_on[d.edge];
      if (list.empty() || list.back() != s) list.push_back(s);
    }
  }
  std::vector<std::vector<std::pair<DirectedEdge, DirectedEdge>>> corners_on(a->edge_count());
  for (const SquareCorner& c : a->square_corners()) {
    corners_on[c.first.edge].push_back({c.first, c.second});
    if (c.second.edge != c.first.edge) corners_on[c.second.edge].push_back({c.first, c.second});
  }
  std::vector<bool> mapped_e(a->edge_count(), false);
  auto squares_ok = [&](EdgeId e) {
    auto img = [&](DirectedEdge d) { return d.forward ? emap[d.edge] : emap[d.edge].reversed(); };
    for (const auto& [p, q] : corners_on[e]) {
      if (mapped_e[p.edge] && mapped_e[q.edge] && !b->consecutive(img(p), img(q))) return false;
    }
    for (SquareId s : squares_on[e]) {
      const Square& q = a->square(s);
      if (!mapped_e[q.bottom.edge] || !mapped_e[q.right.edge] || !mapped_e[q.top.edge] || !mapped_e[q.left.edge]) continue;
      if (!b->find_square_matching({img(q.bottom), img(q.right), img(q.top), img(q.left)})) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> search = [&](std::size_t pos) {
    if (found.size() >= limit) return;
    if (pos == steps.size()) {
      try {
        CubicalMap f(a, b, vmap, emap);
        if (is_isomorphism(f)) found.push_back(std::move(f));
      } catch (const Error&) {
      }
      return;
    }
    const Step st = steps[pos];
    if (st.is_vertex) {
      for (VertexId y = 0; y < b->vertex_count(); ++y) {
        if (used_v[y] || !degree_ok(st.id, y)) continue;
        vmap[st.id] = y;
        used_v[y] = true;
        search(pos + 1);
        used_v[y] = false;
        vmap[st.id] = kUnset;
      }
      return;
    }
    const Edge& e = a->edge(st.id);
    const VertexId from = vmap[e.initial];
    const VertexId to = vmap[e.terminal];
    // One endpoint is already mapped by construction of the schedule.
    const bool anchor_initial = from != kUnset;
    const VertexId anchor = anchor_initial ? from : to;
    for (const auto& d : b->edge_ends(anchor)) {
      if (used_e[d.edge]) continue;
      // d leaves the anchor; the image of e+ is d (anchored at initial) or d reversed.
      const DirectedEdge img = anchor_initial ? d : d.reversed();
      const VertexId other_img = b->terminal(d);
      const VertexId other = anchor_initial ? e.terminal : e.initial;
      bool assigned = false;
      if (vmap[other] == kUnset) {
        if (used_v[other_img] || !degree_ok(other, other_img)) continue;
        vmap[other] = other_img;
        used_v[other_img] = true;
        assigned = true;
      } else if (vmap[other] != other_img) {
        continue;
      }
      emap[st.id] = img;
      mapped_e[st.id] = true;
      if (squares_ok(st.id)) {
        used_e[d.edge] = true;
        search(pos + 1);
        used_e[d.edge] = false;
      }
      mapped_e[st.id] = false;
      if (assigned) {
        used_v[other_img] = false;
        vmap[other] = kUnset;
      }
    }
  };
  search(0);
  return found;
}

}  // namespace cubex
