#include "cubex/covers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "cubex/union_find.hpp"

namespace cubex {

std::vector<DirectedEdge> Presentation::path_from_base(const CubeComplex& x, VertexId v) const {
  std::vector<DirectedEdge> path;
  while (v != base) {
    const DirectedEdge d = parent.at(v).value();
    path.push_back(d);
    v = x.initial(d);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<DirectedEdge> Presentation::generator_loop(const CubeComplex& x, std::size_t k) const {
  const DirectedEdge e{generators.at(k), true};
  auto walk = path_from_base(x, x.initial(e));
  walk.push_back(e);
  auto back = path_from_base(x, x.terminal(e));
  for (auto it = back.rbegin(); it != back.rend(); ++it) walk.push_back(it->reversed());
  return walk;
}

std::string Presentation::relator_text(const CubeComplex& x, std::size_t r) const {
  std::string out;
  for (int letter : relators.at(r)) {
    if (!out.empty()) out += ' ';
    out += x.edge_name(generators.at(static_cast<std::size_t>(std::abs(letter) - 1)));
    if (letter < 0) out += "^-1";
  }
  return out.empty() ? "1" : out;
}

Presentation presentation(const CubeComplex& x, VertexId base) {
  if (x.vertex_count() == 0) throw Error("presentation of an empty complex");
  if (base >= x.vertex_count()) throw Error("base vertex out of range");
  Presentation p;
  p.base = base;
  p.tree_edge.assign(x.edge_count(), false);
  p.parent.assign(x.vertex_count(), std::nullopt);
  std::vector<bool> seen(x.vertex_count(), false);
  std::deque<VertexId> queue{base};
  seen[base] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (const DirectedEdge& d : x.edge_ends(v)) {
      const VertexId w = x.terminal(d);
      if (seen[w]) continue;
      seen[w] = true;
      ++reached;
      p.tree_edge[d.edge] = true;
      p.parent[w] = d;
      queue.push_back(w);
    }
  }
  if (reached != x.vertex_count()) throw Error("complex '" + x.name() + "' is not connected");

  p.generator_of_edge.assign(x.edge_count(), -1);
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    if (p.tree_edge[e]) continue;
    p.generator_of_edge[e] = static_cast<int>(p.generators.size());
    p.generators.push_back(e);
  }
  for (const Square& s : x.squares()) {
    std::vector<int> word;
    for (const DirectedEdge d : {s.bottom, s.right, s.top.reversed(), s.left.reversed()}) {
      const int g = p.generator_of_edge[d.edge];
      if (g < 0) continue;
      word.push_back(d.forward ? g + 1 : -(g + 1));
    }
    p.relators.push_back(std::move(word));
  }
  return p;
}

VoltageAssignment VoltageAssignment::trivial(const CubeComplex& x, std::size_t degree) {
  return {degree, std::vector<Permutation>(x.edge_count(), perm::identity(degree))};
}

std::uint32_t VoltageAssignment::move(DirectedEdge d, std::uint32_t sheet) const {
  const Permutation& p = perms.at(d.edge);
  if (d.forward) return p.at(sheet);
  const auto it = std::find(p.begin(), p.end(), sheet);
  return static_cast<std::uint32_t>(it - p.begin());
}

Permutation walk_permutation(const VoltageAssignment& v, const std::vector<DirectedEdge>& walk) {
  Permutation acc = perm::identity(v.degree);
  for (const DirectedEdge& d : walk) {
    const Permutation& p = v.perms.at(d.edge);
    acc = perm::then(acc, d.forward ? p : perm::inverse(p));
  }
  return acc;
}

bool satisfies_relators(const CubeComplex& x, const VoltageAssignment& v) {
  for (const Square& s : x.squares()) {
    if (!perm::is_identity(walk_permutation(v, {s.bottom, s.right, s.top.reversed(), s.left.reversed()}))) return false;
  }
  return true;
}

bool is_transitive(const CubeComplex& x, const VoltageAssignment& v) {
  if (v.degree == 0) return false;
  if (x.vertex_count() == 0) return v.degree == 1;
  // Sheets over the whole complex: (vertex, sheet) pairs joined by lifted edges.
  UnionFind uf(x.vertex_count() * v.degree);
  std::size_t parts = x.vertex_count() * v.degree;
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    for (std::uint32_t s = 0; s < v.degree; ++s) {
      if (uf.unite(x.edge(e).initial * v.degree + s, x.edge(e).terminal * v.degree + v.perms[e][s])) --parts;
    }
  }
  return parts == 1;
}

namespace {

std::string sheet_name(const std::string& base, std::uint32_t s) { return base + "@" + std::to_string(s + 1); }

void check_voltages(const CubeComplex& x, const VoltageAssignment& v) {
  if (v.degree == 0) throw Error("cover degree must be positive");
  if (v.perms.size() != x.edge_count()) throw Error("voltage table does not cover every edge");
  for (const auto& p : v.perms) {
    if (p.size() != v.degree) throw Error("voltage permutation has the wrong degree");
    std::vector<bool> hit(v.degree, false);
    for (auto i : p) {
      if (i >= v.degree || hit[i]) throw Error("voltage is not a permutation");
      hit[i] = true;
    }
  }
}

}  // namespace

CoveringSpace build_cover(const ComplexPtr& base, const VoltageAssignment& v, const std::string& name) {
  const CubeComplex& x = *base;
  check_voltages(x, v);
  const auto n = static_cast<std::uint32_t>(v.degree);
  CubeComplex t(name.empty() ? x.name() + "^" + std::to_string(n) : name);

  for (VertexId u = 0; u < x.vertex_count(); ++u) {
    for (std::uint32_t s = 0; s < n; ++s) t.add_vertex(sheet_name(x.vertex_name(u), s));
  }
  for (EdgeId e = 0; e < x.edge_count(); ++e) {
    for (std::uint32_t s = 0; s < n; ++s) {
      t.add_edge(sheet_name(x.edge_name(e), s), x.edge(e).initial * n + s, x.edge(e).terminal * n + v.perms[e][s]);
    }
  }
  auto lift = [&](DirectedEdge d, std::uint32_t s) -> DirectedEdge {
    if (d.forward) return {d.edge * n + s, true};
    return {d.edge * n + v.move(d, s), false};
  };
  for (SquareId q = 0; q < x.square_count(); ++q) {
    const Square& sq = x.square(q);
    for (std::uint32_t s = 0; s < n; ++s) {
      const std::uint32_t s1 = v.move(sq.bottom, s);
      const std::uint32_t s2 = v.move(sq.left, s);
      if (v.move(sq.right, s1) != v.move(sq.top, s2)) {
        throw Error("square " + x.square_name(q) + " does not lift: voltages violate its relator");
      }
      t.add_square(sheet_name(x.square_name(q), s), {lift(sq.bottom, s), lift(sq.right, s1), lift(sq.top, s2), lift(sq.left, s)});
    }
  }
  for (Cube3Id c = 0; c < x.cube_count(); ++c) {
    const Cube3& cube = x.cube(c);
    const Square& b = x.square(cube.bottom);
    const auto r = reparametrizations(x.square(cube.top))[static_cast<std::size_t>(cube.top_reparametrization)];
    const Corner top_origin =
        static_cast<Corner>(std::find(r.corner_of.begin(), r.corner_of.end(), 0) - r.corner_of.begin());
    for (std::uint32_t s = 0; s < n; ++s) {
      std::array<std::uint32_t, 4> at{s, v.move(b.bottom, s), v.move(b.left, s), 0};
      at[3] = v.move(b.right, at[1]);
      std::array<DirectedEdge, 4> corners{};
      std::array<std::uint32_t, 4> top_sheet{};
      for (int k = 0; k < 4; ++k) {
        corners[k] = lift(cube.corners[k], at[k]);
        top_sheet[k] = v.move(cube.corners[k], at[k]);
      }
      t.add_cube3(sheet_name(x.cube_name(c), s), cube.bottom * n + s, cube.top * n + top_sheet[top_origin], corners);
    }
  }

  ComplexPtr total = share(std::move(t));
  std::vector<VertexId> vmap(total->vertex_count());
  std::vector<DirectedEdge> emap(total->edge_count());
  for (VertexId i = 0; i < vmap.size(); ++i) vmap[i] = i / n;
  for (EdgeId i = 0; i < emap.size(); ++i) emap[i] = {i / n, true};
  CubicalMap proj(total, base, std::move(vmap), std::move(emap), "p");
  return {base, total, std::move(proj), v, false};
}

bool verify_cover(const CoveringSpace& c) {
  const CubeComplex& b = *c.base;
  const CubeComplex& t = *c.total;
  const std::size_t n = c.degree();
  if (t.vertex_count() != n * b.vertex_count() || t.edge_count() != n * b.edge_count() ||
      t.square_count() != n * b.square_count() || t.cube_count() != n * b.cube_count()) {
    return false;
  }
  for (VertexId v = 0; v < t.vertex_count(); ++v) {
    if (t.edge_ends(v).size() != b.edge_ends(c.projection.vertex(v)).size()) return false;
  }
  return check_local_isometry(c.projection).ok;
}

namespace {

constexpr int kUndefined = -1;

// Coset-table style search over transitive actions of the presented group.
class CoverSearch {
 public:
  CoverSearch(const Presentation& p, std::size_t degree) : degree_(degree), columns_(2 * p.generators.size()) {
    for (const auto& r : p.relators) {
      if (r.empty()) continue;
      std::vector<std::size_t> word;
      for (int letter : r) word.push_back(column(letter));
      relators_.push_back(std::move(word));
    }
  }

  void run(const std::function<bool(const std::vector<int>&)>& emit) {
    emit_ = &emit;
    std::vector<int> table(degree_ * columns_, kUndefined);
    stopped_ = false;
    descend(table, 1);
  }

 private:
  static std::size_t column(int letter) {
    const auto g = static_cast<std::size_t>(std::abs(letter) - 1);
    return 2 * g + (letter > 0 ? 0 : 1);
  }
  static std::size_t inverse_column(std::size_t c) { return c ^ 1U; }

  int& at(std::vector<int>& t, std::size_t row, std::size_t col) const { return t[row * columns_ + col]; }

  bool define(std::vector<int>& t, std::size_t row, std::size_t col, std::size_t target) const {
    int& fwd = at(t, row, col);
    int& back = at(t, target, inverse_column(col));
    if (fwd != kUndefined || back != kUndefined) return fwd == static_cast<int>(target) && back == static_cast<int>(row);
    fwd = static_cast<int>(target);
    back = static_cast<int>(row);
    return true;
  }

  // Scans every relator from every live sheet, filling forced entries.
  // Returns false on a contradiction.
  bool close(std::vector<int>& t, std::size_t used) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& w : relators_) {
        const std::size_t len = w.size();
        for (std::size_t s = 0; s < used; ++s) {
          std::size_t f = s;
          std::size_t i = 0;
          while (i < len && at(t, f, w[i]) != kUndefined) f = static_cast<std::size_t>(at(t, f, w[i++]));
          if (i == len) {
            if (f != s) return false;
            continue;
          }
          std::size_t b = s;
          std::size_t j = len;
          while (j > i && at(t, b, inverse_column(w[j - 1])) != kUndefined) {
            b = static_cast<std::size_t>(at(t, b, inverse_column(w[j - 1])));
            --j;
          }
          if (j == i) return false;
          if (j == i + 1) {
            if (!define(t, f, w[i], b)) return false;
            changed = true;
          }
        }
      }
    }
    return true;
  }

  bool canonical(const std::vector<int>& t) const {
    std::vector<int> relabel(degree_);
    std::vector<std::size_t> order(degree_);
    for (std::size_t start = 1; start < degree_; ++start) {
      std::fill(relabel.begin(), relabel.end(), kUndefined);
      relabel[start] = 0;
      order[0] = start;
      std::size_t next = 1;
      bool decided = false;
      for (std::size_t row = 0; row < degree_ && !decided; ++row) {
        for (std::size_t col = 0; col < columns_; ++col) {
          const auto old = static_cast<std::size_t>(t[order[row] * columns_ + col]);
          if (relabel[old] == kUndefined) {
            relabel[old] = static_cast<int>(next);
            order[next++] = old;
          }
          const int mine = t[row * columns_ + col];
          if (relabel[old] != mine) {
            if (relabel[old] < mine) return false;
            decided = true;
            break;
          }
        }
      }
    }
    return true;
  }

  void descend(std::vector<int>& t, std::size_t used) {
    if (stopped_) return;
    std::size_t slot = t.size();
    for (std::size_t i = 0; i < used * columns_; ++i) {
      if (t[i] == kUndefined) {
        slot = i;
        break;
      }
    }
    if (slot == t.size()) {
      if (used == degree_ && canonical(t)) stopped_ = !(*emit_)(t);
      return;
    }
    const std::size_t row = slot / columns_;
    const std::size_t col = slot % columns_;
    const std::size_t limit = std::min(used + 1, degree_);
    for (std::size_t target = 0; target < limit && !stopped_; ++target) {
      if (at(t, target, inverse_column(col)) != kUndefined) continue;
      std::vector<int> next = t;
      const std::size_t now_used = std::max(used, target + 1);
      if (!define(next, row, col, target) || !close(next, now_used)) continue;
      descend(next, now_used);
    }
  }

  std::size_t degree_;
  std::size_t columns_;
  std::vector<std::vector<std::size_t>> relators_;
  const std::function<bool(const std::vector<int>&)>* emit_ = nullptr;
  bool stopped_ = false;
};

}  // namespace

void for_each_cover(const CubeComplex& x, std::size_t max_degree,
                    const std::function<bool(const VoltageAssignment&)>& visit) {
  const Presentation p = presentation(x);
  const std::size_t columns = 2 * p.generators.size();
  for (std::size_t d = 1; d <= max_degree; ++d) {
    bool keep_going = true;
    CoverSearch search(p, d);
    search.run([&](const std::vector<int>& t) {
      VoltageAssignment v = VoltageAssignment::trivial(x, d);
      for (std::size_t k = 0; k < p.generators.size(); ++k) {
        Permutation& g = v.perms[p.generators[k]];
        for (std::size_t s = 0; s < d; ++s) g[s] = static_cast<std::uint32_t>(t[s * columns + 2 * k]);
      }
      keep_going = visit(v);
      return keep_going;
    });
    if (!keep_going) return;
  }
}

std::vector<CoveringSpace> enumerate_covers(const ComplexPtr& x, std::size_t max_degree) {
  std::vector<CoveringSpace> out;
  for_each_cover(*x, max_degree, [&](const VoltageAssignment& v) {
    CoveringSpace c = build_cover(x, v);
    c.regular = is_regular(*x, v);
    out.push_back(std::move(c));
    return true;
  });
  return out;
}

namespace {

std::vector<Permutation> loop_permutations(const CubeComplex& x, const VoltageAssignment& v) {
  const Presentation p = presentation(x);
  std::vector<Permutation> gens;
  for (std::size_t k = 0; k < p.generators.size(); ++k) gens.push_back(walk_permutation(v, p.generator_loop(x, k)));
  return gens;
}

}  // namespace

bool is_regular(const CubeComplex& x, const VoltageAssignment& v) {
  if (!is_transitive(x, v)) return false;
  const auto group = perm::generated_group(loop_permutations(x, v), v.degree, v.degree);
  return group.size() == v.degree;
}

std::optional<CoveringSpace> regular_closure(const CoveringSpace& c, std::size_t cap) {
  const CubeComplex& x = *c.base;
  const Presentation p = presentation(x);
  std::vector<Permutation> gens;
  for (std::size_t k = 0; k < p.generators.size(); ++k) {
    gens.push_back(walk_permutation(c.voltages, p.generator_loop(x, k)));
  }
  const auto group = perm::generated_group(gens, c.degree(), cap);
  if (group.empty()) return std::nullopt;
  std::map<Permutation, std::uint32_t> index;
  for (std::size_t i = 0; i < group.size(); ++i) index.emplace(group[i], static_cast<std::uint32_t>(i));

  VoltageAssignment v = VoltageAssignment::trivial(x, group.size());
  for (std::size_t k = 0; k < p.generators.size(); ++k) {
    Permutation& out = v.perms[p.generators[k]];
    for (std::size_t i = 0; i < group.size(); ++i) out[i] = index.at(perm::then(group[i], gens[k]));
  }
  CoveringSpace r = build_cover(c.base, v, x.name() + "^reg" + std::to_string(group.size()));
  r.regular = true;
  return r;
}

VoltageAssignment pull_back(const CubicalMap& f, const VoltageAssignment& v) {
  VoltageAssignment out{v.degree, {}};
  for (EdgeId a = 0; a < f.source().edge_count(); ++a) {
    const DirectedEdge d = f.edge({a, true});
    const Permutation& p = v.perms.at(d.edge);
    out.perms.push_back(d.forward ? p : perm::inverse(p));
  }
  return out;
}

VoltageAssignment pull_back(const CollapsingMap& f, const VoltageAssignment& v) {
  VoltageAssignment out{v.degree, {}};
  for (EdgeId a = 0; a < f.source->edge_count(); ++a) {
    const auto d = f.edge({a, true});
    if (!d) {
      out.perms.push_back(perm::identity(v.degree));
    } else {
      const Permutation& p = v.perms.at(d->edge);
      out.perms.push_back(d->forward ? p : perm::inverse(p));
    }
  }
  return out;
}

CubicalMap extract_component(const ComplexPtr& x, const std::vector<bool>& vertices, const std::string& name) {
  CubeComplex c(name);
  std::vector<VertexId> vmap;
  std::vector<DirectedEdge> emap;
  std::vector<std::optional<VertexId>> vnew(x->vertex_count());
  std::vector<std::optional<EdgeId>> enew(x->edge_count());
  std::vector<std::optional<SquareId>> snew(x->square_count());
  for (VertexId v = 0; v < x->vertex_count(); ++v) {
    if (!vertices.at(v)) continue;
    vnew[v] = c.add_vertex(x->vertex_name(v));
    vmap.push_back(v);
  }
  for (EdgeId e = 0; e < x->edge_count(); ++e) {
    const Edge& ed = x->edge(e);
    if (!vnew[ed.initial] || !vnew[ed.terminal]) continue;
    enew[e] = c.add_edge(x->edge_name(e), *vnew[ed.initial], *vnew[ed.terminal]);
    emap.push_back({e, true});
  }
  auto translate = [&](DirectedEdge d) -> std::optional<DirectedEdge> {
    if (!enew[d.edge]) return std::nullopt;
    return DirectedEdge{*enew[d.edge], d.forward};
  };
  for (SquareId q = 0; q < x->square_count(); ++q) {
    const Square& s = x->square(q);
    const auto b = translate(s.bottom), r = translate(s.right), t = translate(s.top), l = translate(s.left);
    if (!b || !r || !t || !l) continue;
    snew[q] = c.add_square(x->square_name(q), {*b, *r, *t, *l});
  }
  for (Cube3Id k = 0; k < x->cube_count(); ++k) {
    const Cube3& cube = x->cube(k);
    if (!snew[cube.bottom] || !snew[cube.top]) continue;
    std::array<DirectedEdge, 4> corners{};
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      const auto d = translate(cube.corners[i]);
      if (!d) {
        ok = false;
        break;
      }
      corners[i] = *d;
    }
    if (ok) c.add_cube3(x->cube_name(k), *snew[cube.bottom], *snew[cube.top], corners);
  }
  return CubicalMap(share(std::move(c)), x, std::move(vmap), std::move(emap), "incl");
}

FiberProduct fiber_product(const CubicalMap& f, const CoveringSpace& cover) {
  if (f.target_ptr() != cover.base) throw Error("map target is not the base of the cover");
  const auto report = check_local_isometry(f);
  if (!report.ok) throw Error("map " + f.name() + " is not a local isometry");

  const CubeComplex& y = f.source();
  const auto n = static_cast<std::uint32_t>(cover.degree());
  CoveringSpace product = build_cover(f.source_ptr(), pull_back(f, cover.voltages), y.name() + "*" + cover.total->name());

  std::vector<VertexId> vmap(product.total->vertex_count());
  std::vector<DirectedEdge> emap(product.total->edge_count());
  for (VertexId i = 0; i < vmap.size(); ++i) vmap[i] = f.vertex(i / n) * n + i % n;
  for (EdgeId i = 0; i < emap.size(); ++i) {
    const DirectedEdge d = f.edge({i / n, true});
    const std::uint32_t s = i % n;
    emap[i] = d.forward ? DirectedEdge{d.edge * n + s, true} : DirectedEdge{d.edge * n + cover.voltages.move(d, s), false};
  }
  CubicalMap to_cover(product.total, cover.total, std::move(vmap), std::move(emap), "to-cover");

  UnionFind uf(product.total->vertex_count());
  for (const Edge& e : product.total->edges()) uf.unite(e.initial, e.terminal);
  std::size_t count = 0;
  const auto labels = uf.labels(&count);

  FiberProduct out{std::move(product), std::move(to_cover), {labels.begin(), labels.end()}, {}};
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<bool> mask(labels.size(), false);
    std::size_t size = 0;
    for (std::size_t v = 0; v < labels.size(); ++v) {
      if (labels[v] == c) {
        mask[v] = true;
        ++size;
      }
    }
    CubicalMap incl = extract_component(out.product.total, mask, y.name() + "~" + std::to_string(c + 1));
    Elevation el{incl.source_ptr(), compose(incl, out.to_cover), compose(incl, out.product.projection),
                 size / y.vertex_count()};
    out.elevations.push_back(std::move(el));
  }
  return out;
}

std::size_t elevation_count_oracle(const CubicalMap& f, const CoveringSpace& cover) {
  if (f.target_ptr() != cover.base) throw Error("map target is not the base of the cover");
  if (!check_local_isometry(f).ok) throw Error("map " + f.name() + " is not a local isometry");
  const CubeComplex& y = f.source();
  const Presentation p = presentation(y);
  std::vector<Permutation> gens;
  for (std::size_t k = 0; k < p.generators.size(); ++k) {
    std::vector<DirectedEdge> walk;
    for (const DirectedEdge& d : p.generator_loop(y, k)) walk.push_back(f.edge(d));
    gens.push_back(walk_permutation(cover.voltages, walk));
  }
  return perm::orbit_count(gens, cover.degree());
}

std::string write_voltages(const CubeComplex& x, const VoltageAssignment& v) {
  std::ostringstream out;
  out << "cover " << v.degree << "\n";
  for (EdgeId e = 0; e < x.edge_count(); ++e) out << "perm " << x.edge_name(e) << " " << perm::to_cycles(v.perms[e]) << "\n";
  return out.str();
}

VoltageAssignment parse_voltages(const CubeComplex& x, const std::vector<std::string>& lines) {
  std::optional<VoltageAssignment> v;
  std::vector<bool> seen(x.edge_count(), false);
  for (const std::string& raw : lines) {
    std::istringstream in(raw);
    std::string word;
    if (!(in >> word) || word[0] == '#') continue;
    if (word == "cover") {
      long degree = 0;
      if (v || !(in >> degree) || degree < 1) throw Error("bad voltage header: " + raw);
      v = VoltageAssignment::trivial(x, static_cast<std::size_t>(degree));
    } else if (word == "perm") {
      if (!v) throw Error("perm line before cover header");
      std::string edge;
      if (!(in >> edge)) throw Error("perm line without edge: " + raw);
      const auto e = x.find_edge(edge);
      if (!e) throw Error("perm line names unknown edge " + edge);
      if (seen[*e]) throw Error("edge " + edge + " has two perm lines");
      seen[*e] = true;
      std::string rest;
      std::getline(in, rest);
      v->perms[*e] = perm::from_cycles(rest, v->degree);
    } else {
      throw Error("unexpected line in voltage table: " + raw);
    }
  }
  if (!v) throw Error("voltage table has no cover header");
  return *v;
}

}  // namespace cubex
