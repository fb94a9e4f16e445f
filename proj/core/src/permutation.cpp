#include "cubex/permutation.hpp"

#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "cubex/complex.hpp"
#include "cubex/union_find.hpp"

namespace cubex::perm {

Permutation identity(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0U);
  return p;
}

bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != i) return false;
  }
  return true;
}

Permutation then(const Permutation& p, const Permutation& q) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return r;
}

Permutation inverse(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<std::uint32_t>(i);
  return r;
}

std::string to_cycles(const Permutation& p) {
  std::ostringstream out;
  std::vector<bool> seen(p.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == i) continue;
    any = true;
    out << "(";
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      out << (first ? "" : " ") << j + 1;
      first = false;
      j = p[j];
    }
    out << ")";
  }
  return any ? out.str() : "()";
}

Permutation from_cycles(const std::string& text, std::size_t n) {
  Permutation p = identity(n);
  std::vector<bool> used(n, false);
  std::size_t i = 0;
  auto fail = [&](const std::string& why) { throw Error("bad cycle notation '" + text + "': " + why); };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i])) != 0) {
      ++i;
      continue;
    }
    if (text[i] != '(') fail("expected '('");
    const std::size_t close = text.find(')', i);
    if (close == std::string::npos) fail("unbalanced parenthesis");
    std::istringstream in(text.substr(i + 1, close - i - 1));
    std::vector<std::uint32_t> cycle;
    long v = 0;
    while (in >> v) {
      if (v < 1 || static_cast<std::size_t>(v) > n) fail("point out of range");
      const auto pt = static_cast<std::uint32_t>(v - 1);
      if (used[pt]) fail("repeated point");
      used[pt] = true;
      cycle.push_back(pt);
    }
    if (!in.eof()) fail("non-numeric point");
    for (std::size_t k = 0; k < cycle.size(); ++k) p[cycle[k]] = cycle[(k + 1) % cycle.size()];
    i = close + 1;
  }
  return p;
}

std::size_t orbit_count(const std::vector<Permutation>& gens, std::size_t n) {
  UnionFind uf(n);
  std::size_t count = n;
  for (const auto& g : gens) {
    for (std::size_t i = 0; i < n; ++i) {
      if (uf.unite(i, g[i])) --count;
    }
  }
  return count;
}

std::vector<Permutation> generated_group(const std::vector<Permutation>& gens, std::size_t n, std::size_t cap) {
  std::vector<Permutation> elements{identity(n)};
  std::map<Permutation, std::size_t> index{{elements.front(), 0}};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : gens) {
      Permutation next = then(elements[i], g);
      if (index.count(next) != 0) continue;
      if (elements.size() >= cap) return {};
      index.emplace(next, elements.size());
      elements.push_back(std::move(next));
    }
  }
  return elements;
}

}  // namespace cubex::perm
