#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cubex {

/// A permutation of {0, ..., n-1}; p[i] is the image of i.
using Permutation = std::vector<std::uint32_t>;

namespace perm {

Permutation identity(std::size_t n);
bool is_identity(const Permutation& p);
/// Apply p, then q.
Permutation then(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);

/// Cycle notation on 1-based points, e.g. "(1 2 3)(4 5)"; identity is "()".
std::string to_cycles(const Permutation& p);
/// Inverse of to_cycles for a permutation of degree n. Throws cubex::Error.
Permutation from_cycles(const std::string& text, std::size_t n);

/// Number of orbits of the group generated by `gens` on {0..n-1}.
std::size_t orbit_count(const std::vector<Permutation>& gens, std::size_t n);

/// Elements of the group generated by `gens`, identity first, in
/// breadth-first order of right multiplication by generators. Stops and
/// returns an empty vector once more than `cap` elements are found.
std::vector<Permutation> generated_group(const std::vector<Permutation>& gens, std::size_t n, std::size_t cap);

}  // namespace perm
}  // namespace cubex
