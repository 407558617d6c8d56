#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cx/error.hpp"

namespace cx {

// Permutations of {0, ..., n-1}. Products compose right to left:
// (a * b)(x) = a(b(x)), matching the automorphism convention used for deck
// transformations and monodromy.
struct Permutation {
  std::vector<int> img;

  static Permutation identity(std::size_t n);

  std::size_t degree() const { return img.size(); }
  int operator()(int x) const { return img.at(static_cast<std::size_t>(x)); }
  bool is_identity() const;
  Permutation inverse() const;
  std::size_t order() const;
  std::string cycle_string() const;

  friend Permutation operator*(const Permutation& a, const Permutation& b);
  auto operator<=>(const Permutation&) const = default;
};

struct PermGroup {
  std::size_t degree = 0;
  std::vector<Permutation> generators;
  std::vector<Permutation> elements;  // sorted, identity included

  std::size_t order() const { return elements.size(); }
  bool contains(const Permutation& p) const;
  bool operator==(const PermGroup&) const = default;
};

PermGroup closure(std::size_t degree, std::vector<Permutation> gens);

// Every subgroup exactly once, ordered by (order, element list). Refuses
// groups larger than `cap` elements.
std::vector<PermGroup> all_subgroups(const PermGroup& g, std::size_t cap = 64);

struct SubgroupLattice {
  std::vector<PermGroup> subgroups;
  std::vector<std::vector<bool>> leq;   // leq[i][j]: subgroups[i] <= subgroups[j]
  std::vector<std::vector<int>> meet;   // intersection
  std::vector<std::vector<int>> join;   // generated subgroup
  int bottom = 0, top = 0;

  std::size_t hasse_edge_count() const;
  // i covered by j: i < j with nothing strictly between.
  std::vector<std::pair<int, int>> hasse_edges() const;
};

SubgroupLattice subgroup_lattice(const PermGroup& g, std::size_t cap = 64);

bool is_subgroup(const PermGroup& h, const PermGroup& g);
bool is_normal(const PermGroup& h, const PermGroup& g);
PermGroup normalizer(const PermGroup& h, const PermGroup& g);
PermGroup intersect(const PermGroup& a, const PermGroup& b);
PermGroup generated_join(const PermGroup& a, const PermGroup& b);

// Abstract isomorphism test by generator-image backtracking; intended for
// the small groups arising as Galois groups here.
bool groups_isomorphic(const PermGroup& a, const PermGroup& b);

}  // namespace cx
