#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cx/map.hpp"
#include "cx/permgroup.hpp"

namespace cx {

// A certified covering map. `fibers` caches, for every vertex, dart and face
// name of the target, the sorted source cells over it; every fiber has
// cardinality `degree`.
struct CoveringCert {
  ComplexMap map;
  std::map<Name, std::vector<Name>> fibers;
  std::size_t degree = 0;

  const std::vector<Name>& fiber(const Name& cell) const;
};

// Certifies that m is a covering: dimension-preserving, with bijective edge
// and face local continuity at every source vertex, onto a connected target.
// The failure report names the vertex or face where bijectivity broke and
// says whether the map is at least an immersion.
CoveringCert check_covering(const ComplexMap& m);

// The unique path over `gamma` starting at the fiber vertex u.
Path lift_path(const CoveringCert& c, const Path& gamma, const Name& u);

// A source face together with an appearance index of the lifted basepoint on
// its boundary.
struct FaceLift {
  Name face;
  std::size_t appearance = 0;
};

// The unique face over `tau` whose boundary passes through u at the
// appearance mapping onto the given one.
FaceLift lift_face(const CoveringCert& c, const Name& tau, std::size_t appearance,
                   const Name& u);

// Lifts g: Z -> X through the covering to g~: Z -> Y with g~(x) = u.
// Existence is decided by lifting the g-image of every spanning-tree
// generator loop of Z at u and requiring it to close up.
ComplexMap lift_map(const CoveringCert& c, const ComplexMap& g, const Name& x,
                    const Name& u);

struct ExciseResult {
  CoveringCert cover;          // induced covering between the two quotients
  ComplexMap source_quotient;  // Y -> Y / (components over the excised piece)
  ComplexMap target_quotient;  // X -> X / excised piece
};

// Collapses a connected, simply connected subcomplex z of the base and each
// component over it in the total complex; the induced map is again a
// covering of the same degree. Simple connectivity is verified by a bounded
// homotopy search on z's spanning-tree generator loops.
ExciseResult excise(const CoveringCert& c, const TwoComplex& z,
                    std::size_t max_len = 64, std::size_t max_moves = 16);

// Monodromy action on the fiber over `vertex`: one permutation of `fiber`
// positions per non-tree generator dart. The raw endpoint action composes
// contravariantly, so each stored permutation is the inverse of it and words
// then act by a homomorphism.
struct Monodromy {
  Name vertex;
  std::vector<Name> fiber;
  Graph tree;
  std::map<Name, Permutation> action;
};

Monodromy monodromy(const CoveringCert& c, const Name& v, const Graph& tree);

// Action of a closed dart word at the monodromy basepoint, same inverted
// convention as the generators.
Permutation monodromy_of_word(const CoveringCert& c, const Monodromy& mo,
                              const std::vector<Name>& word);

// Spanning-tree presentation of the fundamental group: one generator per
// non-tree arc, one relator per face (the boundary word with tree darts
// erased, freely reduced).
struct Presentation {
  Graph tree;
  std::vector<Name> generators;
  std::vector<std::vector<Name>> relators;
};

Presentation presentation_of(const TwoComplex& x, const Graph& tree);

// Right-coset action table over the presentation generators. Rows exist only
// for Closed tables; row 0 is the subgroup itself and the numbering is the
// breadth-first order from it, scanning generator darts by name.
struct CosetTable {
  enum class Status { Closed, Exhausted };
  Status status = Status::Exhausted;
  std::size_t bound = 0;
  std::vector<Name> generators;
  std::vector<std::map<Name, std::size_t>> rows;

  std::size_t size() const { return rows.size(); }
  std::size_t act(std::size_t coset, const Name& dart) const;
  std::size_t act_word(std::size_t coset, const std::vector<Name>& word) const;
};

CosetTable coset_enumerate(const Presentation& p,
                           const std::vector<std::vector<Name>>& subgroup_words,
                           std::size_t max_cosets = 10000);

// The cover whose fundamental group is the subgroup enumerated in `table`:
// one copy of the tree per coset, generator arcs wired along the coset
// action, faces sewn by lifting each boundary word at every fiber vertex of
// its start and deduplicating identical lifted boundaries.
CoveringCert bottom_up_cover(std::shared_ptr<const TwoComplex> x, const Name& v,
                             const Graph& tree, const CosetTable& table);

struct UniversalBounds {
  std::size_t max_cosets = 10000;
  std::size_t radius = 2;
  std::size_t max_len = 8;
  std::size_t max_moves = 4;
};

// Radius-limited piece of the universal cover, produced when enumeration
// exhausts: vertices are bounded-homotopy classes of short paths from the
// basepoint, with only the faces fully supported inside the ball. The
// projection is a valid map but fails to be a covering along `frontier`.
struct Truncation {
  std::shared_ptr<const TwoComplex> complex;
  ComplexMap map;
  Name basepoint;
  std::size_t radius = 0;
  std::vector<Name> frontier;
};

struct UniversalCoverResult {
  std::optional<CoveringCert> cover;
  std::optional<Truncation> truncation;

  bool covered() const { return cover.has_value(); }
};

// Universal cover via coset enumeration over the trivial subgroup; a closed
// table yields a genuine certified cover, exhaustion yields a Truncation.
UniversalCoverResult universal_cover(std::shared_ptr<const TwoComplex> x,
                                     const Name& v,
                                     const UniversalBounds& bounds = {});

}  // namespace cx
