#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cx/covering.hpp"
#include "cx/permgroup.hpp"

namespace cx {

// A covering automorphism a: Y -> Y with f(a(x)) = f(x) for every cell,
// together with its action on the sorted vertex list of Y. The map is an
// orientation-preserving isomorphism and, unless it is the identity, fixes
// no vertex.
struct DeckTransform {
  ComplexMap automorphism;
  Permutation vertex_action;
};

// The group of all covering automorphisms, closed under composition and
// inverse. Each element is determined by the image of a single vertex, so
// the vertex permutations form a faithful representation.
struct GaloisGroup {
  CoveringCert cert;
  Name basepoint;            // target vertex whose fiber was searched
  std::vector<Name> fiber;   // sorted fiber over the basepoint
  std::vector<DeckTransform> elements;
  PermGroup perm_rep;        // action on the sorted vertices of the source

  std::size_t order() const { return elements.size(); }
};

// The unique automorphism sending u to u2, built by lifting the covering
// map through itself; DaggerFails when some loop at u lifts closed at one
// of the two vertices but open at the other.
DeckTransform automorphism_from_vertices(const CoveringCert& c, const Name& u,
                                         const Name& u2);

// Collects the automorphisms carrying the least fiber vertex over v to each
// vertex of that fiber and verifies the set is closed. The order always
// divides the degree.
GaloisGroup galois_group(const CoveringCert& c, const Name& v);

struct GaloisVerdict {
  bool galois = false;
  std::size_t group_order = 0;
  std::size_t degree = 0;
  std::string witness;
};

// A cover is Galois exactly when the deck group is transitive on a fiber,
// that is when its order equals the degree; the verdict does not depend on
// the chosen fiber.
GaloisVerdict is_galois(const CoveringCert& c);

// A factorization Y -> Z -> X of a covering into two certified coverings,
// pointed by the image z of the source basepoint. `key` is a canonical
// relabeling signature: two intermediate covers are pointed-equivalent
// exactly when their keys coincide.
struct IntermediateCover {
  CoveringCert g;  // upper leg Y -> Z
  CoveringCert h;  // lower leg Z -> X
  Name pointing;
  std::string key;
};

// The intermediate cover Y -> Y/H -> X for a subgroup H of the deck group,
// given by its vertex permutations; NotSubgroup when h is not contained in
// the group's representation. For a Galois cover the lower leg has degree
// equal to the index of H.
IntermediateCover quotient_by_deck_subgroup(const GaloisGroup& gal,
                                            const PermGroup& h);

// The subgroup of deck transformations a with g.a = g, i.e. the deck group
// of the upper leg, as a subgroup of gal.perm_rep.
PermGroup deck_group_of_intermediate(const GaloisGroup& gal,
                                     const IntermediateCover& ic);

struct EquivalenceResult {
  bool equivalent = false;
  ComplexMap iso;  // witness Z1 -> Z2 commuting with both legs
};

// Pointed equivalence: the only candidate isomorphism is the lift of one
// lower leg through the other matching the pointings; it is accepted when
// it is an isomorphism commuting with both legs.
EquivalenceResult are_equivalent(const IntermediateCover& a,
                                 const IntermediateCover& b);

// Equivalence ignoring pointings: tries every vertex of b's fiber over the
// common basepoint image as the image of a's pointing.
EquivalenceResult are_equivalent_unpointed(const IntermediateCover& a,
                                           const IntermediateCover& b);

// Intermediate covers of one covering ordered by "is covered by": element i
// is below j when j's middle complex covers i's compatibly. Bottom is the
// X-end, top the Y-end.
struct CoverPoset {
  std::vector<IntermediateCover> elements;
  std::vector<std::vector<bool>> leq;
  int bottom = 0, top = 0;
};

// The full lattice of intermediate covers of a Galois covering, with join
// and meet tables parallel to the subgroup lattice of the deck group.
struct CoverLattice {
  std::vector<IntermediateCover> elements;
  std::vector<std::vector<bool>> leq;
  std::vector<std::vector<int>> join;  // realized by pullback components
  std::vector<std::vector<int>> meet;  // realized by pushouts
  int bottom = 0, top = 0;
};

// The two sides of the Galois correspondence. covers[psi[k]] is the
// quotient by subgroups[k] and phi recovers the subgroup from the cover, so
// phi and psi are mutually inverse and order-reversing; joins of covers
// match intersections of subgroups, meets match generated subgroups,
// degrees match indices, and Galois lower legs match normal subgroups.
struct IntermediateLattice {
  GaloisGroup gal;
  CoverLattice covers;
  SubgroupLattice subgroups;
  std::vector<int> phi;  // cover index -> index of its deck subgroup
  std::vector<int> psi;  // subgroup index -> index of its quotient cover
};

// Builds and cross-checks the correspondence; NotGalois when the deck group
// order falls short of the degree.
IntermediateLattice intermediate_lattice(const CoveringCert& c, const Name& v);

// Intermediate covers of an arbitrary covering, one per subgroup between
// the monodromy stabilizer of the basepoint and the whole monodromy group,
// ordered by reverse inclusion of those subgroups. No join or meet claims.
CoverPoset intermediate_poset(const CoveringCert& c, const Name& v);

struct InverseGaloisResult {
  CoveringCert cert;
  GaloisGroup galois;
};

// A Galois graph cover of a one-vertex bouquet (loops "a", "b", ...) whose
// deck group is isomorphic to the group generated by `gens`: the Schreier
// diagram of the right regular representation.
InverseGaloisResult inverse_galois(const std::vector<Permutation>& gens);

// Excision applied across a whole family of intermediate covers: the top
// cover and every element are pushed through the collapse of z and matched
// against the intermediate covers of the excised covering.
struct LatticeExcision {
  ExciseResult whole;
  CoverPoset before, after;
  std::vector<int> matching;  // before element -> equivalent after element
  bool lattice_checked = false;  // join/meet agreement (Galois case only)
  std::size_t gal_before = 0, gal_after = 0;
};

// Verifies that collapsing a simply connected z in the base induces an
// order-isomorphism of intermediate covers preserving Galois legs and deck
// groups; join/meet tables are compared too when the cover is Galois.
LatticeExcision lattice_excision(const CoveringCert& c, const TwoComplex& z,
                                 std::size_t max_len = 64,
                                 std::size_t max_moves = 16);

// For a graph covering: true when every connected component of the fibered
// self-product other than the diagonal is a tree, the combinatorial form of
// the trivial-stabilizer-intersection condition. NotGraph when faces are
// present.
bool is_completely_irregular(const CoveringCert& c);

}  // namespace cx
