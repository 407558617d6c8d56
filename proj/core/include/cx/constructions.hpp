#pragma once

#include <memory>
#include <vector>

#include "cx/map.hpp"

namespace cx {

// Disjoint union with every cell of the first summand prefixed "1:" and of
// the second "2:".
TwoComplex disjoint_union(const TwoComplex& a, const TwoComplex& b);

// Induced subcomplex on the connected component of `vertex`.
TwoComplex component_containing(const TwoComplex& x, const Name& vertex);

struct QuotientResult {
  std::shared_ptr<const TwoComplex> complex;
  ComplexMap q;  // source complex -> quotient
};

// A finite group acting on a complex by automorphisms. `closure` is the
// generated set, identity included.
struct GroupAction {
  std::shared_ptr<const TwoComplex> complex;
  std::vector<ComplexMap> generators;
  std::vector<ComplexMap> closure;
};

// Checks each generator is an automorphism of `complex` and generates the
// closure by composition; TooLarge past `closure_cap` elements.
GroupAction make_group_action(std::shared_ptr<const TwoComplex> complex,
                              std::vector<ComplexMap> generators,
                              std::size_t closure_cap = 512);

// Cells of the quotient are orbits, named by their least member; fails with
// NotOrientationPreserving when some element sends a dart or face to its
// inverse.
QuotientResult quotient_by_group_action(const GroupAction& a);

// Collapses each part to its own vertex (named by the part's least vertex).
// Faces lying entirely inside a part vanish; boundaries of surviving faces
// have their collapsed segments erased.
QuotientResult quotient_by_subcomplexes(std::shared_ptr<const TwoComplex> x,
                                        const std::vector<TwoComplex>& parts);

struct PushoutResult {
  std::shared_ptr<const TwoComplex> complex;
  ComplexMap t1, t2;  // X1 -> P and X2 -> P
  ComplexMap f1, f2;  // the defining legs Y -> X1, Y -> X2
};

// Pushout of dimension-preserving legs sharing their source. When the legs
// share their target object the identifications are made inside that single
// copy (this is how edges fold); distinct targets are joined disjointly
// first. A consistent orientation assignment is searched for before
// quotienting; failure and inverse identifications both raise
// NotQuotientRelation.
PushoutResult pushout(const ComplexMap& f1, const ComplexMap& f2);

// Mediating map P -> Z for maps g1, g2 out of the pushout legs' targets
// making the outer square commute; SquareDoesNotCommute otherwise.
ComplexMap pushout_factorize(const PushoutResult& p, const ComplexMap& g1,
                             const ComplexMap& g2);

struct PullbackResult {
  std::shared_ptr<const TwoComplex> complex;
  ComplexMap t1, t2;  // projections onto X1 and X2
  ComplexMap f1, f2;  // the defining legs X1 -> Y, X2 -> Y
};

// Pullback of dimension-preserving legs into a common target. Cells are the
// matched pairs "a|b", stored under the representative whose second
// coordinate is '^'-free; the boundary of a paired face interleaves the two
// boundary words position by position through their rotation offsets.
PullbackResult pullback(const ComplexMap& f1, const ComplexMap& f2);

// Mediating map Z -> Q for maps g1, g2 into the pullback legs' sources
// making the outer square commute; SquareDoesNotCommute otherwise.
ComplexMap pullback_factorize(const PullbackResult& q, const ComplexMap& g1,
                              const ComplexMap& g2);

// One pair of darts inside the fiber of a single source over the base edge.
struct HandlePair {
  std::size_t source_index = 0;
  Name dart1, dart2;
};

// The splice data: a base edge of the common target and the m dart pairs
// distributed over the sources.
struct HandleConfiguration {
  Name edge;
  std::vector<HandlePair> pairs;
};

struct HigmanResult {
  std::shared_ptr<const TwoComplex> complex;
  ComplexMap map;  // spliced complex -> common target
};

// Checks the two face clauses around the base edge: fiber faces that are a
// pure power of a pair dart must have exponent m with companion faces for
// every pair dart, and every other fiber face containing a pair dart must be
// an exact k-fold repetition (dart1 g1 dart2 g2)^k whose g segments avoid
// all pair darts, with one such face per pair and matching g images across
// pairs. Violations raise NotHandleConfiguration naming the clause.
void validate_handle_configuration(const std::vector<ComplexMap>& maps,
                                   const HandleConfiguration& hc);

// Rewires the pair darts cyclically (side 1 ascending, side 2 descending)
// and rethreads the affected faces across consecutive pairs, keeping cell
// names, the total dart count and all images under the combined map.
HigmanResult higman_composition(const std::vector<ComplexMap>& maps,
                                const HandleConfiguration& hc);

}  // namespace cx
