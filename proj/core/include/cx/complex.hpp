#pragma once

#include "cx/graph.hpp"

namespace cx {

// A finite 2-complex: a graph plus faces. Each face/inverse pair is stored
// once, keyed by the canonical '^'-free name; the inverse face's boundary is
// derived by reversing and inverting the word (position i of f^ holds the
// inverse of position n-1-i of f).
struct TwoComplex {
  Graph skel;
  std::map<Name, std::vector<Name>> faces;

  void add_face(const Name& name, std::vector<Name> word);

  bool has_face(const Name& f) const { return faces.count(base_of(f)) > 0; }
  // Canonical face names, sorted.
  std::vector<Name> face_names() const;
  // Canonical and inverse face names, sorted.
  std::vector<Name> all_face_names() const;

  std::vector<Name> boundary(const Name& f) const;
  std::size_t face_size(const Name& f) const;

  bool operator==(const TwoComplex&) const = default;
};

inline TwoComplex as_complex(const Graph& g) { return TwoComplex{g, {}}; }

ValidationReport validate_complex(const TwoComplex& x);
bool is_connected(const TwoComplex& x);

// Positions p with src(boundary(f)[p]) == v.
std::vector<std::size_t> appearances(const TwoComplex& x, const Name& f, const Name& v);

// Splits `face` along a new arc joining the (distinct) vertices at boundary
// positions i < j of its stored word.
TwoComplex subdivide_face(const TwoComplex& x, const Name& face,
                          std::size_t i, std::size_t j);

bool is_subcomplex(const TwoComplex& sub, const TwoComplex& x);

// Orientation-respecting isomorphism search (vertex/dart/face bijections
// commuting with src, inverses and boundaries up to rotation).
bool complex_isomorphic(const TwoComplex& a, const TwoComplex& b);

}  // namespace cx
