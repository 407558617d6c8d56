#pragma once

#include <memory>

#include "cx/complex.hpp"

namespace cx {

// Image of a face: either a target face at a rotation offset k (the face
// isomorphism of a dimension-preserving image: source boundary position i
// maps to target position (i+k) mod n), or a closed path in the target when
// the face collapses a dimension.
struct FaceImage {
  enum Kind { ToFace, ToPath } kind = ToFace;
  Name face;
  std::size_t offset = 0;
  Path path;

  static FaceImage to_face(Name f, std::size_t k) {
    FaceImage fi;
    fi.kind = ToFace;
    fi.face = std::move(f);
    fi.offset = k;
    return fi;
  }
  static FaceImage to_path(Path p) {
    FaceImage fi;
    fi.kind = ToPath;
    fi.path = std::move(p);
    return fi;
  }

  bool operator==(const FaceImage&) const = default;
};

// A map of 2-complexes. Dart images are stored for both orientations; a
// dart either maps to a target dart (dmap) or collapses to a target vertex
// (dcollapse). Face images are stored for canonical faces only; the inverse
// face's image is derived (inverse target face with offset (n-k) mod n, or
// the reversed path).
struct ComplexMap {
  std::shared_ptr<const TwoComplex> source, target;
  std::map<Name, Name> vmap;
  std::map<Name, Name> dmap;
  std::map<Name, Name> dcollapse;
  std::map<Name, FaceImage> fmap;

  const Name& vertex_image(const Name& v) const;
  bool dart_collapses(const Name& d) const { return dcollapse.count(d) > 0; }
  const Name& dart_image(const Name& d) const;          // requires non-collapsed
  const Name& dart_collapse_vertex(const Name& d) const;
  FaceImage face_image(const Name& f) const;            // any face name

  // Builder helpers keeping both orientations in sync.
  void set_vertex(const Name& v, const Name& image) { vmap[v] = image; }
  void set_dart(const Name& d, const Name& image);
  void set_dart_collapsed(const Name& d, const Name& vertex);
  void set_face(const Name& canonical, FaceImage image) {
    fmap[base_of(canonical)] = std::move(image);
  }

  // Image of a path (collapsed darts dropped).
  Path path_image(const Path& p) const;

  bool same_maps(const ComplexMap& o) const {
    return vmap == o.vmap && dmap == o.dmap && dcollapse == o.dcollapse &&
           fmap == o.fmap;
  }
  bool operator==(const ComplexMap& o) const {
    return *source == *o.source && *target == *o.target && same_maps(o);
  }
};

ComplexMap identity_map(std::shared_ptr<const TwoComplex> x);

// No dart or face collapses a dimension.
bool is_dimension_preserving(const ComplexMap& m);

// Structural validation: totality, inverse compatibility, the commuting
// boundary square for face images (M1), and closedness plus bounded
// homotopy-triviality reporting for path images (M2).
ValidationReport validate_map(const ComplexMap& m);

ComplexMap compose_maps(const ComplexMap& g, const ComplexMap& f);

struct LocalContinuity {
  // Darts starting at u -> darts starting at v.
  std::map<Name, Name> edge_map;
  bool edge_injective = false, edge_surjective = false;

  // Per target face: the disjoint union of the face isomorphisms restricted
  // to appearances of u, mapping into appearances of v in that face.
  struct FaceFiber {
    // (source face, appearance of u in it) -> appearance of v in the target.
    std::vector<std::tuple<Name, std::size_t, std::size_t>> assignments;
    std::vector<std::size_t> target_appearances;
    bool injective = false, surjective = false;
  };
  std::map<Name, FaceFiber> face_maps;

  bool edges_bijective() const { return edge_injective && edge_surjective; }
  bool faces_bijective() const {
    for (const auto& [f, fm] : face_maps)
      if (!(fm.injective && fm.surjective)) return false;
    return true;
  }
};

LocalContinuity local_continuity(const ComplexMap& m, const Name& u);

bool is_isomorphism(const ComplexMap& m);

// Quotient maps produced by graph-level quotients, wrapped as ComplexMaps
// between faceless complexes.
ComplexMap quotient_map(const Graph& g, const GraphQuotient& q);

}  // namespace cx
