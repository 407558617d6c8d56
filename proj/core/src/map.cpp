#include "cx/map.hpp"

#include <algorithm>

#include "cx/homotopy.hpp"

namespace cx {

const Name& ComplexMap::vertex_image(const Name& v) const {
  auto it = vmap.find(v);
  if (it == vmap.end()) fail(Errc::UnknownCell, "no image for vertex '" + v + "'");
  return it->second;
}

const Name& ComplexMap::dart_image(const Name& d) const {
  auto it = dmap.find(d);
  if (it == dmap.end())
    fail(Errc::UnknownCell, "no dart image for '" + d + "' (collapsed or unknown)");
  return it->second;
}

const Name& ComplexMap::dart_collapse_vertex(const Name& d) const {
  auto it = dcollapse.find(d);
  if (it == dcollapse.end())
    fail(Errc::UnknownCell, "dart '" + d + "' is not collapsed");
  return it->second;
}

FaceImage ComplexMap::face_image(const Name& f) const {
  auto it = fmap.find(base_of(f));
  if (it == fmap.end()) fail(Errc::UnknownCell, "no image for face '" + f + "'");
  if (!is_inverse(f)) return it->second;
  const FaceImage& fi = it->second;
  if (fi.kind == FaceImage::ToFace) {
    std::size_t n = target->face_size(fi.face);
    return FaceImage::to_face(inverse(fi.face), (n - fi.offset) % n);
  }
  // Reversed image path for the inverse face.
  Path rev;
  rev.start = target->skel.path_end(fi.path);
  for (auto it2 = fi.path.darts.rbegin(); it2 != fi.path.darts.rend(); ++it2)
    rev.darts.push_back(inverse(*it2));
  return FaceImage::to_path(std::move(rev));
}

void ComplexMap::set_dart(const Name& d, const Name& image) {
  dmap[d] = image;
  dmap[inverse(d)] = inverse(image);
}

void ComplexMap::set_dart_collapsed(const Name& d, const Name& vertex) {
  dcollapse[d] = vertex;
  dcollapse[inverse(d)] = vertex;
}

Path ComplexMap::path_image(const Path& p) const {
  Path out;
  out.start = vertex_image(p.start);
  for (const Name& d : p.darts)
    if (!dart_collapses(d)) out.darts.push_back(dart_image(d));
  return out;
}

ComplexMap identity_map(std::shared_ptr<const TwoComplex> x) {
  ComplexMap m;
  m.source = x;
  m.target = x;
  for (const Name& v : x->skel.vertices) m.set_vertex(v, v);
  for (const auto& [d, s] : x->skel.src)
    if (!is_inverse(d)) m.set_dart(d, d);
  for (const auto& [f, w] : x->faces) m.set_face(f, FaceImage::to_face(f, 0));
  return m;
}

bool is_dimension_preserving(const ComplexMap& m) {
  if (!m.dcollapse.empty()) return false;
  for (const auto& [f, fi] : m.fmap)
    if (fi.kind != FaceImage::ToFace) return false;
  return true;
}

ValidationReport validate_map(const ComplexMap& m) {
  ValidationReport r;
  if (!m.source || !m.target) {
    r.problems.push_back("map lacks a source or target complex");
    return r;
  }
  const TwoComplex& S = *m.source;
  const TwoComplex& T = *m.target;

  for (const Name& v : S.skel.vertices) {
    auto it = m.vmap.find(v);
    if (it == m.vmap.end())
      r.problems.push_back("vertex '" + v + "' has no image");
    else if (!T.skel.has_vertex(it->second))
      r.problems.push_back("vertex '" + v + "' maps to unknown vertex '" +
                           it->second + "'");
  }
  for (const auto& [v, img] : m.vmap)
    if (!S.skel.has_vertex(v))
      r.problems.push_back("vmap entry for unknown vertex '" + v + "'");

  for (const auto& [d, s] : S.skel.src) {
    bool mapped = m.dmap.count(d), collapsed = m.dcollapse.count(d);
    if (mapped == collapsed) {
      r.problems.push_back("dart '" + d +
                           (mapped ? "' is both mapped and collapsed"
                                   : "' has no image"));
      continue;
    }
    if (!m.vmap.count(s)) continue;  // reported above
    const Name& vimg = m.vmap.at(s);
    if (mapped) {
      const Name& e = m.dmap.at(d);
      if (!T.skel.has_dart(e)) {
        r.problems.push_back("dart '" + d + "' maps to unknown dart '" + e + "'");
        continue;
      }
      if (!m.dmap.count(inverse(d)) || m.dmap.at(inverse(d)) != inverse(e))
        r.problems.push_back("dart images of '" + d +
                             "' and its inverse are incompatible");
      if (T.skel.dart_src(e) != vimg)
        r.problems.push_back("dart '" + d +
                             "': start vertex image does not match image start");
    } else {
      const Name& b = m.dcollapse.at(d);
      if (!T.skel.has_vertex(b)) {
        r.problems.push_back("dart '" + d + "' collapses to unknown vertex '" +
                             b + "'");
        continue;
      }
      if (!m.dcollapse.count(inverse(d)) || m.dcollapse.at(inverse(d)) != b)
        r.problems.push_back("dart '" + d +
                             "' and its inverse collapse to different vertices");
      if (vimg != b)
        r.problems.push_back("dart '" + d +
                             "' collapses away from its start vertex image");
    }
  }
  for (const auto& [d, img] : m.dmap)
    if (!S.skel.has_dart(d))
      r.problems.push_back("dmap entry for unknown dart '" + d + "'");
  for (const auto& [d, img] : m.dcollapse)
    if (!S.skel.has_dart(d))
      r.problems.push_back("dcollapse entry for unknown dart '" + d + "'");

  for (const auto& [f, w] : S.faces) {
    auto it = m.fmap.find(f);
    if (it == m.fmap.end()) {
      r.problems.push_back("face '" + f + "' has no image");
      continue;
    }
    const FaceImage& fi = it->second;
    if (fi.kind == FaceImage::ToFace) {
      if (!T.has_face(fi.face)) {
        r.problems.push_back("face '" + f + "' maps to unknown face '" + fi.face + "'");
        continue;
      }
      std::vector<Name> tw = T.boundary(fi.face);
      if (tw.size() != w.size()) {
        r.problems.push_back("face '" + f + "': boundary lengths differ");
        continue;
      }
      if (fi.offset >= tw.size()) {
        r.problems.push_back("face '" + f + "': offset out of range");
        continue;
      }
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!m.dmap.count(w[i])) {
          r.problems.push_back("face '" + f + "': boundary dart '" + w[i] +
                               "' does not map to a dart");
          break;
        }
        if (m.dmap.at(w[i]) != tw[(i + fi.offset) % tw.size()]) {
          r.problems.push_back("face '" + f +
                               "': boundary square does not commute at position " +
                               std::to_string(i));
          break;
        }
      }
    } else {
      const Path& gamma = fi.path;
      if (!T.skel.path_valid(gamma) || !T.skel.path_closed(gamma)) {
        r.problems.push_back("face '" + f + "': image path is not a closed path");
        continue;
      }
      // Image of the boundary word, collapsed darts dropped.
      bool bad = false;
      std::vector<Name> img;
      for (const Name& d : w) {
        if (m.dcollapse.count(d)) continue;
        if (!m.dmap.count(d)) {
          bad = true;
          break;
        }
        img.push_back(m.dmap.at(d));
      }
      if (bad) {
        r.problems.push_back("face '" + f + "': boundary dart lacks an image");
        continue;
      }
      if (m.vmap.count(S.skel.dart_src(w[0])) &&
          gamma.start != m.vmap.at(S.skel.dart_src(w[0])))
        r.problems.push_back("face '" + f +
                             "': image path starts away from the boundary image");
      bool whole = true;
      if (gamma.darts.empty())
        whole = img.empty();
      else if (img.size() % gamma.darts.size() != 0)
        whole = false;
      else
        for (std::size_t i = 0; i < img.size(); ++i)
          if (img[i] != gamma.darts[i % gamma.darts.size()]) {
            whole = false;
            break;
          }
      if (!whole) {
        r.problems.push_back("face '" + f +
                             "': boundary image does not traverse the path a "
                             "whole number of times");
        continue;
      }
      Path trivial{gamma.start, {}};
      HomotopyVerdict hv = homotopic_bounded(T, gamma, trivial);
      switch (hv.status) {
        case HomotopyVerdict::Proven:
          r.notes.push_back("face '" + f + "': image path homotopically trivial (" +
                            std::to_string(hv.moves.size()) + " moves)");
          break;
        case HomotopyVerdict::Refuted:
          r.problems.push_back("face '" + f +
                               "': image path is not homotopically trivial");
          break;
        case HomotopyVerdict::Inconclusive:
          r.notes.push_back("face '" + f +
                            "': homotopy triviality inconclusive within bounds");
          break;
      }
    }
  }
  for (const auto& [f, fi] : m.fmap)
    if (!S.faces.count(f))
      r.problems.push_back("fmap entry for unknown face '" + f + "'");

  std::sort(r.problems.begin(), r.problems.end());
  return r;
}

ComplexMap compose_maps(const ComplexMap& g, const ComplexMap& f) {
  if (!f.target || !g.source || !(*f.target == *g.source))
    fail(Errc::TargetMismatch, "compose_maps: target of f is not the source of g");
  ComplexMap h;
  h.source = f.source;
  h.target = g.target;
  for (const auto& [v, img] : f.vmap) h.set_vertex(v, g.vertex_image(img));
  for (const auto& [d, s] : f.source->skel.src) {
    if (is_inverse(d)) continue;
    if (f.dart_collapses(d)) {
      h.set_dart_collapsed(d, g.vertex_image(f.dart_collapse_vertex(d)));
    } else {
      const Name& e = f.dart_image(d);
      if (g.dart_collapses(e))
        h.set_dart_collapsed(d, g.dart_collapse_vertex(e));
      else
        h.set_dart(d, g.dart_image(e));
    }
  }
  for (const auto& [sigma, w] : f.source->faces) {
    FaceImage fi = f.fmap.at(sigma);
    if (fi.kind == FaceImage::ToFace) {
      FaceImage gi = g.face_image(fi.face);
      if (gi.kind == FaceImage::ToFace) {
        std::size_t n = g.target->face_size(gi.face);
        h.set_face(sigma, FaceImage::to_face(gi.face, (fi.offset + gi.offset) % n));
      } else {
        // Face image collapses downstream: record the composite boundary
        // image as a path.
        Path img;
        img.start = h.vertex_image(f.source->skel.dart_src(w[0]));
        std::vector<Name> tw = f.target->boundary(fi.face);
        for (std::size_t i = 0; i < w.size(); ++i) {
          const Name& mid = tw[(i + fi.offset) % tw.size()];
          if (!g.dart_collapses(mid)) img.darts.push_back(g.dart_image(mid));
        }
        h.set_face(sigma, FaceImage::to_path(std::move(img)));
      }
    } else {
      h.set_face(sigma, FaceImage::to_path(g.path_image(fi.path)));
    }
  }
  return h;
}

LocalContinuity local_continuity(const ComplexMap& m, const Name& u) {
  if (!is_dimension_preserving(m))
    fail(Errc::NotDimensionPreserving,
         "local continuity is defined for dimension-preserving maps");
  if (!m.source->skel.has_vertex(u))
    fail(Errc::UnknownCell, "unknown vertex '" + u + "'");
  const Name& v = m.vertex_image(u);

  LocalContinuity lc;
  std::vector<Name> at_u = m.source->skel.darts_at(u);
  std::set<Name> hit;
  for (const Name& d : at_u) {
    lc.edge_map[d] = m.dart_image(d);
    hit.insert(lc.edge_map[d]);
  }
  std::vector<Name> at_v = m.target->skel.darts_at(v);
  lc.edge_injective = hit.size() == at_u.size();
  lc.edge_surjective = hit.size() == at_v.size();

  for (const Name& tau : m.target->all_face_names()) {
    LocalContinuity::FaceFiber fb;
    fb.target_appearances = appearances(*m.target, tau, v);
    std::set<std::size_t> seen;
    bool clash = false;
    for (const Name& sigma : m.source->all_face_names()) {
      FaceImage fi = m.face_image(sigma);
      if (fi.face != tau) continue;
      std::size_t n = m.source->face_size(sigma);
      for (std::size_t i : appearances(*m.source, sigma, u)) {
        std::size_t j = (i + fi.offset) % n;
        fb.assignments.emplace_back(sigma, i, j);
        if (!seen.insert(j).second) clash = true;
      }
    }
    fb.injective = !clash;
    fb.surjective = seen.size() == fb.target_appearances.size();
    lc.face_maps.emplace(tau, std::move(fb));
  }
  return lc;
}

bool is_isomorphism(const ComplexMap& m) {
  if (!validate_map(m).ok()) return false;
  if (!is_dimension_preserving(m)) return false;
  const TwoComplex& S = *m.source;
  const TwoComplex& T = *m.target;
  std::set<Name> vi, di, fi;
  for (const auto& [v, img] : m.vmap) vi.insert(img);
  if (vi.size() != S.skel.vertices.size() || vi.size() != T.skel.vertices.size())
    return false;
  for (const auto& [d, img] : m.dmap) di.insert(img);
  if (di.size() != S.skel.src.size() || di.size() != T.skel.src.size())
    return false;
  for (const auto& [f, im] : m.fmap) fi.insert(base_of(im.face));
  if (fi.size() != S.faces.size() || fi.size() != T.faces.size()) return false;
  return true;
}

ComplexMap quotient_map(const Graph& g, const GraphQuotient& q) {
  ComplexMap m;
  m.source = std::make_shared<TwoComplex>(as_complex(g));
  m.target = std::make_shared<TwoComplex>(as_complex(q.quotient));
  m.vmap = q.vertex_class;
  m.dmap = q.dart_class;
  m.dcollapse = q.dart_collapsed;
  return m;
}

}  // namespace cx
