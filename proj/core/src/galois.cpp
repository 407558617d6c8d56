#include "cx/galois.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cx/constructions.hpp"
#include "cx/error.hpp"

namespace cx {

namespace {

bool same_complex(const std::shared_ptr<const TwoComplex>& a,
                  const std::shared_ptr<const TwoComplex>& b) {
  return a == b || (a && b && *a == *b);
}

std::vector<Name> sorted_vertices(const TwoComplex& x) {
  return {x.skel.vertices.begin(), x.skel.vertices.end()};
}

Permutation vertex_perm(const ComplexMap& a, const std::vector<Name>& verts,
                        const std::map<Name, int>& index) {
  Permutation p;
  p.img.reserve(verts.size());
  for (const Name& v : verts) p.img.push_back(index.at(a.vertex_image(v)));
  return p;
}

// The unique dart at y mapping onto the target dart xd under a covering map.
Name dart_over_map(const ComplexMap& m, const Name& y, const Name& xd) {
  for (const Name& d : m.source->skel.darts_at(y))
    if (!m.dart_collapses(d) && m.dart_image(d) == xd) return d;
  fail(Errc::NotCovering, "no dart over '" + xd + "' at '" + y + "'");
}

// Relabeling signature of a covering pointed at z0: breadth-first vertex
// numbering driven by the sorted target darts, followed by the face lines
// normalized over rotation and orientation. Pointed-equivalent covers and
// only those produce equal keys.
std::string canonical_key(const ComplexMap& h, const Name& z0) {
  const TwoComplex& zc = *h.source;
  const TwoComplex& xc = *h.target;
  std::map<Name, std::size_t> idx;
  std::vector<Name> order{z0};
  idx[z0] = 0;
  std::ostringstream out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const Name& xd : xc.skel.darts_at(h.vertex_image(order[i]))) {
      const Name d = dart_over_map(h, order[i], xd);
      const Name w = zc.skel.dart_dst(d);
      auto [it, fresh] = idx.try_emplace(w, order.size());
      if (fresh) order.push_back(w);
      out << i << ' ' << xd << ' ' << it->second << '\n';
    }
  }
  if (order.size() != zc.skel.vertices.size())
    fail(Errc::NotConnected, "canonical key requires a connected source");
  std::vector<std::string> flines;
  for (const Name& s0 : zc.face_names()) {
    std::string best;
    for (const Name& s : {s0, inverse(s0)}) {
      FaceImage fi = h.face_image(s);
      std::vector<Name> w = zc.boundary(s);
      const std::size_t n = w.size();
      for (std::size_t r = 0; r < n; ++r) {
        std::ostringstream line;
        line << fi.face << ' ' << (fi.offset + r) % n;
        for (std::size_t i = 0; i < n; ++i) {
          const Name& d = w[(i + r) % n];
          line << ' ' << idx.at(zc.skel.dart_src(d)) << ':' << h.dart_image(d);
        }
        if (best.empty() || line.str() < best) best = line.str();
      }
    }
    flines.push_back(best);
  }
  std::sort(flines.begin(), flines.end());
  for (const std::string& l : flines) out << l << '\n';
  return out.str();
}

ComplexMap restrict_map(const ComplexMap& m,
                        std::shared_ptr<const TwoComplex> sub) {
  ComplexMap r;
  r.source = sub;
  r.target = m.target;
  for (const Name& v : sub->skel.vertices) r.set_vertex(v, m.vertex_image(v));
  for (const auto& [d, s] : sub->skel.src) {
    if (is_inverse(d)) continue;
    if (m.dart_collapses(d))
      r.set_dart_collapsed(d, m.dart_collapse_vertex(d));
    else
      r.set_dart(d, m.dart_image(d));
  }
  for (const Name& f : sub->face_names()) r.set_face(f, m.face_image(f));
  return r;
}

ComplexMap retarget(ComplexMap m, std::shared_ptr<const TwoComplex> target) {
  m.target = std::move(target);
  return m;
}

IntermediateCover make_ic(CoveringCert upper, CoveringCert lower, Name pointing) {
  std::string key = canonical_key(lower.map, pointing);
  return {std::move(upper), std::move(lower), std::move(pointing), std::move(key)};
}

std::string strip_code(const std::string& what) {
  std::size_t p = what.find(": ");
  return p == std::string::npos ? what : what.substr(p + 2);
}

DeckTransform validate_deck(const CoveringCert& c, ComplexMap a,
                            const std::vector<Name>& verts,
                            const std::map<Name, int>& index) {
  if (!is_isomorphism(a))
    fail(Errc::DaggerFails, "the lifted map is not an automorphism");
  if (!compose_maps(c.map, a).same_maps(c.map))
    fail(Errc::DaggerFails, "the lifted map does not commute with the covering");
  Permutation p = vertex_perm(a, verts, index);
  if (!p.is_identity())
    for (std::size_t i = 0; i < p.img.size(); ++i)
      if (p.img[i] == static_cast<int>(i))
        fail(Errc::DaggerFails,
             "a non-identity automorphism fixes vertex '" + verts[i] + "'");
  return {std::move(a), std::move(p)};
}

CoverPoset poset_view(const CoverLattice& l) {
  return {l.elements, l.leq, l.bottom, l.top};
}

// Join of two intermediate covers as the basepoint component of the fibered
// product of their lower legs; the mediating map from the top cover is the
// upper leg.
IntermediateCover pullback_join(const IntermediateCover& a,
                                const IntermediateCover& b) {
  PullbackResult pb = pullback(a.h.map, b.h.map);
  const Name pv = a.pointing + "|" + b.pointing;
  auto comp =
      std::make_shared<TwoComplex>(component_containing(*pb.complex, pv));
  ComplexMap proj = restrict_map(compose_maps(a.h.map, pb.t1), comp);
  ComplexMap med = retarget(pullback_factorize(pb, a.g.map, b.g.map), comp);
  return make_ic(check_covering(med), check_covering(proj), pv);
}

// Meet of two intermediate covers as the pushout of their upper legs, with
// the mediating map to the base as the lower leg.
IntermediateCover pushout_meet(const IntermediateCover& a,
                               const IntermediateCover& b) {
  PushoutResult po = pushout(a.g.map, b.g.map);
  ComplexMap down = pushout_factorize(po, a.h.map, b.h.map);
  ComplexMap up = compose_maps(po.t1, a.g.map);
  return make_ic(check_covering(up), check_covering(down),
                 po.t1.vertex_image(a.pointing));
}

EquivalenceResult try_pointed(const IntermediateCover& a,
                              const IntermediateCover& b, const Name& zb,
                              bool check_upper) {
  EquivalenceResult r;
  if (a.h.degree != b.h.degree) return r;
  ComplexMap iso;
  try {
    iso = lift_map(b.h, a.h.map, a.pointing, zb);
  } catch (const Error& e) {
    if (e.code() == Errc::SubgroupConditionFails) return r;
    throw;
  }
  if (!is_isomorphism(iso)) return r;
  if (!compose_maps(b.h.map, iso).same_maps(a.h.map)) return r;
  if (check_upper && !compose_maps(iso, a.g.map).same_maps(b.g.map)) return r;
  r.equivalent = true;
  r.iso = std::move(iso);
  return r;
}

void require_same_tower(const IntermediateCover& a, const IntermediateCover& b,
                        const char* who) {
  if (!same_complex(a.g.map.source, b.g.map.source) ||
      !same_complex(a.h.map.target, b.h.map.target))
    fail(Errc::DomainMismatch,
         std::string(who) + ": the two intermediate covers do not sit in the "
                            "same tower");
}

// The map between the collapsed complexes induced by a square of quotients:
// g: Y -> Z downstairs, qY and qZ the two collapses. Entries are transported
// memberwise and the square is verified to commute afterwards.
ComplexMap induced_between(const ComplexMap& qY, const ComplexMap& qZ,
                           const ComplexMap& g) {
  ComplexMap right = compose_maps(qZ, g);
  ComplexMap gp;
  gp.source = qY.target;
  gp.target = qZ.target;
  for (const auto& [y, yp] : qY.vmap) gp.set_vertex(yp, right.vertex_image(y));
  for (const auto& [d, s] : g.source->skel.src) {
    if (is_inverse(d) || qY.dart_collapses(d)) continue;
    const Name& dp = qY.dart_image(d);
    if (right.dart_collapses(d))
      gp.set_dart_collapsed(dp, right.dart_collapse_vertex(d));
    else
      gp.set_dart(dp, right.dart_image(d));
  }
  for (const auto& [s, w] : g.source->faces) {
    FaceImage qi = qY.face_image(s);
    if (qi.kind != FaceImage::ToFace) continue;
    FaceImage ri = right.face_image(s);
    if (ri.kind != FaceImage::ToFace)
      fail(Errc::NotCovering,
           "face '" + s + "' survives one collapse but not the other");
    std::size_t n = gp.target->face_size(ri.face);
    gp.set_face(qi.face,
                FaceImage::to_face(ri.face, (ri.offset + n - qi.offset % n) % n));
  }
  if (!compose_maps(gp, qY).same_maps(right))
    fail(Errc::NotCovering, "the collapse square does not commute");
  return gp;
}

// Intermediate cover determined by a subgroup K between the monodromy
// stabilizer of the basepoint and the whole monodromy group: middle cells
// are the orbits of the block system generated by the K-orbit of the
// basepoint index, transported along tree-path lifts.
IntermediateCover block_quotient(const CoveringCert& c,
                                 const std::vector<Name>& fiber,
                                 const std::map<Name, std::size_t>& transport,
                                 const PermGroup& g, const PermGroup& k) {
  const ComplexMap& f = c.map;
  const TwoComplex& y = *f.source;
  const std::size_t n = fiber.size();

  std::set<int> b0;
  for (const Permutation& p : k.elements) b0.insert(p(0));
  std::vector<int> blockof(n, -1);
  std::set<std::vector<int>> seen;
  int nblocks = 0;
  for (const Permutation& p : g.elements) {
    std::vector<int> img;
    for (int i : b0) img.push_back(p(i));
    std::sort(img.begin(), img.end());
    if (!seen.insert(img).second) continue;
    for (int i : img) {
      if (blockof[static_cast<std::size_t>(i)] != -1)
        fail(Errc::NotSubgroup, "the orbit of the basepoint is not a block");
      blockof[static_cast<std::size_t>(i)] = nblocks;
    }
    ++nblocks;
  }

  std::map<std::pair<Name, int>, Name> rep;
  for (const Name& v : y.skel.vertices) {
    std::pair<Name, int> key{f.vertex_image(v), blockof[transport.at(v)]};
    auto it = rep.find(key);
    if (it == rep.end() || v < it->second) rep[key] = v;
  }
  std::map<Name, Name> cls;
  for (const Name& v : y.skel.vertices)
    cls[v] = rep.at({f.vertex_image(v), blockof[transport.at(v)]});

  auto z = std::make_shared<TwoComplex>();
  for (const auto& [key, r] : rep) z->skel.vertices.insert(r);

  std::map<std::pair<Name, Name>, std::vector<Name>> dclass;
  for (const auto& [d, s] : y.skel.src)
    dclass[{cls.at(s), f.dart_image(d)}].push_back(d);
  std::map<Name, Name> zd;
  std::set<std::pair<Name, Name>> handled;
  for (const auto& [key, members] : dclass) {
    if (handled.count(key)) continue;
    const Name& d0 = members.front();
    std::pair<Name, Name> pkey{cls.at(y.skel.dart_dst(d0)),
                               f.dart_image(inverse(d0))};
    handled.insert(key);
    handled.insert(pkey);
    Name arc;
    for (const Name& d : members)
      if (arc.empty() || base_of(d) < arc) arc = base_of(d);
    for (const Name& d : dclass.at(pkey))
      if (base_of(d) < arc) arc = base_of(d);
    bool arc_in_key = std::count(members.begin(), members.end(), arc) > 0;
    const std::vector<Name>& positive = arc_in_key ? members : dclass.at(pkey);
    const std::vector<Name>& negative = arc_in_key ? dclass.at(pkey) : members;
    for (const Name& d : positive) zd[d] = arc;
    for (const Name& d : negative) zd[d] = inverse(arc);
    z->skel.src[arc] = cls.at(y.skel.dart_src(arc));
    z->skel.src[inverse(arc)] = cls.at(y.skel.dart_dst(arc));
  }

  std::map<std::tuple<Name, Name, std::size_t>, std::vector<Name>> fclass;
  for (const auto& [s, w] : y.faces) {
    FaceImage fi = f.face_image(s);
    fclass[{cls.at(y.skel.dart_src(w[0])), fi.face, fi.offset}].push_back(s);
  }
  std::map<Name, Name> fc;
  for (const auto& [key, members] : fclass) {
    const Name& s0 = members.front();
    std::vector<Name> word;
    for (const Name& d : y.faces.at(s0)) word.push_back(zd.at(d));
    z->add_face(s0, std::move(word));
    for (const Name& s : members) fc[s] = s0;
  }

  ComplexMap gm;
  gm.source = f.source;
  gm.target = z;
  for (const auto& [v, r] : cls) gm.set_vertex(v, r);
  for (const auto& [d, s] : y.skel.src)
    if (!is_inverse(d)) gm.set_dart(d, zd.at(d));
  for (const auto& [s, r] : fc) gm.set_face(s, FaceImage::to_face(r, 0));

  ComplexMap hm;
  hm.source = z;
  hm.target = f.target;
  for (const auto& [key, r] : rep) hm.set_vertex(r, key.first);
  for (const auto& [d, s] : z->skel.src)
    if (!is_inverse(d)) hm.set_dart(d, f.dart_image(d));
  for (const auto& [key, members] : fclass)
    hm.set_face(fc.at(members.front()),
                FaceImage::to_face(std::get<1>(key), std::get<2>(key)));

  if (!compose_maps(hm, gm).same_maps(f))
    fail(Errc::NotCovering, "the block quotient does not factor the covering");
  return make_ic(check_covering(gm), check_covering(hm), cls.at(fiber[0]));
}

}  // namespace

DeckTransform automorphism_from_vertices(const CoveringCert& c, const Name& u,
                                         const Name& u2) {
  const TwoComplex& y = *c.map.source;
  if (!y.skel.vertices.count(u))
    fail(Errc::UnknownCell, "automorphism_from_vertices: unknown vertex '" + u + "'");
  if (!y.skel.vertices.count(u2))
    fail(Errc::UnknownCell, "automorphism_from_vertices: unknown vertex '" + u2 + "'");
  std::vector<Name> verts = sorted_vertices(y);
  std::map<Name, int> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = static_cast<int>(i);
  try {
    return validate_deck(c, lift_map(c, c.map, u, u2), verts, index);
  } catch (const Error& e) {
    if (e.code() == Errc::SubgroupConditionFails)
      fail(Errc::DaggerFails, "no automorphism sends '" + u + "' to '" + u2 +
                                  "': " + strip_code(e.what()));
    throw;
  }
}

GaloisGroup galois_group(const CoveringCert& c, const Name& v) {
  if (!is_connected(*c.map.source))
    fail(Errc::NotConnected, "galois_group: the covering complex is disconnected");
  GaloisGroup g;
  g.cert = c;
  g.basepoint = v;
  g.fiber = c.fiber(v);
  std::vector<Name> verts = sorted_vertices(*c.map.source);
  std::map<Name, int> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index[verts[i]] = static_cast<int>(i);
  const Name u = g.fiber.front();
  for (const Name& u2 : g.fiber) {
    try {
      g.elements.push_back(automorphism_from_vertices(c, u, u2));
    } catch (const Error& e) {
      if (e.code() != Errc::DaggerFails) throw;
    }
  }
  std::sort(g.elements.begin(), g.elements.end(),
            [](const DeckTransform& a, const DeckTransform& b) {
              return a.vertex_action < b.vertex_action;
            });
  std::vector<Permutation> perms;
  for (const DeckTransform& a : g.elements) perms.push_back(a.vertex_action);
  for (const Permutation& a : perms)
    for (const Permutation& b : perms)
      if (!std::binary_search(perms.begin(), perms.end(), a * b))
        fail(Errc::NotCovering, "galois_group: deck transformations failed to close");
  if (c.degree % g.elements.size() != 0)
    fail(Errc::NotCovering, "galois_group: order does not divide the degree");
  g.perm_rep.degree = verts.size();
  g.perm_rep.generators = perms;
  g.perm_rep.elements = std::move(perms);
  return g;
}

GaloisVerdict is_galois(const CoveringCert& c) {
  const Name v = *c.map.target->skel.vertices.begin();
  GaloisGroup g = galois_group(c, v);
  GaloisVerdict r;
  r.degree = c.degree;
  r.group_order = g.order();
  r.galois = r.group_order == r.degree;
  if (r.galois) {
    r.witness = "the deck group acts transitively on the fiber over '" + v + "'";
  } else {
    const Name& u = g.fiber.front();
    std::set<Name> hit;
    for (const DeckTransform& a : g.elements)
      hit.insert(a.automorphism.vertex_image(u));
    for (const Name& u2 : g.fiber)
      if (!hit.count(u2)) {
        r.witness = "no automorphism carries '" + u + "' to '" + u2 + "'";
        break;
      }
  }
  return r;
}

IntermediateCover quotient_by_deck_subgroup(const GaloisGroup& gal,
                                            const PermGroup& h) {
  if (h.degree != gal.perm_rep.degree)
    fail(Errc::NotSubgroup,
         "quotient_by_deck_subgroup: the subgroup acts on the wrong vertex set");
  if (h.elements.empty() ||
      !std::binary_search(h.elements.begin(), h.elements.end(),
                          Permutation::identity(h.degree)))
    fail(Errc::NotSubgroup, "quotient_by_deck_subgroup: missing identity");
  for (const Permutation& a : h.elements)
    for (const Permutation& b : h.elements)
      if (!std::binary_search(h.elements.begin(), h.elements.end(), a * b))
        fail(Errc::NotSubgroup, "quotient_by_deck_subgroup: not closed under products");
  std::vector<ComplexMap> maps;
  for (const Permutation& p : h.elements) {
    bool found = false;
    for (const DeckTransform& a : gal.elements)
      if (a.vertex_action == p) {
        maps.push_back(a.automorphism);
        found = true;
        break;
      }
    if (!found)
      fail(Errc::NotSubgroup,
           "quotient_by_deck_subgroup: " + p.cycle_string() +
               " is not a deck transformation");
  }
  QuotientResult qr =
      quotient_by_group_action(make_group_action(gal.cert.map.source, maps));
  const ComplexMap& f = gal.cert.map;
  ComplexMap lower;
  lower.source = qr.complex;
  lower.target = f.target;
  for (const auto& [y, z] : qr.q.vmap) lower.set_vertex(z, f.vertex_image(y));
  for (const auto& [d, e] : qr.q.dmap)
    if (!is_inverse(d)) lower.set_dart(e, f.dart_image(d));
  for (const auto& [s, fi] : qr.q.fmap) {
    FaceImage fo = f.face_image(s);
    std::size_t n = f.target->face_size(fo.face);
    lower.set_face(fi.face,
                   FaceImage::to_face(fo.face, (fo.offset + n - fi.offset % n) % n));
  }
  if (!compose_maps(lower, qr.q).same_maps(f))
    fail(Errc::NotCovering,
         "quotient_by_deck_subgroup: the quotient does not factor the covering");
  IntermediateCover ic = make_ic(check_covering(qr.q), check_covering(lower),
                                 qr.q.vertex_image(gal.fiber.front()));
  if (gal.order() == gal.cert.degree &&
      ic.h.degree * h.elements.size() != gal.order())
    fail(Errc::NotCovering,
         "quotient_by_deck_subgroup: degree does not equal the subgroup index");
  return ic;
}

PermGroup deck_group_of_intermediate(const GaloisGroup& gal,
                                     const IntermediateCover& ic) {
  if (!same_complex(ic.g.map.source, gal.cert.map.source))
    fail(Errc::DomainMismatch,
         "deck_group_of_intermediate: the cover does not factor this group's "
         "covering");
  std::vector<Permutation> sub;
  for (const DeckTransform& a : gal.elements)
    if (compose_maps(ic.g.map, a.automorphism).same_maps(ic.g.map))
      sub.push_back(a.vertex_action);
  std::sort(sub.begin(), sub.end());
  PermGroup h;
  h.degree = gal.perm_rep.degree;
  h.generators = sub;
  h.elements = std::move(sub);
  return h;
}

EquivalenceResult are_equivalent(const IntermediateCover& a,
                                 const IntermediateCover& b) {
  require_same_tower(a, b, "are_equivalent");
  return try_pointed(a, b, b.pointing, true);
}

EquivalenceResult are_equivalent_unpointed(const IntermediateCover& a,
                                           const IntermediateCover& b) {
  require_same_tower(a, b, "are_equivalent_unpointed");
  const Name v = a.h.map.vertex_image(a.pointing);
  for (const Name& zb : b.h.fiber(v)) {
    EquivalenceResult r = try_pointed(a, b, zb, false);
    if (r.equivalent) return r;
  }
  return {};
}

IntermediateLattice intermediate_lattice(const CoveringCert& c, const Name& v) {
  IntermediateLattice L;
  L.gal = galois_group(c, v);
  if (L.gal.order() != c.degree)
    fail(Errc::NotGalois, "intermediate_lattice: the deck group has order " +
                              std::to_string(L.gal.order()) +
                              " on a covering of degree " +
                              std::to_string(c.degree));
  L.subgroups = subgroup_lattice(L.gal.perm_rep);
  const std::size_t m = L.subgroups.subgroups.size();
  for (std::size_t k = 0; k < m; ++k) {
    L.covers.elements.push_back(
        quotient_by_deck_subgroup(L.gal, L.subgroups.subgroups[k]));
    L.psi.push_back(static_cast<int>(k));
  }
  for (std::size_t i = 0; i < m; ++i) {
    PermGroup h = deck_group_of_intermediate(L.gal, L.covers.elements[i]);
    int j = -1;
    for (std::size_t k = 0; k < m; ++k)
      if (L.subgroups.subgroups[k].elements == h.elements) {
        j = static_cast<int>(k);
        break;
      }
    if (j < 0)
      fail(Errc::NotCovering,
           "intermediate_lattice: recovered deck group is not in the lattice");
    L.phi.push_back(j);
  }
  for (std::size_t k = 0; k < m; ++k)
    if (L.phi[static_cast<std::size_t>(L.psi[k])] != static_cast<int>(k))
      fail(Errc::NotCovering,
           "intermediate_lattice: the correspondence maps do not invert each "
           "other");
  for (std::size_t i = 0; i < m; ++i)
    if (L.covers.elements[i].h.degree *
            L.subgroups.subgroups[static_cast<std::size_t>(L.phi[i])].order() !=
        L.gal.order())
      fail(Errc::NotCovering,
           "intermediate_lattice: degree does not match the subgroup index");

  L.covers.leq.assign(m, std::vector<bool>(m, false));
  L.covers.join.assign(m, std::vector<int>(m, 0));
  L.covers.meet.assign(m, std::vector<int>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t hi = static_cast<std::size_t>(L.phi[i]);
      std::size_t hj = static_cast<std::size_t>(L.phi[j]);
      L.covers.leq[i][j] = L.subgroups.leq[hj][hi];
      L.covers.join[i][j] = L.psi[static_cast<std::size_t>(L.subgroups.meet[hi][hj])];
      L.covers.meet[i][j] = L.psi[static_cast<std::size_t>(L.subgroups.join[hi][hj])];
    }
  L.covers.bottom = L.psi[static_cast<std::size_t>(L.subgroups.top)];
  L.covers.top = L.psi[static_cast<std::size_t>(L.subgroups.bottom)];

  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      IntermediateCover jn = pullback_join(L.covers.elements[i], L.covers.elements[j]);
      if (!are_equivalent(jn, L.covers.elements[static_cast<std::size_t>(
                                  L.covers.join[i][j])])
               .equivalent)
        fail(Errc::NotCovering,
             "intermediate_lattice: a join is not realized by the pullback "
             "component");
      IntermediateCover mt = pushout_meet(L.covers.elements[i], L.covers.elements[j]);
      if (!are_equivalent(mt, L.covers.elements[static_cast<std::size_t>(
                                  L.covers.meet[i][j])])
               .equivalent)
        fail(Errc::NotCovering,
             "intermediate_lattice: a meet is not realized by the pushout");
    }

  for (std::size_t i = 0; i < m; ++i) {
    const PermGroup& h = L.subgroups.subgroups[static_cast<std::size_t>(L.phi[i])];
    bool nrm = is_normal(h, L.gal.perm_rep);
    GaloisVerdict gv = is_galois(L.covers.elements[i].h);
    if (nrm != gv.galois)
      fail(Errc::NotCovering,
           "intermediate_lattice: normal subgroups must match Galois legs");
    if (!nrm) continue;
    const ComplexMap& q = L.covers.elements[i].g.map;
    std::vector<Name> zv = sorted_vertices(*q.target);
    std::map<Name, int> zidx;
    for (std::size_t k = 0; k < zv.size(); ++k) zidx[zv[k]] = static_cast<int>(k);
    std::set<Permutation> image;
    for (const DeckTransform& a : L.gal.elements) {
      Permutation th;
      th.img.assign(zv.size(), -1);
      for (const auto& [y, z] : q.vmap) {
        int zi = zidx.at(z);
        int ti = zidx.at(q.vertex_image(a.automorphism.vertex_image(y)));
        if (th.img[static_cast<std::size_t>(zi)] == -1)
          th.img[static_cast<std::size_t>(zi)] = ti;
        else if (th.img[static_cast<std::size_t>(zi)] != ti)
          fail(Errc::NotCovering,
               "intermediate_lattice: a deck transformation does not descend");
      }
      if (th.is_identity() != h.contains(a.vertex_action))
        fail(Errc::NotCovering,
             "intermediate_lattice: the kernel of the descent is not the "
             "subgroup");
      image.insert(th);
    }
    if (image.size() * h.order() != L.gal.order() ||
        image.size() != gv.group_order)
      fail(Errc::NotCovering,
           "intermediate_lattice: the descended group is not the deck group "
           "of the leg");
  }
  return L;
}

CoverPoset intermediate_poset(const CoveringCert& c, const Name& v) {
  if (!is_connected(*c.map.source))
    fail(Errc::NotConnected, "intermediate_poset: the covering complex is disconnected");
  Graph tree = spanning_tree(c.map.target->skel, v);
  Monodromy mo = monodromy(c, v, tree);
  const std::size_t n = mo.fiber.size();
  std::vector<Permutation> gens;
  for (const auto& [arc, p] : mo.action) gens.push_back(p);
  if (gens.empty()) gens.push_back(Permutation::identity(n));
  PermGroup g = closure(n, gens);
  std::vector<Permutation> stab;
  for (const Permutation& p : g.elements)
    if (p(0) == 0) stab.push_back(p);
  std::map<Name, std::size_t> fidx;
  for (std::size_t i = 0; i < n; ++i) fidx[mo.fiber[i]] = i;
  std::map<Name, std::size_t> transport;
  for (const Name& y : c.map.source->skel.vertices) {
    Path lifted = lift_path(c, tree_path(tree, c.map.vertex_image(y), v), y);
    transport[y] = fidx.at(c.map.source->skel.path_end(lifted));
  }
  CoverPoset P;
  std::vector<std::vector<Permutation>> kept;
  for (const PermGroup& k : all_subgroups(g)) {
    if (!std::includes(k.elements.begin(), k.elements.end(), stab.begin(),
                       stab.end()))
      continue;
    kept.push_back(k.elements);
    P.elements.push_back(block_quotient(c, mo.fiber, transport, g, k));
  }
  const std::size_t m = kept.size();
  P.leq.assign(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      P.leq[i][j] = std::includes(kept[i].begin(), kept[i].end(),
                                  kept[j].begin(), kept[j].end());
  for (std::size_t i = 0; i < m; ++i) {
    if (kept[i].size() == g.order()) P.bottom = static_cast<int>(i);
    if (kept[i] == stab) P.top = static_cast<int>(i);
  }
  return P;
}

InverseGaloisResult inverse_galois(const std::vector<Permutation>& gens) {
  if (gens.empty())
    fail(Errc::UsageError, "inverse_galois: at least one generator is required");
  if (gens.size() > 26)
    fail(Errc::TooLarge, "inverse_galois: at most 26 generators are supported");
  for (const Permutation& p : gens)
    if (p.degree() != gens.front().degree())
      fail(Errc::UsageError, "inverse_galois: generators have mixed degrees");
  PermGroup a = closure(gens.front().degree(), gens);

  auto x = std::make_shared<TwoComplex>();
  x->skel.vertices.insert("o");
  CosetTable t;
  t.status = CosetTable::Status::Closed;
  t.bound = a.order();
  for (std::size_t j = 0; j < gens.size(); ++j) {
    Name loop(1, static_cast<char>('a' + j));
    x->skel.src[loop] = "o";
    x->skel.src[loop + "^"] = "o";
    t.generators.push_back(loop);
  }
  std::map<Permutation, std::size_t> eidx;
  for (std::size_t i = 0; i < a.order(); ++i) eidx[a.elements[i]] = i;
  t.rows.resize(a.order());
  for (std::size_t i = 0; i < a.order(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) {
      t.rows[i][t.generators[j]] = eidx.at(a.elements[i] * gens[j]);
      t.rows[i][t.generators[j] + "^"] = eidx.at(a.elements[i] * gens[j].inverse());
    }
  Graph tree;
  tree.vertices.insert("o");
  InverseGaloisResult r{bottom_up_cover(x, "o", tree, t), {}};
  r.galois = galois_group(r.cert, "o");
  if (r.galois.order() != a.order() || !groups_isomorphic(r.galois.perm_rep, a))
    fail(Errc::NotCovering,
         "inverse_galois: the Schreier cover did not realize the group");
  return r;
}

LatticeExcision lattice_excision(const CoveringCert& c, const TwoComplex& z,
                                 std::size_t max_len, std::size_t max_moves) {
  LatticeExcision r;
  r.whole = excise(c, z, max_len, max_moves);
  const Name v = *c.map.target->skel.vertices.begin();
  const Name va = r.whole.target_quotient.vertex_image(v);
  GaloisVerdict before = is_galois(c);
  GaloisVerdict after = is_galois(r.whole.cover);
  r.gal_before = before.group_order;
  r.gal_after = after.group_order;
  if (before.galois != after.galois || before.group_order != after.group_order)
    fail(Errc::NotCovering, "lattice_excision: the deck group was not preserved");
  if (!groups_isomorphic(galois_group(c, v).perm_rep,
                         galois_group(r.whole.cover, va).perm_rep))
    fail(Errc::NotCovering,
         "lattice_excision: the deck groups are no longer isomorphic");

  std::vector<std::vector<int>> bjoin, bmeet, ajoin, ameet;
  if (before.galois) {
    IntermediateLattice lb = intermediate_lattice(c, v);
    IntermediateLattice la = intermediate_lattice(r.whole.cover, va);
    r.before = poset_view(lb.covers);
    r.after = poset_view(la.covers);
    bjoin = lb.covers.join;
    bmeet = lb.covers.meet;
    ajoin = la.covers.join;
    ameet = la.covers.meet;
    r.lattice_checked = true;
  } else {
    r.before = intermediate_poset(c, v);
    r.after = intermediate_poset(r.whole.cover, va);
  }
  if (r.before.elements.size() != r.after.elements.size())
    fail(Errc::NotCovering,
         "lattice_excision: the two sides have different element counts");

  const Name ua = r.whole.cover.fiber(va).front();
  const std::size_t m = r.before.elements.size();
  std::vector<bool> used(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    const IntermediateCover& w = r.before.elements[i];
    ExciseResult ei = excise(w.h, z, max_len, max_moves);
    ComplexMap gp =
        induced_between(r.whole.source_quotient, ei.source_quotient, w.g.map);
    IntermediateCover wi =
        make_ic(check_covering(gp), ei.cover, gp.vertex_image(ua));
    int match = -1;
    for (std::size_t j = 0; j < m; ++j)
      if (!used[j] && are_equivalent(wi, r.after.elements[j]).equivalent) {
        match = static_cast<int>(j);
        break;
      }
    if (match < 0)
      fail(Errc::NotCovering,
           "lattice_excision: an excised intermediate cover has no "
           "counterpart");
    used[static_cast<std::size_t>(match)] = true;
    r.matching.push_back(match);
    if (w.h.degree != wi.h.degree)
      fail(Errc::NotCovering, "lattice_excision: excision changed a degree");
    GaloisVerdict wb = is_galois(w.h);
    GaloisVerdict wa = is_galois(wi.h);
    if (wb.galois != wa.galois || wb.group_order != wa.group_order)
      fail(Errc::NotCovering,
           "lattice_excision: excision changed the deck group of a leg");
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (r.before.leq[i][j] !=
          r.after.leq[static_cast<std::size_t>(r.matching[i])]
                     [static_cast<std::size_t>(r.matching[j])])
        fail(Errc::NotCovering, "lattice_excision: the order relation changed");
  if (r.lattice_checked) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t mi = static_cast<std::size_t>(r.matching[i]);
        std::size_t mj = static_cast<std::size_t>(r.matching[j]);
        if (r.matching[static_cast<std::size_t>(bjoin[i][j])] != ajoin[mi][mj] ||
            r.matching[static_cast<std::size_t>(bmeet[i][j])] != ameet[mi][mj])
          fail(Errc::NotCovering,
               "lattice_excision: joins or meets were not preserved");
      }
  }
  return r;
}

bool is_completely_irregular(const CoveringCert& c) {
  if (!c.map.source->faces.empty() || !c.map.target->faces.empty())
    fail(Errc::NotGraph,
         "is_completely_irregular: defined for graph coverings only");
  if (!is_connected(*c.map.source))
    fail(Errc::NotConnected,
         "is_completely_irregular: the covering graph is disconnected");
  PullbackResult pb = pullback(c.map, c.map);
  const Name y0 = *c.map.source->skel.vertices.begin();
  const Name diag = y0 + "|" + y0;
  ComponentsResult comps = components(pb.complex->skel);
  for (std::size_t i = 0; i < comps.blocks.size(); ++i) {
    bool is_diag = false;
    for (const Name& w : comps.blocks[i])
      if (w == diag) {
        is_diag = true;
        break;
      }
    if (is_diag) continue;
    const Graph& sub = comps.subgraphs[i];
    if (sub.src.size() / 2 + 1 != sub.vertices.size()) return false;
  }
  return true;
}

}  // namespace cx
