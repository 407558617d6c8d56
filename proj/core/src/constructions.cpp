#include "cx/constructions.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <optional>

namespace cx {
namespace {

TwoComplex prefixed(const TwoComplex& x, const std::string& p) {
  TwoComplex out;
  for (const Name& v : x.skel.vertices) out.skel.add_vertex(p + v);
  for (const Name& a : x.skel.arcs())
    out.skel.add_arc(p + a, p + x.skel.dart_src(a), p + x.skel.dart_dst(a));
  for (const auto& [f, w] : x.faces) {
    std::vector<Name> pw;
    pw.reserve(w.size());
    for (const Name& d : w)
      pw.push_back(is_inverse(d) ? p + base_of(d) + "^" : p + d);
    out.add_face(p + f, std::move(pw));
  }
  return out;
}

void pour(TwoComplex& into, const TwoComplex& x) {
  for (const Name& v : x.skel.vertices) into.skel.add_vertex(v);
  for (const Name& a : x.skel.arcs())
    into.skel.add_arc(a, x.skel.dart_src(a), x.skel.dart_dst(a));
  for (const auto& [f, w] : x.faces) into.add_face(f, w);
}

std::vector<Name> inverted_word(const std::vector<Name>& w) {
  std::vector<Name> out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

// Least rotation r with base[(i+r) mod n] == w[i] for all i.
std::optional<std::size_t> rotation_matching(const std::vector<Name>& base,
                                             const std::vector<Name>& w) {
  if (base.size() != w.size()) return std::nullopt;
  std::size_t n = base.size();
  for (std::size_t r = 0; r < n; ++r) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = base[(i + r) % n] == w[i];
    if (ok) return r;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generated quotient relation over the cells of one complex. Cell keys are a
// kind tag ('v', 'd', 'f') followed by the cell name; darts and faces are
// keyed in both orientations.

using QC = std::pair<char, Name>;

struct CellDsu {
  std::map<std::string, std::string> parent;

  void add(const std::string& k) { parent.emplace(k, k); }

  std::string find(const std::string& k) {
    std::string root = k;
    while (parent.at(root) != root) root = parent.at(root);
    std::string cur = k;
    while (parent.at(cur) != root) {
      std::string next = parent.at(cur);
      parent[cur] = root;
      cur = next;
    }
    return root;
  }

  bool unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
    return true;
  }
};

std::string qkey(const QC& c) { return std::string(1, c.first) + c.second; }

QC inv_of(const QC& c) {
  if (c.first == 'v') return c;
  return {c.first, inverse(c.second)};
}

QuotientResult build_quotient(std::shared_ptr<const TwoComplex> xs,
                              const std::vector<std::pair<QC, QC>>& gens) {
  const TwoComplex& x = *xs;
  CellDsu dsu;
  for (const Name& v : x.skel.vertices) dsu.add(qkey({'v', v}));
  for (const auto& [d, s] : x.skel.src) dsu.add(qkey({'d', d}));
  for (const Name& f : x.all_face_names()) dsu.add(qkey({'f', f}));

  std::deque<std::pair<QC, QC>> work(gens.begin(), gens.end());
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    if (!dsu.unite(qkey(a), qkey(b))) continue;
    work.emplace_back(inv_of(a), inv_of(b));
    if (a.first != 'f' && b.first != 'f' && (a.first == 'd' || b.first == 'd')) {
      auto start = [&](const QC& c) -> QC {
        if (c.first == 'd') return {'v', x.skel.dart_src(c.second)};
        return c;
      };
      work.emplace_back(start(a), start(b));
    }
  }

  std::map<std::string, std::vector<Name>> vmem, dmem, fmem;
  for (const Name& v : x.skel.vertices) vmem[dsu.find(qkey({'v', v}))].push_back(v);
  for (const auto& [d, s] : x.skel.src) dmem[dsu.find(qkey({'d', d}))].push_back(d);
  for (const Name& f : x.all_face_names())
    fmem[dsu.find(qkey({'f', f}))].push_back(f);

  // Classes holding a vertex become that vertex; their darts collapse and
  // their faces vanish.
  std::map<std::string, Name> vname;
  for (const auto& [root, vs] : vmem) vname[root] = vs.front();

  // Surviving dart classes: named by the least dart across the class and its
  // mirror (that representative is always '^'-free).
  std::map<std::string, Name> dimg;
  for (const auto& [root, ds] : dmem) {
    if (vname.count(root)) continue;
    Name least = ds.front();
    for (const Name& d : ds) {
      if (dsu.find(qkey({'d', inverse(d)})) == root)
        fail(Errc::NotQuotientRelation, "a class contains the dart '" + d +
                                            "' and its inverse but no vertex");
      least = std::min(least, std::min(d, inverse(d)));
    }
    dimg[root] = dsu.find(qkey({'d', least})) == root ? least : inverse(least);
  }

  // Surviving face classes, same naming rule.
  std::map<std::string, Name> fimg;
  for (const auto& [root, fs] : fmem) {
    if (vname.count(root)) continue;
    if (dmem.count(root))
      fail(Errc::NotQuotientRelation,
           "a face is identified with an edge but no vertex");
    Name least = fs.front();
    for (const Name& f : fs) {
      if (dsu.find(qkey({'f', inverse(f)})) == root)
        fail(Errc::NotQuotientRelation,
             "a class contains the face '" + f + "' and its inverse");
      least = std::min(least, std::min(f, inverse(f)));
    }
    fimg[root] = dsu.find(qkey({'f', least})) == root ? least : inverse(least);
  }

  auto vertex_image = [&](const Name& v) { return vname.at(dsu.find(qkey({'v', v}))); };
  // Quotient word of a face cell's boundary, collapsed darts erased.
  auto quotient_word = [&](const Name& fcell) {
    std::vector<Name> out;
    for (const Name& d : x.boundary(fcell)) {
      std::string r = dsu.find(qkey({'d', d}));
      if (vname.count(r)) continue;
      out.push_back(dimg.at(r));
    }
    return out;
  };

  TwoComplex q;
  for (const auto& [root, name] : vname) q.skel.add_vertex(name);
  for (const Name& a : x.skel.arcs()) {
    std::string r = dsu.find(qkey({'d', a}));
    if (vname.count(r) || dimg.at(r) != a) continue;
    q.skel.add_arc(a, vertex_image(x.skel.dart_src(a)),
                   vertex_image(x.skel.dart_dst(a)));
  }
  std::map<Name, std::vector<Name>> class_word;
  for (const auto& [f, w] : x.faces) {
    std::string r = dsu.find(qkey({'f', f}));
    if (vname.count(r) || fimg.at(r) != f) continue;
    std::vector<Name> qw = quotient_word(f);
    if (qw.empty())
      fail(Errc::NotQuotientRelation,
           "the boundary of face '" + f + "' collapses entirely");
    class_word[f] = qw;
    q.add_face(f, std::move(qw));
  }

  ComplexMap qm;
  qm.source = xs;
  qm.target = std::make_shared<const TwoComplex>(std::move(q));
  for (const Name& v : x.skel.vertices) qm.set_vertex(v, vertex_image(v));
  for (const Name& a : x.skel.arcs()) {
    std::string r = dsu.find(qkey({'d', a}));
    if (vname.count(r))
      qm.set_dart_collapsed(a, vname.at(r));
    else
      qm.set_dart(a, dimg.at(r));
  }
  for (const auto& [f, w] : x.faces) {
    std::string r = dsu.find(qkey({'f', f}));
    std::vector<Name> qw = quotient_word(f);
    if (vname.count(r)) {
      if (!qw.empty())
        fail(Errc::NotQuotientRelation, "face '" + f +
                                            "' collapses onto a vertex but its "
                                            "boundary survives");
      qm.set_face(f, FaceImage::to_path(Path{vname.at(r), {}}));
      continue;
    }
    const Name& target = fimg.at(r);
    std::vector<Name> tw = is_inverse(target)
                               ? inverted_word(class_word.at(base_of(target)))
                               : class_word.at(target);
    std::optional<std::size_t> rot = rotation_matching(tw, qw);
    if (!rot)
      fail(Errc::NotQuotientRelation,
           "the boundary of face '" + f +
               "' does not match its class representative up to rotation");
    qm.set_face(f, FaceImage::to_face(target, *rot));
  }

  QuotientResult res;
  res.complex = qm.target;
  res.q = std::move(qm);
  return res;
}

bool same_complex(const std::shared_ptr<const TwoComplex>& a,
                  const std::shared_ptr<const TwoComplex>& b) {
  return a && b && (a.get() == b.get() || *a == *b);
}

// ---------------------------------------------------------------------------
// Consistent orientation search: boolean variable per arc/face, constraints
// with parities, union-find with parity.

struct ParityDsu {
  std::map<std::string, std::pair<std::string, int>> up;

  std::pair<std::string, int> find(const std::string& k) {
    auto it = up.find(k);
    if (it == up.end()) {
      up[k] = {k, 0};
      return {k, 0};
    }
    if (it->second.first == k) return {k, 0};
    auto [root, par] = find(it->second.first);
    up[k] = {root, (par + it->second.second) & 1};
    return up[k];
  }

  bool unite(const std::string& a, const std::string& b, int parity) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == parity;
    up[rb] = {ra, pa ^ pb ^ parity};
    return true;
  }
};

}  // namespace

TwoComplex disjoint_union(const TwoComplex& a, const TwoComplex& b) {
  TwoComplex out = prefixed(a, "1:");
  pour(out, prefixed(b, "2:"));
  return out;
}

TwoComplex component_containing(const TwoComplex& x, const Name& vertex) {
  if (!x.skel.has_vertex(vertex))
    fail(Errc::UnknownCell, "unknown vertex '" + vertex + "'");
  ComponentsResult cr = components(x.skel);
  for (std::size_t i = 0; i < cr.blocks.size(); ++i) {
    const auto& blk = cr.blocks[i];
    if (std::find(blk.begin(), blk.end(), vertex) == blk.end()) continue;
    TwoComplex out;
    out.skel = cr.subgraphs[i];
    for (const auto& [f, w] : x.faces) {
      bool inside = true;
      for (const Name& d : w)
        if (!out.skel.has_dart(d)) {
          inside = false;
          break;
        }
      if (inside) out.add_face(f, w);
    }
    return out;
  }
  fail(Errc::UnknownCell, "unknown vertex '" + vertex + "'");
}

GroupAction make_group_action(std::shared_ptr<const TwoComplex> complex,
                              std::vector<ComplexMap> generators,
                              std::size_t closure_cap) {
  if (!complex) fail(Errc::UsageError, "group action needs a complex");
  for (const ComplexMap& g : generators) {
    if (!same_complex(g.source, complex) || !same_complex(g.target, complex))
      fail(Errc::DomainMismatch,
           "group action generators must be self-maps of the complex");
    if (!is_isomorphism(g))
      fail(Errc::UsageError, "group action generator is not an automorphism");
  }
  GroupAction a;
  a.complex = complex;
  a.generators = std::move(generators);
  a.closure.push_back(identity_map(complex));
  for (std::size_t i = 0; i < a.closure.size(); ++i) {
    for (const ComplexMap& g : a.generators) {
      ComplexMap next = compose_maps(g, a.closure[i]);
      bool known = false;
      for (const ComplexMap& e : a.closure)
        if (e.same_maps(next)) {
          known = true;
          break;
        }
      if (known) continue;
      if (a.closure.size() >= closure_cap)
        fail(Errc::TooLarge, "group closure exceeds " +
                                 std::to_string(closure_cap) + " elements");
      a.closure.push_back(std::move(next));
    }
  }
  return a;
}

QuotientResult quotient_by_group_action(const GroupAction& a) {
  if (!a.complex) fail(Errc::UsageError, "group action needs a complex");
  const TwoComplex& x = *a.complex;
  std::vector<std::pair<QC, QC>> pairs;
  for (const ComplexMap& g : a.generators) {
    if (!same_complex(g.source, a.complex) || !same_complex(g.target, a.complex))
      fail(Errc::DomainMismatch,
           "group action generators must be self-maps of the complex");
    if (!is_isomorphism(g))
      fail(Errc::UsageError, "group action generator is not an automorphism");
    for (const Name& v : x.skel.vertices)
      pairs.push_back({{'v', v}, {'v', g.vertex_image(v)}});
    for (const Name& arc : x.skel.arcs())
      pairs.push_back({{'d', arc}, {'d', g.dart_image(arc)}});
    for (const auto& [f, w] : x.faces)
      pairs.push_back({{'f', f}, {'f', g.face_image(f).face}});
  }
  try {
    return build_quotient(a.complex, pairs);
  } catch (const Error& e) {
    if (e.code() == Errc::NotQuotientRelation)
      fail(Errc::NotOrientationPreserving,
           std::string("the action identifies a cell with its inverse (") +
               e.what() + ")");
    throw;
  }
}

QuotientResult quotient_by_subcomplexes(std::shared_ptr<const TwoComplex> x,
                                        const std::vector<TwoComplex>& parts) {
  if (!x) fail(Errc::UsageError, "quotient needs a complex");
  std::set<Name> seen_v, seen_a, seen_f;
  std::vector<std::pair<QC, QC>> pairs;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const TwoComplex& part = parts[i];
    if (part.skel.vertices.empty())
      fail(Errc::UsageError, "part " + std::to_string(i + 1) + " is empty");
    if (!is_subcomplex(part, *x))
      fail(Errc::NotSubcomplex,
           "part " + std::to_string(i + 1) + " is not a subcomplex");
    for (const Name& v : part.skel.vertices)
      if (!seen_v.insert(v).second)
        fail(Errc::NotDisjoint, "parts share the vertex '" + v + "'");
    for (const Name& a : part.skel.arcs())
      if (!seen_a.insert(a).second)
        fail(Errc::NotDisjoint, "parts share the arc '" + a + "'");
    for (const auto& [f, w] : part.faces)
      if (!seen_f.insert(f).second)
        fail(Errc::NotDisjoint, "parts share the face '" + f + "'");

    const Name& anchor = *part.skel.vertices.begin();
    for (const Name& v : part.skel.vertices)
      pairs.push_back({{'v', anchor}, {'v', v}});
    for (const Name& a : part.skel.arcs())
      pairs.push_back({{'v', anchor}, {'d', a}});
    for (const auto& [f, w] : part.faces)
      pairs.push_back({{'v', anchor}, {'f', f}});
  }
  return build_quotient(x, pairs);
}

PushoutResult pushout(const ComplexMap& f1, const ComplexMap& f2) {
  if (!same_complex(f1.source, f2.source))
    fail(Errc::DomainMismatch, "pushout legs must share their source");
  if (!is_dimension_preserving(f1) || !is_dimension_preserving(f2))
    fail(Errc::NotDimensionPreserving,
         "pushout legs must be dimension preserving");
  const TwoComplex& y = *f1.source;
  bool single = f1.target.get() == f2.target.get();
  std::string p1 = single ? "" : "1:", p2 = single ? "" : "2:";
  std::shared_ptr<const TwoComplex> ambient =
      single ? f1.target
             : std::make_shared<const TwoComplex>(
                   disjoint_union(*f1.target, *f2.target));

  ParityDsu orient;
  auto leg = [&](const ComplexMap& f, const std::string& p) {
    for (const Name& a : y.skel.arcs()) {
      const Name& img = f.dart_image(a);
      if (!orient.unite("d" + a, "D" + p + base_of(img),
                        is_inverse(img) ? 1 : 0))
        fail(Errc::NotQuotientRelation,
             "the identifications admit no consistent orientations (arc '" +
                 a + "')");
    }
    for (const auto& [g, w] : y.faces) {
      FaceImage fi = f.face_image(g);
      if (!orient.unite("f" + g, "F" + p + base_of(fi.face),
                        is_inverse(fi.face) ? 1 : 0))
        fail(Errc::NotQuotientRelation,
             "the identifications admit no consistent orientations (face '" +
                 g + "')");
    }
  };
  leg(f1, p1);
  leg(f2, p2);

  std::vector<std::pair<QC, QC>> pairs;
  for (const Name& v : y.skel.vertices)
    pairs.push_back(
        {{'v', p1 + f1.vertex_image(v)}, {'v', p2 + f2.vertex_image(v)}});
  for (const Name& a : y.skel.arcs())
    pairs.push_back(
        {{'d', p1 + f1.dart_image(a)}, {'d', p2 + f2.dart_image(a)}});
  for (const auto& [g, w] : y.faces)
    pairs.push_back({{'f', p1 + f1.face_image(g).face},
                     {'f', p2 + f2.face_image(g).face}});

  QuotientResult qr = build_quotient(ambient, pairs);

  PushoutResult out;
  out.complex = qr.complex;
  out.f1 = f1;
  out.f2 = f2;
  if (single) {
    out.t1 = qr.q;
    out.t2 = qr.q;
    return out;
  }
  auto restrict_to = [&](const std::shared_ptr<const TwoComplex>& xi,
                         const std::string& p) {
    ComplexMap t;
    t.source = xi;
    t.target = qr.complex;
    for (const Name& v : xi->skel.vertices)
      t.set_vertex(v, qr.q.vertex_image(p + v));
    for (const Name& a : xi->skel.arcs()) {
      if (qr.q.dart_collapses(p + a))
        t.set_dart_collapsed(a, qr.q.dart_collapse_vertex(p + a));
      else
        t.set_dart(a, qr.q.dart_image(p + a));
    }
    for (const auto& [g, w] : xi->faces) t.set_face(g, qr.q.face_image(p + g));
    return t;
  };
  out.t1 = restrict_to(f1.target, p1);
  out.t2 = restrict_to(f2.target, p2);
  return out;
}

ComplexMap pushout_factorize(const PushoutResult& p, const ComplexMap& g1,
                             const ComplexMap& g2) {
  if (!same_complex(g1.source, p.t1.source) ||
      !same_complex(g2.source, p.t2.source))
    fail(Errc::DomainMismatch, "the maps must start at the pushout summands");
  if (!same_complex(g1.target, g2.target))
    fail(Errc::DomainMismatch, "the maps must share a target");
  if (!compose_maps(g1, p.f1).same_maps(compose_maps(g2, p.f2)))
    fail(Errc::SquareDoesNotCommute, "the outer square does not commute");

  ComplexMap h;
  h.source = p.complex;
  h.target = g1.target;

  auto darts_of = [&](const ComplexMap& t, const ComplexMap& g) {
    const TwoComplex& xi = *t.source;
    for (const Name& v : xi.skel.vertices) {
      const Name& pv = t.vertex_image(v);
      const Name& img = g.vertex_image(v);
      auto it = h.vmap.find(pv);
      if (it == h.vmap.end())
        h.vmap[pv] = img;
      else if (it->second != img)
        fail(Errc::SquareDoesNotCommute,
             "the maps disagree on the identified vertex '" + pv + "'");
    }
    for (const Name& a : xi.skel.arcs()) {
      if (t.dart_collapses(a)) continue;
      Name pd = t.dart_image(a);
      Name m = base_of(pd);
      if (g.dart_collapses(a)) {
        const Name& b = g.dart_collapse_vertex(a);
        if (h.dmap.count(m) ||
            (h.dcollapse.count(m) && h.dcollapse.at(m) != b))
          fail(Errc::SquareDoesNotCommute,
               "the maps disagree on the identified arc '" + m + "'");
        h.set_dart_collapsed(m, b);
      } else {
        Name img = g.dart_image(a);
        if (is_inverse(pd)) img = inverse(img);
        if (h.dcollapse.count(m) ||
            (h.dmap.count(m) && h.dmap.at(m) != img))
          fail(Errc::SquareDoesNotCommute,
               "the maps disagree on the identified arc '" + m + "'");
        h.set_dart(m, img);
      }
    }
  };
  darts_of(p.t1, g1);
  darts_of(p.t2, g2);

  auto faces_of = [&](const ComplexMap& t, const ComplexMap& g) {
    const TwoComplex& xi = *t.source;
    for (const auto& [sig, w] : xi.faces) {
      FaceImage ti = t.face_image(sig);
      FaceImage gi = g.face_image(sig);
      Name m = base_of(ti.face);
      std::size_t n = w.size();
      FaceImage cand;
      if (gi.kind == FaceImage::ToFace) {
        std::size_t off = (gi.offset + n - ti.offset) % n;
        cand = is_inverse(ti.face)
                   ? FaceImage::to_face(inverse(gi.face), (n - off) % n)
                   : FaceImage::to_face(gi.face, off);
      } else {
        // The composite path is read off the dart images; store the full
        // boundary image of the identified face, traversed once.
        Path full;
        const std::vector<Name>& mw = p.complex->boundary(m);
        full.start = h.vertex_image(p.complex->skel.dart_src(mw[0]));
        for (const Name& d : mw)
          if (!h.dart_collapses(d)) full.darts.push_back(h.dart_image(d));
        cand = FaceImage::to_path(std::move(full));
      }
      auto it = h.fmap.find(m);
      if (it == h.fmap.end())
        h.fmap[m] = cand;
      else if (!(it->second == cand))
        fail(Errc::SquareDoesNotCommute,
             "the maps disagree on the identified face '" + m + "'");
    }
  };
  faces_of(p.t1, g1);
  faces_of(p.t2, g2);

  if (!compose_maps(h, p.t1).same_maps(g1) ||
      !compose_maps(h, p.t2).same_maps(g2))
    fail(Errc::SquareDoesNotCommute,
         "no mediating map reproduces both triangles");
  return h;
}

namespace {

Name pair_name(const Name& a, const Name& b) { return a + "|" + b; }

// Cell name of a matched dart or face pair: the representative with a
// '^'-free second coordinate is canonical.
Name matched_cell(const Name& c1, const Name& c2) {
  if (is_inverse(c2)) return pair_name(inverse(c1), inverse(c2)) + "^";
  return pair_name(c1, c2);
}

}  // namespace

PullbackResult pullback(const ComplexMap& f1, const ComplexMap& f2) {
  if (!same_complex(f1.target, f2.target))
    fail(Errc::DomainMismatch, "pullback legs must share their target");
  if (!is_dimension_preserving(f1) || !is_dimension_preserving(f2))
    fail(Errc::NotDimensionPreserving,
         "pullback legs must be dimension preserving");
  const TwoComplex& x1 = *f1.source;
  const TwoComplex& x2 = *f2.source;

  TwoComplex q;
  ComplexMap t1, t2;
  t1.target = f1.source;
  t2.target = f2.source;

  for (const Name& v1 : x1.skel.vertices)
    for (const Name& v2 : x2.skel.vertices) {
      if (f1.vertex_image(v1) != f2.vertex_image(v2)) continue;
      Name v = pair_name(v1, v2);
      q.skel.add_vertex(v);
      t1.set_vertex(v, v1);
      t2.set_vertex(v, v2);
    }
  for (const auto& [d1, s1] : x1.skel.src)
    for (const Name& a2 : x2.skel.arcs()) {
      if (f1.dart_image(d1) != f2.dart_image(a2)) continue;
      Name a = pair_name(d1, a2);
      q.skel.add_arc(a, pair_name(x1.skel.dart_src(d1), x2.skel.dart_src(a2)),
                     pair_name(x1.skel.dart_dst(d1), x2.skel.dart_dst(a2)));
      t1.set_dart(a, d1);
      t2.set_dart(a, a2);
    }
  for (const Name& s1 : x1.all_face_names())
    for (const auto& [s2, w2] : x2.faces) {
      FaceImage i1 = f1.face_image(s1);
      FaceImage i2 = f2.face_image(s2);
      if (i1.face != i2.face) continue;
      std::vector<Name> b1 = x1.boundary(s1);
      if (b1.size() != w2.size())
        fail(Errc::UsageError, "pullback legs carry inconsistent face images");
      std::size_t n = b1.size();
      std::vector<Name> w;
      w.reserve(n);
      for (std::size_t j = 0; j < n; ++j)
        w.push_back(matched_cell(b1[(j + n - i1.offset) % n],
                                 w2[(j + n - i2.offset) % n]));
      Name f = pair_name(s1, s2);
      q.add_face(f, std::move(w));
      t1.set_face(f, FaceImage::to_face(s1, (n - i1.offset) % n));
      t2.set_face(f, FaceImage::to_face(s2, (n - i2.offset) % n));
    }

  PullbackResult out;
  out.complex = std::make_shared<const TwoComplex>(std::move(q));
  t1.source = out.complex;
  t2.source = out.complex;
  out.t1 = std::move(t1);
  out.t2 = std::move(t2);
  out.f1 = f1;
  out.f2 = f2;
  return out;
}

ComplexMap pullback_factorize(const PullbackResult& q, const ComplexMap& g1,
                              const ComplexMap& g2) {
  if (!same_complex(g1.source, g2.source))
    fail(Errc::DomainMismatch, "the maps must share a source");
  if (!same_complex(g1.target, q.t1.target) ||
      !same_complex(g2.target, q.t2.target))
    fail(Errc::DomainMismatch, "the maps must land in the pullback factors");
  if (!compose_maps(q.f1, g1).same_maps(compose_maps(q.f2, g2)))
    fail(Errc::SquareDoesNotCommute, "the outer square does not commute");

  const TwoComplex& z = *g1.source;
  ComplexMap h;
  h.source = g1.source;
  h.target = q.complex;
  for (const Name& v : z.skel.vertices)
    h.set_vertex(v, pair_name(g1.vertex_image(v), g2.vertex_image(v)));
  for (const Name& a : z.skel.arcs()) {
    if (g1.dart_collapses(a)) {
      h.set_dart_collapsed(a, pair_name(g1.dart_collapse_vertex(a),
                                        g2.dart_collapse_vertex(a)));
    } else {
      h.set_dart(a, matched_cell(g1.dart_image(a), g2.dart_image(a)));
    }
  }
  for (const auto& [sig, w] : z.faces) {
    FaceImage i1 = g1.face_image(sig);
    FaceImage i2 = g2.face_image(sig);
    if (i1.kind != i2.kind)
      fail(Errc::SquareDoesNotCommute,
           "face '" + sig + "' collapses on one side only");
    if (i1.kind == FaceImage::ToFace) {
      Name cell = matched_cell(i1.face, i2.face);
      std::size_t n = w.size();
      std::size_t o1 = q.t1.face_image(cell).offset;
      std::size_t o2 = q.t2.face_image(cell).offset;
      std::size_t m1 = (i1.offset + n - o1) % n;
      std::size_t m2 = (i2.offset + n - o2) % n;
      if (m1 != m2)
        fail(Errc::SquareDoesNotCommute,
             "face '" + sig + "' cannot be aligned with the paired face");
      h.set_face(sig, FaceImage::to_face(cell, m1));
    } else {
      if (i1.path.darts.size() != i2.path.darts.size())
        fail(Errc::SquareDoesNotCommute,
             "face '" + sig + "' collapses to paths of different lengths");
      Path pth;
      pth.start = pair_name(i1.path.start, i2.path.start);
      for (std::size_t j = 0; j < i1.path.darts.size(); ++j)
        pth.darts.push_back(matched_cell(i1.path.darts[j], i2.path.darts[j]));
      h.set_face(sig, FaceImage::to_path(std::move(pth)));
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Higman composition.

namespace {

struct HcPlan {
  // Common target, ambient prefixes, and the ambient pair darts by index and
  // side: side(j, 0) = dart1 of pair j, side(j, 1) = dart2.
  std::vector<std::string> prefixes;
  std::vector<std::array<Name, 2>> darts;
  std::map<Name, std::pair<std::size_t, int>> side_of;  // ambient dart -> (j, side)
  // Ambient face cell -> replacement boundary word.
  std::map<Name, std::vector<Name>> replaced;
};

HcPlan hc_validate(const std::vector<ComplexMap>& maps,
                   const HandleConfiguration& hc) {
  if (maps.empty()) fail(Errc::UsageError, "no maps to compose");
  for (const ComplexMap& f : maps) {
    if (!same_complex(f.target, maps.front().target))
      fail(Errc::DomainMismatch, "the maps must share a target");
    if (!is_dimension_preserving(f))
      fail(Errc::NotDimensionPreserving,
           "the maps must be dimension preserving");
  }
  const TwoComplex& x = *maps.front().target;
  if (is_inverse(hc.edge) || !x.skel.has_dart(hc.edge))
    fail(Errc::UnknownArc, "unknown base arc '" + hc.edge + "'");
  if (hc.pairs.empty())
    fail(Errc::NotHandleConfiguration, "no dart pairs given");

  HcPlan plan;
  for (std::size_t i = 0; i < maps.size(); ++i)
    plan.prefixes.push_back(maps.size() == 1 ? ""
                                             : std::to_string(i + 1) + ":");

  std::vector<bool> covered(maps.size(), false);
  std::size_t m = hc.pairs.size();
  for (std::size_t j = 0; j < m; ++j) {
    const HandlePair& hp = hc.pairs[j];
    if (hp.source_index >= maps.size())
      fail(Errc::UsageError, "pair source index out of range");
    const ComplexMap& f = maps[hp.source_index];
    for (const Name& d : {hp.dart1, hp.dart2}) {
      if (!f.source->skel.has_dart(d))
        fail(Errc::UnknownCell, "unknown pair dart '" + d + "'");
      if (f.dart_collapses(d) || f.dart_image(d) != hc.edge)
        fail(Errc::NotHandleConfiguration, "pair dart '" + d +
                                               "' is not in the fiber over '" +
                                               hc.edge + "'");
    }
    if (hp.dart1 == hp.dart2)
      fail(Errc::NotHandleConfiguration, "pair darts must be distinct");
    const std::string& p = plan.prefixes[hp.source_index];
    std::array<Name, 2> amb = {p + hp.dart1, p + hp.dart2};
    for (int s = 0; s < 2; ++s)
      if (!plan.side_of.emplace(amb[s], std::make_pair(j, s)).second)
        fail(Errc::NotHandleConfiguration,
             "dart '" + amb[s] + "' appears in two pairs");
    plan.darts.push_back(std::move(amb));
    covered[hp.source_index] = true;
  }
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (!covered[i])
      fail(Errc::NotHandleConfiguration,
           "source " + std::to_string(i + 1) + " has no pair");

  // Face clauses, checked around every face of the target containing the
  // base edge.
  for (const Name& sigma : x.all_face_names()) {
    std::vector<Name> sw = x.boundary(sigma);
    if (std::count(sw.begin(), sw.end(), hc.edge) == 0) continue;

    struct Taco {
      Name cell;                    // ambient face cell
      std::size_t source_index = 0;
      std::size_t reps = 0;
      std::vector<Name> g1, g2;     // ambient segment darts
    };
    std::map<std::size_t, Taco> tacos;   // pair index -> its taco face
    std::set<Name> pure_darts;           // ambient pair darts with a pure face
    bool any_pure = false, any_taco = false;

    for (std::size_t i = 0; i < maps.size(); ++i) {
      const ComplexMap& f = maps[i];
      const std::string& p = plan.prefixes[i];
      for (const Name& tau : f.source->all_face_names()) {
        if (f.face_image(tau).face != sigma) continue;
        std::vector<Name> w = f.source->boundary(tau);
        std::vector<Name> aw;
        aw.reserve(w.size());
        for (const Name& d : w)
          aw.push_back(is_inverse(d) ? p + base_of(d) + "^" : p + d);
        Name cell = is_inverse(tau) ? p + base_of(tau) + "^" : p + tau;

        std::vector<std::size_t> occ;
        for (std::size_t pos = 0; pos < aw.size(); ++pos)
          if (plan.side_of.count(aw[pos])) occ.push_back(pos);
        if (occ.empty()) continue;

        for (const Name& d : aw)
          if (plan.side_of.count(inverse(d)))
            fail(Errc::NotHandleConfiguration,
                 "clause (ii): face '" + cell +
                     "' traverses a pair dart backwards");

        bool pure = true;
        for (const Name& d : aw) pure = pure && d == aw[0];
        if (pure) {
          if (aw.size() != m)
            fail(Errc::NotHandleConfiguration,
                 "clause (i): face '" + cell + "' is the pure power " +
                     std::to_string(aw.size()) + ", expected " +
                     std::to_string(m));
          any_pure = true;
          pure_darts.insert(aw[0]);
          auto [j, side] = plan.side_of.at(aw[0]);
          std::vector<Name> nw;
          nw.reserve(m);
          for (std::size_t step = 0; step < m; ++step)
            nw.push_back(side == 0
                             ? plan.darts[(j + step) % m][0]
                             : plan.darts[(j + m - step % m) % m][1]);
          plan.replaced.emplace(cell, std::move(nw));
          continue;
        }

        // Taco shape: rotate to the pair's first dart and demand an exact
        // k-fold repetition (dart1 g1 dart2 g2)^k of one single pair.
        auto [j0, s0] = plan.side_of.at(aw[occ[0]]);
        for (std::size_t pos : occ) {
          auto [j, side] = plan.side_of.at(aw[pos]);
          if (j != j0)
            fail(Errc::NotHandleConfiguration,
                 "clause (ii): face '" + cell +
                     "' mixes darts from different pairs");
        }
        const Name& d1 = plan.darts[j0][0];
        const Name& d2 = plan.darts[j0][1];
        std::size_t start = aw.size();
        for (std::size_t pos : occ)
          if (aw[pos] == d1) {
            start = pos;
            break;
          }
        if (start == aw.size() || occ.size() % 2 != 0)
          fail(Errc::NotHandleConfiguration,
               "clause (ii): face '" + cell +
                   "' does not alternate the two pair darts");
        std::vector<Name> rot(aw.size());
        for (std::size_t pos = 0; pos < aw.size(); ++pos)
          rot[pos] = aw[(start + pos) % aw.size()];
        std::size_t k = occ.size() / 2;
        if (rot.size() % k != 0)
          fail(Errc::NotHandleConfiguration,
               "clause (ii): face '" + cell + "' is not an exact repetition");
        std::size_t block = rot.size() / k;
        for (std::size_t pos = 0; pos < rot.size(); ++pos)
          if (rot[pos] != rot[pos % block])
            fail(Errc::NotHandleConfiguration,
                 "clause (ii): face '" + cell + "' is not an exact repetition");
        std::size_t mid = block;
        for (std::size_t pos = 1; pos < block; ++pos)
          if (plan.side_of.count(rot[pos])) {
            mid = pos;
            break;
          }
        if (rot[0] != d1 || mid == block || rot[mid] != d2)
          fail(Errc::NotHandleConfiguration,
               "clause (ii): face '" + cell +
                   "' does not alternate the two pair darts");
        for (std::size_t pos = mid + 1; pos < block; ++pos)
          if (plan.side_of.count(rot[pos]))
            fail(Errc::NotHandleConfiguration,
                 "clause (ii): face '" + cell +
                     "' does not alternate the two pair darts");
        Taco t;
        t.cell = cell;
        t.source_index = i;
        t.reps = k;
        t.g1.assign(rot.begin() + 1, rot.begin() + mid);
        t.g2.assign(rot.begin() + mid + 1, rot.begin() + block);
        any_taco = true;
        if (!tacos.emplace(j0, std::move(t)).second)
          fail(Errc::NotHandleConfiguration,
               "clause (ii): pair " + std::to_string(j0 + 1) +
                   " has several faces over '" + sigma + "'");
      }
    }

    if (any_pure)
      for (const auto& pd : plan.darts)
        for (const Name& d : pd)
          if (!pure_darts.count(d))
            fail(Errc::NotHandleConfiguration,
                 "clause (i): missing the companion face over '" + d + "'");

    if (any_taco) {
      for (std::size_t j = 0; j < m; ++j)
        if (!tacos.count(j))
          fail(Errc::NotHandleConfiguration,
               "clause (ii): missing the face for pair " +
                   std::to_string(j + 1) + " over '" + sigma + "'");
      auto image_of = [&](std::size_t i, const std::vector<Name>& amb) {
        const std::string& p = plan.prefixes[i];
        std::vector<Name> img;
        img.reserve(amb.size());
        for (const Name& d : amb)
          img.push_back(maps[i].dart_image(d.substr(p.size())));
        return img;
      };
      std::vector<Name> ref1 = image_of(tacos.at(0).source_index, tacos.at(0).g1);
      std::vector<Name> ref2 = image_of(tacos.at(0).source_index, tacos.at(0).g2);
      std::size_t reps = tacos.at(0).reps;
      for (const auto& [j, t] : tacos) {
        if (t.reps != reps)
          fail(Errc::NotHandleConfiguration,
               "clause (ii): repetition counts differ over '" + sigma + "'");
        if (image_of(t.source_index, t.g1) != ref1 ||
            image_of(t.source_index, t.g2) != ref2)
          fail(Errc::NotHandleConfiguration,
               "clause (ii): the side segments do not share an image path");
      }
      // Rethread: boundary of the new face for pair j interleaves its own
      // segments with the next pair's, matching the rewired darts.
      for (const auto& [j, t] : tacos) {
        const Taco& nxt = tacos.at((j + 1) % m);
        std::vector<Name> blockw;
        blockw.push_back(plan.darts[j][0]);
        blockw.insert(blockw.end(), nxt.g1.begin(), nxt.g1.end());
        blockw.push_back(plan.darts[(j + 1) % m][1]);
        blockw.insert(blockw.end(), t.g2.begin(), t.g2.end());
        std::vector<Name> nw;
        nw.reserve(blockw.size() * t.reps);
        for (std::size_t rep = 0; rep < t.reps; ++rep)
          nw.insert(nw.end(), blockw.begin(), blockw.end());
        plan.replaced.emplace(t.cell, std::move(nw));
      }
    }
  }
  return plan;
}

}  // namespace

void validate_handle_configuration(const std::vector<ComplexMap>& maps,
                                   const HandleConfiguration& hc) {
  hc_validate(maps, hc);
}

HigmanResult higman_composition(const std::vector<ComplexMap>& maps,
                                const HandleConfiguration& hc) {
  HcPlan plan = hc_validate(maps, hc);
  std::size_t m = hc.pairs.size();

  // Original ambient incidence, then the cyclic rewiring: the dart of pair j
  // on side 1 now ends where pair j+1's side-1 dart ended, side 2 where pair
  // j-1's side-2 dart ended.
  std::map<Name, Name> old_src;
  std::vector<TwoComplex> pref;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    pref.push_back(prefixed(*maps[i].source, plan.prefixes[i]));
    for (const auto& [d, s] : pref.back().skel.src) old_src[d] = s;
  }
  auto old_dst = [&](const Name& d) { return old_src.at(inverse(d)); };
  auto new_dst = [&](const Name& d) {
    auto it = plan.side_of.find(d);
    if (it == plan.side_of.end()) return old_dst(d);
    auto [j, side] = it->second;
    return side == 0 ? old_dst(plan.darts[(j + 1) % m][0])
                     : old_dst(plan.darts[(j + m - 1) % m][1]);
  };

  TwoComplex y;
  for (const TwoComplex& part : pref)
    for (const Name& v : part.skel.vertices) y.skel.add_vertex(v);
  for (const TwoComplex& part : pref)
    for (const Name& a : part.skel.arcs()) {
      if (plan.side_of.count(inverse(a))) {
        // The rewired dart is the inverse one; the arc keeps its end.
        y.skel.add_arc(a, new_dst(inverse(a)), old_dst(a));
      } else {
        y.skel.add_arc(a, old_src.at(a), new_dst(a));
      }
    }
  for (const TwoComplex& part : pref)
    for (const auto& [f, w] : part.faces) {
      auto it = plan.replaced.find(f);
      if (it != plan.replaced.end()) {
        y.add_face(f, it->second);
        continue;
      }
      auto inv_it = plan.replaced.find(inverse(f));
      y.add_face(f, inv_it != plan.replaced.end() ? inverted_word(inv_it->second)
                                                  : w);
    }

  HigmanResult out;
  out.complex = std::make_shared<const TwoComplex>(std::move(y));
  ComplexMap& f = out.map;
  f.source = out.complex;
  f.target = maps.front().target;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string& p = plan.prefixes[i];
    const TwoComplex& yi = *maps[i].source;
    for (const Name& v : yi.skel.vertices)
      f.set_vertex(p + v, maps[i].vertex_image(v));
    for (const Name& a : yi.skel.arcs())
      f.set_dart(p + a, maps[i].dart_image(a));
    for (const auto& [g, w] : yi.faces) f.set_face(p + g, maps[i].face_image(g));
  }
  return out;
}

}  // namespace cx
