#include "cx/covering.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>

#include "cx/constructions.hpp"
#include "cx/homotopy.hpp"

namespace cx {

namespace {

bool same_complex(const std::shared_ptr<const TwoComplex>& a,
                  const std::shared_ptr<const TwoComplex>& b) {
  return a.get() == b.get() || *a == *b;
}

std::string join_lines(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

void require_spanning_tree(const Graph& g, const Graph& tree, const char* who) {
  if (tree.vertices.empty() || tree.vertices != g.vertices)
    fail(Errc::UsageError, std::string(who) + ": tree must span every vertex");
  for (const auto& [d, s] : tree.src)
    if (!g.has_dart(d) || g.dart_src(d) != s)
      fail(Errc::UsageError,
           std::string(who) + ": tree dart '" + d + "' is not a dart of the complex");
  if (!is_connected(tree) || tree.src.size() != 2 * (tree.vertices.size() - 1))
    fail(Errc::UsageError, std::string(who) + ": not a spanning tree");
}

// The unique dart at `at` mapping onto d; the certificate guarantees
// existence and uniqueness.
Name dart_over(const CoveringCert& c, const Name& at, const Name& d) {
  std::optional<Name> hit;
  for (const Name& cand : c.map.source->skel.darts_at(at)) {
    if (c.map.dart_collapses(cand) || c.map.dart_image(cand) != d) continue;
    if (hit)
      fail(Errc::NotCovering,
           "certificate broken: several darts over '" + d + "' at '" + at + "'");
    hit = cand;
  }
  if (!hit)
    fail(Errc::NotCovering,
         "certificate broken: no dart over '" + d + "' at '" + at + "'");
  return *hit;
}

// Tree-closed generator loop through the non-tree arc e.
Path generator_loop(const Graph& g, const Graph& tree, const Name& root,
                    const Name& e) {
  Path loop = tree_path(tree, root, g.dart_src(e));
  loop.darts.push_back(e);
  Path back = tree_path(tree, g.dart_dst(e), root);
  loop.darts.insert(loop.darts.end(), back.darts.begin(), back.darts.end());
  return loop;
}

}  // namespace

const std::vector<Name>& CoveringCert::fiber(const Name& cell) const {
  auto it = fibers.find(cell);
  if (it == fibers.end())
    fail(Errc::UnknownCell, "no fiber cached for '" + cell + "'");
  return it->second;
}

CoveringCert check_covering(const ComplexMap& m) {
  ValidationReport vr = validate_map(m);
  if (!vr.ok())
    fail(Errc::UsageError, "check_covering: map is invalid: " + vr.problems.front());
  const TwoComplex& y = *m.source;
  const TwoComplex& x = *m.target;
  if (x.skel.vertices.empty() || !is_connected(x))
    fail(Errc::NotConnected, "check_covering: target is not connected");

  std::vector<std::string> report;
  bool injective = true;

  bool dim = true;
  for (const auto& [d, v] : m.dcollapse)
    if (!is_inverse(d)) {
      report.push_back("dart '" + d + "' collapses to vertex '" + v + "'");
      dim = false;
    }
  for (const auto& [f, fi] : m.fmap)
    if (fi.kind == FaceImage::ToPath) {
      report.push_back("face '" + f + "' collapses to a path");
      dim = false;
    }
  if (!dim) injective = false;

  if (dim) {
    for (const Name& u : y.skel.vertices) {
      LocalContinuity lc = local_continuity(m, u);
      const Name& v = m.vertex_image(u);
      std::string at = "at vertex '" + u + "' over '" + v + "'";
      if (!lc.edge_injective) {
        report.push_back(at + " the edge map is not injective");
        injective = false;
      }
      if (!lc.edge_surjective)
        report.push_back(at + " the edge map is not surjective");
      for (const auto& [tau, fb] : lc.face_maps) {
        if (!fb.injective) {
          report.push_back(at + " the appearance map into face '" + tau +
                           "' is not injective");
          injective = false;
        }
        if (!fb.surjective)
          report.push_back(at + " the appearance map into face '" + tau +
                           "' is not surjective");
      }
    }
  }

  std::map<Name, std::vector<Name>> fibers;
  for (const Name& v : x.skel.vertices) fibers[v];
  for (const auto& [d, s] : x.skel.src) fibers[d];
  for (const Name& f : x.all_face_names()) fibers[f];
  for (const Name& u : y.skel.vertices) fibers[m.vertex_image(u)].push_back(u);
  if (dim) {
    for (const auto& [d, s] : y.skel.src) fibers[m.dart_image(d)].push_back(d);
    for (const Name& f : y.all_face_names())
      fibers[m.face_image(f).face].push_back(f);
  }

  std::size_t degree = fibers.at(*x.skel.vertices.begin()).size();
  for (const auto& [cell, fib] : fibers) {
    if (fib.empty())
      report.push_back("cell '" + cell + "' has an empty fiber");
    else if (fib.size() != degree)
      report.push_back("fiber over '" + cell + "' has " +
                       std::to_string(fib.size()) + " cells, expected " +
                       std::to_string(degree));
  }

  if (!report.empty()) {
    std::string head = injective ? "immersion but not a covering: "
                                 : "not a covering: ";
    fail(Errc::NotCovering, head + join_lines(report));
  }
  return CoveringCert{m, std::move(fibers), degree};
}

Path lift_path(const CoveringCert& c, const Path& gamma, const Name& u) {
  const Graph& gx = c.map.target->skel;
  const Graph& gy = c.map.source->skel;
  if (!gx.path_valid(gamma))
    fail(Errc::UsageError, "lift_path: path is not incident in the base");
  if (!gy.has_vertex(u))
    fail(Errc::UnknownCell, "lift_path: unknown vertex '" + u + "'");
  if (c.map.vertex_image(u) != gamma.start)
    fail(Errc::BasepointNotInFiber,
         "vertex '" + u + "' does not lie over '" + gamma.start + "'");
  Path out{u, {}};
  Name at = u;
  for (const Name& d : gamma.darts) {
    Name lifted = dart_over(c, at, d);
    at = gy.dart_dst(lifted);
    out.darts.push_back(std::move(lifted));
  }
  return out;
}

FaceLift lift_face(const CoveringCert& c, const Name& tau, std::size_t appearance,
                   const Name& u) {
  const TwoComplex& x = *c.map.target;
  const TwoComplex& y = *c.map.source;
  if (!x.has_face(tau)) fail(Errc::UnknownCell, "unknown face '" + tau + "'");
  std::vector<Name> w = x.boundary(tau);
  if (appearance >= w.size())
    fail(Errc::BadPositions, "appearance index out of range for face '" + tau + "'");
  if (!y.skel.has_vertex(u))
    fail(Errc::UnknownCell, "unknown vertex '" + u + "'");
  const Name& v = x.skel.dart_src(w[appearance]);
  if (c.map.vertex_image(u) != v)
    fail(Errc::BasepointNotInFiber,
         "vertex '" + u + "' does not lie over appearance vertex '" + v + "'");

  std::optional<FaceLift> hit;
  for (const Name& sigma : y.all_face_names()) {
    FaceImage fi = c.map.face_image(sigma);
    if (fi.kind != FaceImage::ToFace || fi.face != tau) continue;
    std::size_t n = y.face_size(sigma);
    for (std::size_t yapp : appearances(y, sigma, u)) {
      if ((yapp + fi.offset) % n != appearance) continue;
      if (hit)
        fail(Errc::NotCovering, "certificate broken: face lift not unique");
      hit = FaceLift{sigma, yapp};
    }
  }
  if (!hit) fail(Errc::NotCovering, "certificate broken: no face lift found");
  return *hit;
}

ComplexMap lift_map(const CoveringCert& c, const ComplexMap& g, const Name& x,
                    const Name& u) {
  const ComplexMap& f = c.map;
  if (!same_complex(g.target, f.target))
    fail(Errc::DomainMismatch, "lift_map: the map must land in the covering's base");
  std::shared_ptr<const TwoComplex> z = g.source;
  if (!is_connected(*z))
    fail(Errc::NotConnected, "lift_map: the source must be connected");
  if (!z->skel.has_vertex(x))
    fail(Errc::UnknownCell, "lift_map: unknown basepoint '" + x + "'");
  if (!f.source->skel.has_vertex(u))
    fail(Errc::UnknownCell, "lift_map: unknown fiber vertex '" + u + "'");
  if (g.vertex_image(x) != f.vertex_image(u))
    fail(Errc::BasepointNotInFiber,
         "'" + u + "' does not lie over the image of '" + x + "'");

  Graph tree = spanning_tree(z->skel, x);
  ComplexMap h;
  h.source = z;
  h.target = f.source;
  h.set_vertex(x, u);

  std::deque<Name> queue{x};
  std::set<Name> seen{x};
  while (!queue.empty()) {
    Name at = queue.front();
    queue.pop_front();
    for (const Name& d : tree.darts_at(at)) {
      Name to = tree.dart_dst(d);
      if (seen.count(to)) continue;
      if (g.dart_collapses(d)) {
        h.set_dart_collapsed(d, h.vertex_image(at));
        h.set_vertex(to, h.vertex_image(at));
      } else {
        Name lifted = dart_over(c, h.vertex_image(at), g.dart_image(d));
        h.set_vertex(to, f.source->skel.dart_dst(lifted));
        h.set_dart(d, std::move(lifted));
      }
      seen.insert(to);
      queue.push_back(to);
    }
  }

  for (const Name& e : z->skel.arcs()) {
    if (tree.has_dart(e)) continue;
    Path loop = generator_loop(z->skel, tree, x, e);
    Path lift = lift_path(c, g.path_image(loop), u);
    if (f.source->skel.path_end(lift) != u)
      fail(Errc::SubgroupConditionFails,
           "the image of the generator loop through arc '" + e +
               "' lifts open at '" + u + "'");
    const Name& es = z->skel.dart_src(e);
    const Name& ed = z->skel.dart_dst(e);
    if (g.dart_collapses(e)) {
      if (h.vertex_image(es) != h.vertex_image(ed))
        fail(Errc::SubgroupConditionFails,
             "collapsed arc '" + e + "' cannot be wired consistently");
      h.set_dart_collapsed(e, h.vertex_image(es));
    } else {
      Name lifted = dart_over(c, h.vertex_image(es), g.dart_image(e));
      if (f.source->skel.dart_dst(lifted) != h.vertex_image(ed))
        fail(Errc::SubgroupConditionFails,
             "generator arc '" + e + "' cannot be wired consistently");
      h.set_dart(e, std::move(lifted));
    }
  }

  for (const Name& s : z->face_names()) {
    FaceImage gi = g.face_image(s);
    std::vector<Name> w = z->boundary(s);
    if (gi.kind == FaceImage::ToFace) {
      std::vector<Name> lifted;
      lifted.reserve(w.size());
      for (const Name& d : w) lifted.push_back(h.dart_image(d));
      std::size_t n = w.size();
      bool found = false;
      for (const Name& sigma : f.source->all_face_names()) {
        FaceImage fy = f.face_image(sigma);
        if (fy.kind != FaceImage::ToFace || fy.face != gi.face) continue;
        std::vector<Name> bw = f.source->boundary(sigma);
        if (bw.size() != n) continue;
        std::size_t k = (gi.offset + n - fy.offset % n) % n;
        bool match = true;
        for (std::size_t i = 0; i < n && match; ++i)
          match = bw[(i + k) % n] == lifted[i];
        if (!match) continue;
        h.set_face(s, FaceImage::to_face(sigma, k));
        found = true;
        break;
      }
      if (!found)
        fail(Errc::SubgroupConditionFails,
             "face '" + s + "' has no lift aligned with its image");
    } else {
      Path lifted = lift_path(c, gi.path, h.vertex_image(z->skel.dart_src(w[0])));
      if (!f.source->skel.path_closed(lifted))
        fail(Errc::SubgroupConditionFails,
             "the image path of face '" + s + "' lifts open");
      h.set_face(s, FaceImage::to_path(std::move(lifted)));
    }
  }

  ValidationReport hr = validate_map(h);
  if (!hr.ok())
    fail(Errc::SubgroupConditionFails,
         "lifted map fails validation: " + hr.problems.front());
  if (!compose_maps(f, h).same_maps(g))
    fail(Errc::SubgroupConditionFails,
         "lifted map does not reproduce the original through the covering");
  return h;
}

ExciseResult excise(const CoveringCert& c, const TwoComplex& z,
                    std::size_t max_len, std::size_t max_moves) {
  const ComplexMap& f = c.map;
  const TwoComplex& x = *f.target;
  const TwoComplex& y = *f.source;
  if (z.skel.vertices.empty())
    fail(Errc::UsageError, "excise: the subcomplex is empty");
  if (!is_subcomplex(z, x))
    fail(Errc::NotSubcomplex, "excise: not a subcomplex of the base");
  if (!is_connected(z))
    fail(Errc::NotConnected, "excise: the subcomplex is not connected");

  Name root = *z.skel.vertices.begin();
  Graph ztree = spanning_tree(z.skel, root);
  for (const Name& e : z.skel.arcs()) {
    if (ztree.has_dart(e)) continue;
    Path loop = generator_loop(z.skel, ztree, root, e);
    HomotopyVerdict hv =
        homotopic_bounded(z, loop, Path{root, {}}, max_len, max_moves);
    if (hv.status == HomotopyVerdict::Refuted)
      fail(Errc::NotSimplyConnected,
           "the generator loop through arc '" + e + "' is essential");
    if (hv.status == HomotopyVerdict::Inconclusive)
      fail(Errc::Inconclusive,
           "could not settle the loop through arc '" + e + "' within the bounds");
  }

  Graph preimage;
  for (const Name& u : y.skel.vertices)
    if (z.skel.has_vertex(f.vertex_image(u))) preimage.add_vertex(u);
  for (const Name& a : y.skel.arcs())
    if (z.skel.has_dart(f.dart_image(a)))
      preimage.add_arc(a, y.skel.dart_src(a), y.skel.dart_dst(a));

  ComponentsResult comp = components(preimage);
  std::vector<std::set<Name>> block_sets;
  block_sets.reserve(comp.blocks.size());
  for (const auto& b : comp.blocks) block_sets.emplace_back(b.begin(), b.end());

  std::vector<TwoComplex> parts;
  for (std::size_t i = 0; i < comp.blocks.size(); ++i) {
    TwoComplex zi;
    zi.skel = comp.subgraphs[i];
    parts.push_back(std::move(zi));
  }
  for (const Name& s : y.face_names()) {
    FaceImage fi = f.face_image(s);
    if (!z.has_face(fi.face)) continue;
    std::vector<Name> w = y.boundary(s);
    const Name& anchor = y.skel.dart_src(w[0]);
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (block_sets[i].count(anchor)) {
        parts[i].add_face(s, w);
        break;
      }
  }

  auto zshared = std::make_shared<const TwoComplex>(z);
  for (const TwoComplex& part : parts) {
    ComplexMap restr;
    restr.source = std::make_shared<const TwoComplex>(part);
    restr.target = zshared;
    for (const Name& u : part.skel.vertices) restr.set_vertex(u, f.vertex_image(u));
    for (const Name& a : part.skel.arcs()) restr.set_dart(a, f.dart_image(a));
    for (const Name& s : part.face_names()) restr.set_face(s, f.face_image(s));
    if (!is_isomorphism(restr))
      fail(Errc::NotCovering,
           "a component over the excised piece is not isomorphic to it");
  }

  QuotientResult qx = quotient_by_subcomplexes(f.target, {z});
  QuotientResult qy = quotient_by_subcomplexes(f.source, parts);

  ComplexMap fp;
  fp.source = qy.complex;
  fp.target = qx.complex;
  for (const Name& u : y.skel.vertices)
    fp.set_vertex(qy.q.vertex_image(u), qx.q.vertex_image(f.vertex_image(u)));
  for (const Name& a : y.skel.arcs()) {
    bool cy = qy.q.dart_collapses(a);
    bool cb = qx.q.dart_collapses(f.dart_image(a));
    if (cy != cb)
      fail(Errc::NotCovering, "collapse mismatch over arc '" + a + "'");
    if (cy) continue;
    fp.set_dart(qy.q.dart_image(a), qx.q.dart_image(f.dart_image(a)));
  }
  for (const Name& s : y.face_names()) {
    FaceImage qfi = qy.q.face_image(s);
    if (qfi.kind != FaceImage::ToFace) continue;
    FaceImage down = qx.q.face_image(f.face_image(s).face);
    if (down.kind != FaceImage::ToFace)
      fail(Errc::NotCovering, "face survival mismatch over face '" + s + "'");
    std::vector<Name> wq = qy.complex->boundary(qfi.face);
    std::vector<Name> wt = qx.complex->boundary(down.face);
    if (wq.size() != wt.size())
      fail(Errc::NotCovering, "face size mismatch over face '" + s + "'");
    std::size_t n = wq.size();
    bool found = false;
    for (std::size_t k = 0; k < n && !found; ++k) {
      bool match = true;
      for (std::size_t i = 0; i < n && match; ++i)
        match = fp.dart_image(wq[i]) == wt[(i + k) % n];
      if (match) {
        fp.set_face(qfi.face, FaceImage::to_face(down.face, k));
        found = true;
      }
    }
    if (!found)
      fail(Errc::NotCovering, "no aligned image for quotient face '" + qfi.face + "'");
  }

  CoveringCert cert = check_covering(fp);
  if (cert.degree != c.degree)
    fail(Errc::NotCovering, "excision changed the covering degree");
  return ExciseResult{std::move(cert), qy.q, qx.q};
}

Monodromy monodromy(const CoveringCert& c, const Name& v, const Graph& tree) {
  const TwoComplex& x = *c.map.target;
  if (!x.skel.has_vertex(v))
    fail(Errc::UnknownCell, "monodromy: unknown vertex '" + v + "'");
  require_spanning_tree(x.skel, tree, "monodromy");

  Monodromy mo;
  mo.vertex = v;
  mo.tree = tree;
  mo.fiber = c.fiber(v);
  std::map<Name, int> index;
  for (std::size_t i = 0; i < mo.fiber.size(); ++i)
    index[mo.fiber[i]] = static_cast<int>(i);

  for (const Name& e : x.skel.arcs()) {
    if (tree.has_dart(e)) continue;
    Path loop = generator_loop(x.skel, tree, v, e);
    Permutation endpoint;
    endpoint.img.resize(mo.fiber.size());
    for (std::size_t i = 0; i < mo.fiber.size(); ++i) {
      Path lift = lift_path(c, loop, mo.fiber[i]);
      endpoint.img[i] = index.at(c.map.source->skel.path_end(lift));
    }
    mo.action.emplace(e, endpoint.inverse());
  }
  return mo;
}

Permutation monodromy_of_word(const CoveringCert& c, const Monodromy& mo,
                              const std::vector<Name>& word) {
  const Graph& gx = c.map.target->skel;
  Path p{mo.vertex, word};
  if (!gx.path_valid(p))
    fail(Errc::UsageError, "monodromy_of_word: word is not a path at the basepoint");
  if (!gx.path_closed(p))
    fail(Errc::UsageError, "monodromy_of_word: word is not a closed loop");
  std::map<Name, int> index;
  for (std::size_t i = 0; i < mo.fiber.size(); ++i)
    index[mo.fiber[i]] = static_cast<int>(i);
  Permutation endpoint;
  endpoint.img.resize(mo.fiber.size());
  for (std::size_t i = 0; i < mo.fiber.size(); ++i) {
    Path lift = lift_path(c, p, mo.fiber[i]);
    endpoint.img[i] = index.at(c.map.source->skel.path_end(lift));
  }
  return endpoint.inverse();
}

Presentation presentation_of(const TwoComplex& x, const Graph& tree) {
  require_spanning_tree(x.skel, tree, "presentation_of");
  Presentation p;
  p.tree = tree;
  for (const Name& a : x.skel.arcs())
    if (!tree.has_dart(a)) p.generators.push_back(a);
  for (const Name& f : x.face_names()) {
    std::vector<Name> word;
    for (const Name& d : x.boundary(f))
      if (!tree.has_dart(d)) {
        if (!word.empty() && word.back() == inverse(d))
          word.pop_back();
        else
          word.push_back(d);
      }
    p.relators.push_back(std::move(word));
  }
  return p;
}

std::size_t CosetTable::act(std::size_t coset, const Name& dart) const {
  if (coset >= rows.size())
    fail(Errc::UsageError, "coset index out of range");
  auto it = rows[coset].find(dart);
  if (it == rows[coset].end())
    fail(Errc::UsageError, "no action recorded for dart '" + dart + "'");
  return it->second;
}

std::size_t CosetTable::act_word(std::size_t coset,
                                 const std::vector<Name>& word) const {
  for (const Name& d : word) coset = act(coset, d);
  return coset;
}

namespace {

// HLT-style enumerator: relator traces force closure, coincidences merge
// through a union-find, undefined slots are filled by fresh definitions.
struct Enumerator {
  std::vector<Name> slots;
  std::vector<std::map<Name, std::size_t>> act;
  std::vector<std::size_t> parent;
  std::size_t live = 1;
  std::size_t cap;
  bool exhausted = false;
  bool dirty = false;
  std::deque<std::pair<std::size_t, std::size_t>> pending;

  explicit Enumerator(const std::vector<Name>& generators, std::size_t max_cosets)
      : cap(max_cosets) {
    for (const Name& g : generators) {
      slots.push_back(g);
      slots.push_back(inverse(g));
    }
    act.emplace_back();
    parent.push_back(0);
  }

  std::size_t find(std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }

  std::optional<std::size_t> lookup(std::size_t i, const Name& d) {
    auto it = act[i].find(d);
    if (it == act[i].end()) return std::nullopt;
    return find(it->second);
  }

  std::optional<std::size_t> define(std::size_t i, const Name& d) {
    if (live >= cap) {
      exhausted = true;
      return std::nullopt;
    }
    std::size_t n = act.size();
    act.emplace_back();
    parent.push_back(n);
    ++live;
    act[i][d] = n;
    act[n][inverse(d)] = i;
    dirty = true;
    return n;
  }

  void join(std::size_t i, const Name& d, std::size_t j) {
    i = find(i);
    j = find(j);
    auto cur = lookup(i, d);
    if (cur && *cur != j) {
      pending.push_back({*cur, j});
      return;
    }
    if (!cur) dirty = true;
    act[i][d] = j;
    auto back = lookup(j, inverse(d));
    if (back && *back != i) {
      pending.push_back({*back, i});
      return;
    }
    if (!back) dirty = true;
    act[j][inverse(d)] = i;
  }

  void settle() {
    while (!pending.empty()) {
      auto [a, b] = pending.front();
      pending.pop_front();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      parent[b] = a;
      --live;
      dirty = true;
      std::map<Name, std::size_t> moved;
      moved.swap(act[b]);
      for (const auto& [d, t] : moved) {
        std::size_t tt = find(t);
        auto cur = lookup(a, d);
        if (cur && *cur != tt) {
          pending.push_back({*cur, tt});
          continue;
        }
        act[a][d] = tt;
        auto back = lookup(tt, inverse(d));
        if (back && *back != a)
          pending.push_back({*back, a});
        else
          act[tt][inverse(d)] = a;
      }
    }
  }

  // Scans `word` from coset i and forces the trace to close back to i.
  void trace(std::size_t i, const std::vector<Name>& word) {
    if (word.empty() || exhausted) return;
    std::size_t cur = find(i);
    std::size_t home = cur;
    for (std::size_t k = 0; k + 1 < word.size(); ++k) {
      auto next = lookup(cur, word[k]);
      if (!next) {
        next = define(cur, word[k]);
        if (!next) return;
      }
      cur = find(*next);
      home = find(home);
    }
    join(cur, word.back(), home);
    settle();
  }
};

}  // namespace

CosetTable coset_enumerate(const Presentation& p,
                           const std::vector<std::vector<Name>>& subgroup_words,
                           std::size_t max_cosets) {
  std::set<Name> gens(p.generators.begin(), p.generators.end());
  auto check_word = [&](const std::vector<Name>& w, const char* what) {
    for (const Name& d : w)
      if (!gens.count(base_of(d)))
        fail(Errc::UsageError, std::string(what) + " uses the non-generator dart '" +
                                   d + "'");
  };
  for (const auto& w : subgroup_words) check_word(w, "a subgroup word");
  for (const auto& r : p.relators) check_word(r, "a relator");
  if (max_cosets == 0) fail(Errc::UsageError, "max_cosets must be positive");

  Enumerator en(p.generators, max_cosets);
  while (!en.exhausted) {
    en.dirty = false;
    for (const auto& w : subgroup_words) en.trace(0, w);
    for (std::size_t i = 0; i < en.act.size() && !en.exhausted; ++i) {
      if (en.find(i) != i) continue;
      for (const auto& r : p.relators) {
        en.trace(i, r);
        if (en.exhausted) break;
      }
      if (en.exhausted) break;
      for (const Name& d : en.slots) {
        if (en.find(i) != i) break;
        if (!en.lookup(i, d) && !en.define(i, d)) break;
      }
    }
    if (!en.dirty) break;
  }

  CosetTable table;
  table.bound = max_cosets;
  table.generators = p.generators;
  if (en.exhausted) return table;

  // Breadth-first renumbering from the subgroup coset, scanning generator
  // darts in order.
  std::map<std::size_t, std::size_t> renumber;
  std::vector<std::size_t> order;
  std::deque<std::size_t> queue{en.find(0)};
  renumber[en.find(0)] = 0;
  order.push_back(en.find(0));
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (const Name& d : en.slots) {
      auto t = en.lookup(i, d);
      if (!t)
        fail(Errc::UsageError, "coset_enumerate: closed table has a hole");
      if (renumber.count(*t)) continue;
      renumber[*t] = order.size();
      order.push_back(*t);
      queue.push_back(*t);
    }
  }
  if (order.size() != en.live)
    fail(Errc::UsageError, "coset_enumerate: the coset action is not transitive");

  table.status = CosetTable::Status::Closed;
  table.rows.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const Name& d : en.slots)
      table.rows[i][d] = renumber.at(*en.lookup(order[i], d));

  for (std::size_t i = 0; i < table.size(); ++i)
    for (const auto& r : p.relators)
      if (table.act_word(i, r) != i)
        fail(Errc::UsageError, "coset_enumerate: a relator acts nontrivially");
  for (const auto& w : subgroup_words)
    if (table.act_word(0, w) != 0)
      fail(Errc::UsageError, "coset_enumerate: a subgroup word moves the subgroup");
  return table;
}

CoveringCert bottom_up_cover(std::shared_ptr<const TwoComplex> x, const Name& v,
                             const Graph& tree, const CosetTable& table) {
  const TwoComplex& base = *x;
  if (!base.skel.has_vertex(v))
    fail(Errc::UnknownCell, "bottom_up_cover: unknown vertex '" + v + "'");
  require_spanning_tree(base.skel, tree, "bottom_up_cover");
  if (table.status != CosetTable::Status::Closed)
    fail(Errc::TableNotClosed, "bottom_up_cover: the coset table is not closed");

  Presentation pres = presentation_of(base, tree);
  if (pres.generators != table.generators)
    fail(Errc::UsageError,
         "bottom_up_cover: table generators do not match the non-tree arcs");
  std::vector<Name> face_names = base.face_names();
  for (std::size_t fi = 0; fi < face_names.size(); ++fi)
    for (std::size_t i = 0; i < table.size(); ++i)
      if (table.act_word(i, pres.relators[fi]) != i)
        fail(Errc::RelatorViolation,
             "the boundary of face '" + face_names[fi] +
                 "' acts nontrivially on coset " + std::to_string(i));

  auto pre = [](std::size_t i, const Name& n) {
    return std::to_string(i) + ":" + n;
  };

  TwoComplex up;
  for (std::size_t i = 0; i < table.size(); ++i)
    for (const Name& w : base.skel.vertices) up.skel.add_vertex(pre(i, w));
  for (std::size_t i = 0; i < table.size(); ++i)
    for (const Name& a : base.skel.arcs()) {
      std::size_t j = tree.has_dart(a) ? i : table.act(i, a);
      up.skel.add_arc(pre(i, a), pre(i, base.skel.dart_src(a)),
                      pre(j, base.skel.dart_dst(a)));
    }

  // Walks the fixed boundary word over the coset copies; tree darts stay in
  // the current copy, generator darts follow the table.
  auto lift_word = [&](std::size_t start, const std::vector<Name>& w) {
    std::vector<Name> out;
    out.reserve(w.size());
    std::size_t coset = start;
    for (const Name& d : w) {
      if (tree.has_dart(d)) {
        out.push_back(pre(coset, d));
      } else if (!is_inverse(d)) {
        out.push_back(pre(coset, d));
        coset = table.act(coset, d);
      } else {
        coset = table.act(coset, d);
        out.push_back(pre(coset, d));
      }
    }
    if (coset != start)
      fail(Errc::RelatorViolation, "a sewn boundary does not close up");
    return out;
  };

  std::set<std::vector<Name>> sewn;
  std::vector<std::pair<Name, Name>> face_images;
  for (const Name& s : face_names) {
    std::vector<Name> w = base.boundary(s);
    for (std::size_t i = 0; i < table.size(); ++i) {
      std::vector<Name> lifted = lift_word(i, w);
      if (!sewn.insert(lifted).second) continue;
      up.add_face(pre(i, s), std::move(lifted));
      face_images.emplace_back(pre(i, s), s);
    }
  }

  ComplexMap f;
  f.source = std::make_shared<const TwoComplex>(std::move(up));
  f.target = x;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (const Name& w : base.skel.vertices) f.set_vertex(pre(i, w), w);
    for (const Name& a : base.skel.arcs()) f.set_dart(pre(i, a), a);
  }
  for (const auto& [lifted, s] : face_images)
    f.set_face(lifted, FaceImage::to_face(s, 0));
  return check_covering(f);
}

namespace {

// Meet-in-the-middle membership for bounded homotopy classes: two paths are
// within `max_moves` elementary moves iff their half-depth move balls share a
// state. Complete for the bound because moves are invertible.
std::set<std::vector<Name>> move_ball(const TwoComplex& x, const Path& p,
                                      std::size_t max_len, std::size_t depth) {
  std::set<std::vector<Name>> states{p.darts};
  std::deque<std::pair<std::vector<Name>, std::size_t>> queue{{p.darts, 0}};
  while (!queue.empty()) {
    auto [cur, d] = queue.front();
    queue.pop_front();
    if (d >= depth) continue;
    Path cp{p.start, cur};
    for (const HomotopyMove& m : legal_moves(x, cp, max_len)) {
      Path next = apply_move(x, cp, m);
      if (states.insert(next.darts).second) queue.push_back({next.darts, d + 1});
    }
  }
  return states;
}

bool balls_meet(const std::set<std::vector<Name>>& a,
                const std::set<std::vector<Name>>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& s : small)
    if (large.count(s)) return true;
  return false;
}

struct BallClass {
  Path rep;
  Name end;
  std::size_t level = 0;
  std::set<std::vector<Name>> ball;  // depth max_moves / 2
  Name vname;
};

Name class_vertex_name(const Path& rep) {
  Name out = "(";
  for (std::size_t i = 0; i < rep.darts.size(); ++i) {
    if (i) out += ".";
    out += rep.darts[i];
  }
  return out + ")";
}

Truncation truncate_ball(std::shared_ptr<const TwoComplex> x, const Name& v,
                         const UniversalBounds& bounds) {
  const TwoComplex& base = *x;
  const Graph& g = base.skel;
  const std::size_t probe_depth = (bounds.max_moves + 1) / 2;
  const std::size_t store_depth = bounds.max_moves / 2;

  std::vector<BallClass> classes;
  auto add_class = [&](const Path& rep, std::size_t level) {
    BallClass bc;
    bc.rep = rep;
    bc.end = g.path_end(rep);
    bc.level = level;
    bc.ball = move_ball(base, rep, bounds.max_len, store_depth);
    bc.vname = class_vertex_name(rep);
    classes.push_back(std::move(bc));
  };

  auto class_of = [&](Path raw) -> int {
    Path p = reduce_path(g, raw);
    if (p.darts.size() > bounds.max_len) return -1;
    std::set<std::vector<Name>> ball =
        move_ball(base, p, bounds.max_len, probe_depth);
    Name end = g.path_end(p);
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i].end == end && balls_meet(ball, classes[i].ball))
        return static_cast<int>(i);
    return -1;
  };

  add_class(Path{v, {}}, 0);
  for (std::size_t level = 1; level <= bounds.radius; ++level) {
    std::size_t upto = classes.size();
    for (std::size_t i = 0; i < upto; ++i) {
      if (classes[i].level + 1 != level) continue;
      Path rep = classes[i].rep;
      for (const Name& d : g.darts_at(classes[i].end)) {
        Path np = rep;
        np.darts.push_back(d);
        np = reduce_path(g, np);
        if (np.darts.size() != level) continue;
        if (class_of(np) < 0) add_class(np, level);
      }
    }
  }

  TwoComplex ball;
  for (const BallClass& bc : classes) ball.skel.add_vertex(bc.vname);
  std::map<std::pair<int, Name>, int> arc_target;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (const Name& d : g.darts_at(classes[i].end)) {
      if (is_inverse(d)) continue;
      Path np = classes[i].rep;
      np.darts.push_back(d);
      int t = class_of(np);
      if (t < 0) continue;
      ball.skel.add_arc(classes[i].vname + "|" + d, classes[i].vname,
                        classes[t].vname);
      arc_target[{static_cast<int>(i), d}] = t;
    }
  }

  // One step of a face walk: the lifted dart out of class i over d, when the
  // corresponding arc exists in the ball.
  auto step = [&](int i, const Name& d) -> std::optional<std::pair<int, Name>> {
    if (!is_inverse(d)) {
      auto it = arc_target.find({i, d});
      if (it == arc_target.end()) return std::nullopt;
      return std::make_pair(it->second, classes[i].vname + "|" + d);
    }
    Path np = classes[i].rep;
    np.darts.push_back(d);
    int t = class_of(np);
    if (t < 0) return std::nullopt;
    auto it = arc_target.find({t, base_of(d)});
    if (it == arc_target.end() || it->second != i) return std::nullopt;
    return std::make_pair(t, classes[t].vname + "|" + base_of(d) + "^");
  };

  ComplexMap proj;
  proj.target = x;

  std::set<std::vector<Name>> stored;
  std::vector<std::tuple<Name, std::vector<Name>, Name, std::size_t>> faces;
  for (const Name& s : base.face_names()) {
    std::vector<Name> w = base.boundary(s);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (classes[i].end != g.dart_src(w[0])) continue;
      std::vector<Name> lifted;
      std::vector<int> at{static_cast<int>(i)};
      bool ok = true;
      int cur = static_cast<int>(i);
      for (const Name& d : w) {
        auto st = step(cur, d);
        if (!st) {
          ok = false;
          break;
        }
        lifted.push_back(st->second);
        cur = st->first;
        at.push_back(cur);
      }
      if (!ok || cur != static_cast<int>(i)) continue;
      std::size_t n = lifted.size();
      std::size_t best = 0;
      for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
          const Name& lhs = lifted[(best + k) % n];
          const Name& rhs = lifted[(r + k) % n];
          if (rhs < lhs) {
            best = r;
            break;
          }
          if (lhs < rhs) break;
        }
      }
      std::vector<Name> canon;
      canon.reserve(n);
      for (std::size_t k = 0; k < n; ++k) canon.push_back(lifted[(best + k) % n]);
      if (!stored.insert(canon).second) continue;
      Name fname =
          s + "@" + classes[at[best]].vname + "#" + std::to_string(best);
      faces.emplace_back(fname, std::move(canon), s, best);
    }
  }
  for (auto& [fname, word, s, off] : faces) {
    ball.add_face(fname, word);
    proj.set_face(fname, FaceImage::to_face(s, off));
  }

  for (const BallClass& bc : classes) proj.set_vertex(bc.vname, bc.end);
  for (const auto& [key, t] : arc_target)
    proj.set_dart(classes[key.first].vname + "|" + key.second, key.second);

  Truncation tr;
  tr.complex = std::make_shared<const TwoComplex>(std::move(ball));
  proj.source = tr.complex;
  tr.map = std::move(proj);
  tr.basepoint = classes.front().vname;
  tr.radius = bounds.radius;
  for (const BallClass& bc : classes)
    if (bc.level == bounds.radius) tr.frontier.push_back(bc.vname);
  std::sort(tr.frontier.begin(), tr.frontier.end());
  return tr;
}

}  // namespace

UniversalCoverResult universal_cover(std::shared_ptr<const TwoComplex> x,
                                     const Name& v,
                                     const UniversalBounds& bounds) {
  const TwoComplex& base = *x;
  if (!base.skel.has_vertex(v))
    fail(Errc::UnknownCell, "universal_cover: unknown vertex '" + v + "'");
  if (!is_connected(base))
    fail(Errc::NotConnected, "universal_cover: the complex is not connected");

  Graph tree = spanning_tree(base.skel, v);
  Presentation pres = presentation_of(base, tree);
  CosetTable table = coset_enumerate(pres, {}, bounds.max_cosets);

  UniversalCoverResult res;
  if (table.status == CosetTable::Status::Closed)
    res.cover = bottom_up_cover(x, v, tree, table);
  else
    res.truncation = truncate_ball(x, v, bounds);
  return res;
}

}  // namespace cx
