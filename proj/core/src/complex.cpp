#include "cx/complex.hpp"

#include <algorithm>

namespace cx {

void TwoComplex::add_face(const Name& name, std::vector<Name> word) {
  if (name.empty() || is_inverse(name))
    fail(Errc::UsageError, "face name '" + name + "' must be nonempty and '^'-free");
  if (faces.count(name))
    fail(Errc::UsageError, "face name '" + name + "' already in use");
  if (word.empty())
    fail(Errc::UsageError, "face '" + name + "' must have a nonempty boundary");
  faces.emplace(name, std::move(word));
}

std::vector<Name> TwoComplex::face_names() const {
  std::vector<Name> out;
  for (const auto& [f, w] : faces) out.push_back(f);
  return out;
}

std::vector<Name> TwoComplex::all_face_names() const {
  std::vector<Name> out;
  for (const auto& [f, w] : faces) {
    out.push_back(f);
    out.push_back(inverse(f));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Name> TwoComplex::boundary(const Name& f) const {
  auto it = faces.find(base_of(f));
  if (it == faces.end()) fail(Errc::UnknownCell, "unknown face '" + f + "'");
  if (!is_inverse(f)) return it->second;
  const std::vector<Name>& w = it->second;
  std::vector<Name> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    out[i] = inverse(w[w.size() - 1 - i]);
  return out;
}

std::size_t TwoComplex::face_size(const Name& f) const {
  auto it = faces.find(base_of(f));
  if (it == faces.end()) fail(Errc::UnknownCell, "unknown face '" + f + "'");
  return it->second.size();
}

ValidationReport validate_complex(const TwoComplex& x) {
  ValidationReport r = validate_graph(x.skel);
  for (const auto& [f, w] : x.faces) {
    if (f.empty() || is_inverse(f)) {
      r.problems.push_back("face '" + f + "' stored under a non-canonical name");
      continue;
    }
    if (w.empty()) {
      r.problems.push_back("face '" + f + "' has an empty boundary");
      continue;
    }
    bool known = true;
    for (const Name& d : w) {
      if (!x.skel.has_dart(d)) {
        r.problems.push_back("face '" + f + "' uses unknown dart '" + d + "'");
        known = false;
      }
    }
    if (!known) continue;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Name& here = w[i];
      const Name& next = w[(i + 1) % w.size()];
      if (x.skel.dart_dst(here) != x.skel.dart_src(next)) {
        r.problems.push_back("face '" + f + "' boundary not closed at position " +
                             std::to_string(i));
      }
    }
  }
  std::sort(r.problems.begin(), r.problems.end());
  return r;
}

bool is_connected(const TwoComplex& x) { return is_connected(x.skel); }

std::vector<std::size_t> appearances(const TwoComplex& x, const Name& f, const Name& v) {
  std::vector<std::size_t> out;
  std::vector<Name> w = x.boundary(f);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (x.skel.dart_src(w[i]) == v) out.push_back(i);
  return out;
}

TwoComplex subdivide_face(const TwoComplex& x, const Name& face,
                          std::size_t i, std::size_t j) {
  if (is_inverse(face))
    fail(Errc::UsageError, "subdivide_face expects the canonical face name");
  auto it = x.faces.find(face);
  if (it == x.faces.end()) fail(Errc::UnknownCell, "unknown face '" + face + "'");
  const std::vector<Name>& w = it->second;
  const std::size_t n = w.size();
  if (!(i < j && j < n))
    fail(Errc::BadPositions, "need positions i < j < boundary length");
  const Name ui = x.skel.dart_src(w[i]);
  const Name uj = x.skel.dart_src(w[j]);

  auto fresh_arc = [&](Name nm) {
    while (x.skel.has_dart(nm) || x.skel.has_dart(inverse(nm))) nm += "'";
    return nm;
  };
  auto fresh_face = [&](Name nm) {
    while (x.has_face(nm)) nm += "'";
    return nm;
  };
  Name chord = fresh_arc(face + ".c");
  Name f1 = fresh_face(face + ".1");
  Name f2 = fresh_face(face + ".2");

  TwoComplex out = x;
  out.faces.erase(face);
  out.skel.add_arc(chord, ui, uj);
  std::vector<Name> w1(w.begin() + i, w.begin() + j);
  w1.push_back(inverse(chord));
  std::vector<Name> w2{chord};
  for (std::size_t p = j; p != i; p = (p + 1) % n) w2.push_back(w[p]);
  out.add_face(f1, std::move(w1));
  out.add_face(f2, std::move(w2));
  return out;
}

bool is_subcomplex(const TwoComplex& sub, const TwoComplex& x) {
  if (!validate_complex(sub).ok()) return false;
  for (const Name& v : sub.skel.vertices)
    if (!x.skel.has_vertex(v)) return false;
  for (const auto& [d, s] : sub.skel.src) {
    if (!x.skel.has_dart(d)) return false;
    if (x.skel.dart_src(d) != s) return false;
  }
  for (const auto& [f, w] : sub.faces) {
    auto it = x.faces.find(f);
    if (it == x.faces.end() || it->second != w) return false;
  }
  return true;
}

namespace {

std::size_t darts_between(const Graph& g, const Name& u, const Name& w) {
  std::size_t n = 0;
  for (const auto& [d, s] : g.src)
    if (s == u && g.dart_dst(d) == w) ++n;
  return n;
}

struct IsoSearch {
  const TwoComplex& a;
  const TwoComplex& b;
  std::vector<Name> averts;
  std::map<Name, Name> vimage;
  std::set<Name> vused;
  std::map<Name, Name> dimage;  // both orientations
  std::set<Name> dused;

  bool faces_match() {
    // Map every canonical a-face to a distinct b-face pair at some rotation.
    std::vector<Name> afaces;
    for (const auto& [f, w] : a.faces) afaces.push_back(f);
    std::set<Name> used;  // canonical b names taken
    return assign_face(afaces, 0, used);
  }

  bool assign_face(const std::vector<Name>& afaces, std::size_t idx,
                   std::set<Name>& used) {
    if (idx == afaces.size()) return true;
    const Name& f = afaces[idx];
    std::vector<Name> w = a.boundary(f);
    std::vector<Name> img(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) img[i] = dimage.at(w[i]);
    for (const Name& g : b.all_face_names()) {
      if (used.count(base_of(g))) continue;
      std::vector<Name> wb = b.boundary(g);
      if (wb.size() != img.size()) continue;
      for (std::size_t r = 0; r < wb.size(); ++r) {
        bool ok = true;
        for (std::size_t i = 0; i < wb.size() && ok; ++i)
          ok = wb[(i + r) % wb.size()] == img[i];
        if (!ok) continue;
        used.insert(base_of(g));
        if (assign_face(afaces, idx + 1, used)) return true;
        used.erase(base_of(g));
        break;  // other rotations map to the same cell pair
      }
    }
    return false;
  }

  bool assign_darts(const std::vector<Name>& arcs, std::size_t idx) {
    if (idx == arcs.size()) return faces_match();
    const Name& d = arcs[idx];
    const Name fu = vimage.at(a.skel.dart_src(d));
    const Name fw = vimage.at(a.skel.dart_dst(d));
    for (const auto& [e, s] : b.skel.src) {
      if (dused.count(e)) continue;
      if (s != fu || b.skel.dart_dst(e) != fw) continue;
      dimage[d] = e;
      dimage[inverse(d)] = inverse(e);
      dused.insert(e);
      dused.insert(inverse(e));
      if (assign_darts(arcs, idx + 1)) return true;
      dimage.erase(d);
      dimage.erase(inverse(d));
      dused.erase(e);
      dused.erase(inverse(e));
    }
    return false;
  }

  bool assign_vertex(std::size_t i) {
    if (i == averts.size()) return assign_darts(a.skel.arcs(), 0);
    const Name& u = averts[i];
    for (const Name& u2 : b.skel.vertices) {
      if (vused.count(u2) || b.skel.valency(u2) != a.skel.valency(u)) continue;
      bool ok = darts_between(a.skel, u, u) == darts_between(b.skel, u2, u2);
      if (ok) {
        for (const auto& [w, w2] : vimage)
          if (darts_between(a.skel, u, w) != darts_between(b.skel, u2, w2)) {
            ok = false;
            break;
          }
      }
      if (!ok) continue;
      vimage[u] = u2;
      vused.insert(u2);
      if (assign_vertex(i + 1)) return true;
      vimage.erase(u);
      vused.erase(u2);
    }
    return false;
  }
};

}  // namespace

bool complex_isomorphic(const TwoComplex& a, const TwoComplex& b) {
  if (a.skel.vertices.size() != b.skel.vertices.size()) return false;
  if (a.skel.src.size() != b.skel.src.size()) return false;
  if (a.faces.size() != b.faces.size()) return false;
  std::vector<std::size_t> la, lb;
  for (const auto& [f, w] : a.faces) la.push_back(w.size());
  for (const auto& [f, w] : b.faces) lb.push_back(w.size());
  std::sort(la.begin(), la.end());
  std::sort(lb.begin(), lb.end());
  if (la != lb) return false;

  IsoSearch s{a, b, {}, {}, {}, {}, {}};
  s.averts.assign(a.skel.vertices.begin(), a.skel.vertices.end());
  std::sort(s.averts.begin(), s.averts.end(), [&](const Name& x, const Name& y) {
    return std::make_pair(a.skel.valency(x), x) > std::make_pair(a.skel.valency(y), y);
  });
  return s.assign_vertex(0);
}

}  // namespace cx
