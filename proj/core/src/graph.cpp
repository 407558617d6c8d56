#include "cx/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "union_find.hpp"

namespace cx {

namespace {

// Union-find keys for mixed cell kinds. \x1f never occurs in parsed or
// generated cell names.
std::string vkey(const Name& v) { return std::string("v\x1f") + v; }
std::string dkey(const Name& d) { return std::string("d\x1f") + d; }
bool is_vkey(const std::string& k) { return k[0] == 'v'; }
Name key_name(const std::string& k) { return k.substr(2); }

}  // namespace

void Graph::add_arc(const Name& base, const Name& from, const Name& to) {
  if (is_inverse(base) || base.empty())
    fail(Errc::UsageError, "arc name '" + base + "' must be nonempty and '^'-free");
  if (src.count(base) || src.count(inverse(base)))
    fail(Errc::UsageError, "dart name '" + base + "' already in use");
  if (!has_vertex(from) || !has_vertex(to))
    fail(Errc::UnknownCell, "arc '" + base + "' references unknown vertex");
  src[base] = from;
  src[inverse(base)] = to;
}

const Name& Graph::dart_src(const Name& d) const {
  auto it = src.find(d);
  if (it == src.end()) fail(Errc::UnknownCell, "unknown dart '" + d + "'");
  return it->second;
}

std::vector<Name> Graph::arcs() const {
  std::vector<Name> out;
  for (const auto& [d, v] : src)
    if (!is_inverse(d)) out.push_back(d);
  return out;
}

std::vector<Name> Graph::darts_at(const Name& v) const {
  std::vector<Name> out;
  for (const auto& [d, s] : src)
    if (s == v) out.push_back(d);
  return out;
}

Name Graph::path_end(const Path& p) const {
  return p.darts.empty() ? p.start : dart_dst(p.darts.back());
}

bool Graph::path_valid(const Path& p) const {
  if (!has_vertex(p.start)) return false;
  Name at = p.start;
  for (const Name& d : p.darts) {
    if (!has_dart(d) || dart_src(d) != at) return false;
    at = dart_dst(d);
  }
  return true;
}

bool Graph::path_closed(const Path& p) const {
  return path_valid(p) && path_end(p) == p.start;
}

ValidationReport validate_graph(const Graph& g) {
  ValidationReport r;
  for (const Name& v : g.vertices) {
    if (v.empty()) r.problems.push_back("empty vertex name");
    else if (is_inverse(v))
      r.problems.push_back("vertex name '" + v + "' ends with '^'");
  }
  for (const auto& [d, s] : g.src) {
    if (base_of(d).empty()) {
      r.problems.push_back("dart '" + d + "' has an empty base name");
      continue;
    }
    if (is_inverse(d) && is_inverse(base_of(d))) {
      r.problems.push_back("dart '" + d + "' has a base name ending with '^'");
      continue;
    }
    if (!g.src.count(inverse(d)))
      r.problems.push_back("dart '" + d +
                           "' lacks its inverse partner '" + inverse(d) +
                           "' (the involution must be total and fixed-point-free)");
    if (!g.has_vertex(s))
      r.problems.push_back("dart '" + d + "' starts at unknown vertex '" + s + "'");
  }
  std::sort(r.problems.begin(), r.problems.end());
  return r;
}

ComponentsResult components(const Graph& g) {
  ComponentsResult res;
  std::set<Name> seen;
  for (const Name& v0 : g.vertices) {
    if (seen.count(v0)) continue;
    std::vector<Name> block;
    std::deque<Name> queue{v0};
    seen.insert(v0);
    while (!queue.empty()) {
      Name v = queue.front();
      queue.pop_front();
      block.push_back(v);
      for (const Name& d : g.darts_at(v)) {
        const Name& w = g.dart_dst(d);
        if (!seen.count(w)) {
          seen.insert(w);
          queue.push_back(w);
        }
      }
    }
    std::sort(block.begin(), block.end());
    Graph sub;
    for (const Name& v : block) sub.add_vertex(v);
    for (const auto& [d, s] : g.src)
      if (sub.has_vertex(s)) sub.src[d] = s;
    res.blocks.push_back(std::move(block));
    res.subgraphs.push_back(std::move(sub));
  }
  return res;
}

bool is_connected(const Graph& g) {
  return components(g).blocks.size() <= 1;
}

Graph spanning_tree(const Graph& g, const Name& root,
                    const std::vector<Name>& dart_order) {
  if (!g.has_vertex(root)) fail(Errc::UnknownCell, "unknown root '" + root + "'");
  if (!is_connected(g)) fail(Errc::NotConnected, "spanning tree requires a connected graph");

  std::map<Name, std::size_t> rank;
  if (dart_order.empty()) {
    std::size_t i = 0;
    for (const auto& [d, s] : g.src) rank[d] = i++;
  } else {
    for (std::size_t i = 0; i < dart_order.size(); ++i)
      rank[dart_order[i]] = i;
    for (const auto& [d, s] : g.src)
      if (!rank.count(d))
        fail(Errc::UsageError, "dart_order is missing dart '" + d + "'");
  }

  std::map<Name, std::size_t> dist;
  dist[root] = 0;
  std::deque<Name> queue{root};
  while (!queue.empty()) {
    Name v = queue.front();
    queue.pop_front();
    for (const Name& d : g.darts_at(v)) {
      const Name& w = g.dart_dst(d);
      if (!dist.count(w)) {
        dist[w] = dist.at(v) + 1;
        queue.push_back(w);
      }
    }
  }

  Graph tree;
  for (const Name& v : g.vertices) tree.add_vertex(v);
  for (const Name& w : g.vertices) {
    if (w == root) continue;
    std::size_t dw = dist.at(w);
    Name best;
    bool found = false;
    for (const auto& [d, s] : g.src) {
      if (g.dart_dst(d) != w || dist.at(s) + 1 != dw) continue;
      if (!found || rank.at(d) < rank.at(best)) {
        best = d;
        found = true;
      }
    }
    Name b = base_of(best);
    tree.src[b] = g.dart_src(b);
    tree.src[inverse(b)] = g.dart_src(inverse(b));
  }
  return tree;
}

Path tree_path(const Graph& tree, const Name& from, const Name& to) {
  if (!tree.has_vertex(from) || !tree.has_vertex(to))
    fail(Errc::UnknownCell, "tree_path endpoint not in tree");
  std::map<Name, std::pair<Name, Name>> pred;  // vertex -> (prev vertex, dart)
  std::deque<Name> queue{from};
  std::set<Name> seen{from};
  while (!queue.empty() && !seen.count(to)) {
    Name v = queue.front();
    queue.pop_front();
    for (const Name& d : tree.darts_at(v)) {
      const Name& w = tree.dart_dst(d);
      if (!seen.count(w)) {
        seen.insert(w);
        pred[w] = {v, d};
        queue.push_back(w);
      }
    }
  }
  if (!seen.count(to)) fail(Errc::NotConnected, "no tree path joins the endpoints");
  std::vector<Name> darts;
  for (Name v = to; v != from;) {
    auto [p, d] = pred.at(v);
    darts.push_back(d);
    v = p;
  }
  std::reverse(darts.begin(), darts.end());
  return Path{from, darts};
}

CellRef resolve_cell(const Graph& g, const Name& name) {
  if (g.has_vertex(name)) return {CellRef::Vertex, name};
  if (g.has_dart(name)) return {CellRef::Dart, name};
  fail(Errc::UnknownCell, "no vertex or dart named '" + name + "'");
}

GraphQuotient quotient_graph(
    const Graph& g, const std::vector<std::pair<CellRef, CellRef>>& gen_pairs) {
  detail::UnionFind uf;
  // Seed every cell so singleton classes survive.
  for (const Name& v : g.vertices) uf.find(vkey(v));
  for (const auto& [d, s] : g.src) uf.find(dkey(d));

  auto cell_key = [&](const CellRef& c) {
    if (c.kind == CellRef::Vertex) {
      if (!g.has_vertex(c.name))
        fail(Errc::UnknownCell, "no vertex named '" + c.name + "'");
      return vkey(c.name);
    }
    if (!g.has_dart(c.name))
      fail(Errc::UnknownCell, "no dart named '" + c.name + "'");
    return dkey(c.name);
  };
  // s and inv act as the identity on vertices.
  auto s_of = [&](const std::string& k) {
    return is_vkey(k) ? k : vkey(g.dart_src(key_name(k)));
  };
  auto inv_of = [&](const std::string& k) {
    return is_vkey(k) ? k : dkey(inverse(key_name(k)));
  };

  std::deque<std::pair<std::string, std::string>> work;
  for (const auto& [a, b] : gen_pairs) work.emplace_back(cell_key(a), cell_key(b));
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    if (!uf.unite(a, b)) continue;
    work.emplace_back(s_of(a), s_of(b));
    work.emplace_back(inv_of(a), inv_of(b));
  }

  // Collect classes.
  std::map<std::string, std::vector<std::string>> classes;
  for (const Name& v : g.vertices) classes[uf.find(vkey(v))].push_back(vkey(v));
  for (const auto& [d, s] : g.src) classes[uf.find(dkey(d))].push_back(dkey(d));

  GraphQuotient out;
  std::map<std::string, Name> class_vertex;  // root -> quotient vertex name
  for (auto& [root, members] : classes) {
    std::sort(members.begin(), members.end());
    for (const auto& m : members) {
      if (is_vkey(m)) {
        class_vertex[root] = key_name(m);  // least vertex member (v-keys sort first)
        break;
      }
    }
  }

  Graph q;
  for (const auto& [root, vname] : class_vertex) q.add_vertex(vname);

  // Dart classes: pair with the inverse class; reject e ~ e^ without a vertex.
  std::map<std::string, std::pair<Name, bool>> dart_class_name;  // root -> (name, done)
  for (const auto& [root, members] : classes) {
    if (class_vertex.count(root)) continue;
    const Name least = key_name(members.front());
    std::string iroot = uf.find(dkey(inverse(least)));
    if (iroot == root)
      fail(Errc::NotQuotientRelation,
           "dart '" + least +
           "' is identified with its inverse but its class contains no vertex");
    if (dart_class_name.count(root)) continue;
    const Name ileast = key_name(classes.at(iroot).front());
    if (least < ileast) {
      dart_class_name[root] = {least, true};
      dart_class_name[iroot] = {inverse(least), false};
    } else {
      dart_class_name[iroot] = {ileast, true};
      dart_class_name[root] = {inverse(ileast), false};
    }
  }
  for (const auto& [root, named] : dart_class_name) {
    if (!named.second) continue;  // only canonical side declares the arc
    const Name& base = named.first;
    // Start vertex of the class: image of any member's start.
    const Name rep = key_name(classes.at(root).front());
    const Name from = class_vertex.at(uf.find(vkey(g.dart_src(rep))));
    const Name to = class_vertex.at(uf.find(vkey(g.dart_dst(rep))));
    q.add_arc(base, from, to);
  }

  for (const Name& v : g.vertices)
    out.vertex_class[v] = class_vertex.at(uf.find(vkey(v)));
  for (const auto& [d, s] : g.src) {
    std::string root = uf.find(dkey(d));
    if (class_vertex.count(root))
      out.dart_collapsed[d] = class_vertex.at(root);
    else
      out.dart_class[d] = dart_class_name.at(root).first;
  }
  out.quotient = std::move(q);
  return out;
}

Graph subdivide_edge(const Graph& g, const Name& arc) {
  Name base = base_of(arc);
  if (!g.has_dart(base)) fail(Errc::UnknownArc, "no arc named '" + base + "'");
  const Name from = g.dart_src(base);
  const Name to = g.dart_dst(base);

  auto fresh_vertex = [&](Name n) {
    while (g.has_vertex(n)) n += "'";
    return n;
  };
  auto fresh_arc = [&](Name n, const Name& also) {
    while (g.has_dart(n) || g.has_dart(inverse(n)) || n == also) n += "'";
    return n;
  };
  Name mid = fresh_vertex(base + ".m");
  Name a1 = fresh_arc(base + ".1", "");
  Name a2 = fresh_arc(base + ".2", a1);

  Graph out = g;
  out.src.erase(base);
  out.src.erase(inverse(base));
  out.add_vertex(mid);
  out.add_arc(a1, from, mid);
  out.add_arc(a2, mid, to);
  return out;
}

Graph topological_normal_form(const Graph& g) {
  Graph cur = g;
  for (;;) {
    bool changed = false;
    for (const Name& v : cur.vertices) {
      std::vector<Name> at = cur.darts_at(v);
      if (at.size() != 2) continue;
      const Name& x = at[0];
      const Name& y = at[1];
      if (y == inverse(x)) continue;  // bare cycle component, keep the loop
      Name p = cur.dart_dst(x);
      Name q = cur.dart_dst(y);
      Name keep = std::min(base_of(x), base_of(y));
      Graph next = cur;
      next.src.erase(base_of(x));
      next.src.erase(inverse(base_of(x)));
      next.src.erase(base_of(y));
      next.src.erase(inverse(base_of(y)));
      next.vertices.erase(v);
      next.add_arc(keep, p, q);
      cur = std::move(next);
      changed = true;
      break;
    }
    if (!changed) return cur;
  }
}

namespace {

// Counts darts from u to w (loops at u when u == w).
std::size_t darts_between(const Graph& g, const Name& u, const Name& w) {
  std::size_t n = 0;
  for (const auto& [d, s] : g.src)
    if (s == u && g.dart_dst(d) == w) ++n;
  return n;
}

bool extend_iso(const Graph& a, const Graph& b,
                const std::vector<Name>& averts, std::size_t i,
                std::map<Name, Name>& image, std::set<Name>& used) {
  if (i == averts.size()) return true;
  const Name& u = averts[i];
  for (const Name& u2 : b.vertices) {
    if (used.count(u2) || b.valency(u2) != a.valency(u)) continue;
    bool ok = darts_between(a, u, u) == darts_between(b, u2, u2);
    if (ok) {
      for (const auto& [w, w2] : image) {
        if (darts_between(a, u, w) != darts_between(b, u2, w2)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    image[u] = u2;
    used.insert(u2);
    if (extend_iso(a, b, averts, i + 1, image, used)) return true;
    image.erase(u);
    used.erase(u2);
  }
  return false;
}

}  // namespace

bool graph_isomorphic(const Graph& a, const Graph& b) {
  if (a.vertices.size() != b.vertices.size() || a.src.size() != b.src.size())
    return false;
  std::vector<std::size_t> va, vb;
  for (const Name& v : a.vertices) va.push_back(a.valency(v));
  for (const Name& v : b.vertices) vb.push_back(b.valency(v));
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  if (va != vb) return false;

  std::vector<Name> averts(a.vertices.begin(), a.vertices.end());
  std::sort(averts.begin(), averts.end(), [&](const Name& x, const Name& y) {
    return std::make_pair(a.valency(x), x) > std::make_pair(a.valency(y), y);
  });
  std::map<Name, Name> image;
  std::set<Name> used;
  return extend_iso(a, b, averts, 0, image, used);
}

bool is_homeomorphic(const Graph& a, const Graph& b) {
  return graph_isomorphic(topological_normal_form(a), topological_normal_form(b));
}

}  // namespace cx
