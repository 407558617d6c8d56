#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cx/error.hpp"

namespace cx {

// Cells are identified by printable names. Darts come in pairs: the dart
// named "e" and its inverse named "e^". The trailing '^' IS the involution;
// a name never ends in '^' unless it denotes the inverse of the '^'-free
// base dart. Faces follow the same convention.
using Name = std::string;

inline bool is_inverse(const Name& n) {
  return !n.empty() && n.back() == '^';
}

inline Name inverse(const Name& n) {
  if (is_inverse(n)) return n.substr(0, n.size() - 1);
  return n + "^";
}

// Base (canonical, '^'-free) name of a dart or face.
inline Name base_of(const Name& n) {
  return is_inverse(n) ? n.substr(0, n.size() - 1) : n;
}

// A path: start vertex plus a dart sequence. The empty path is the closed
// path at `start`. Incidence is checked against a Graph, not here.
struct Path {
  Name start;
  std::vector<Name> darts;

  bool operator==(const Path&) const = default;
};

struct ValidationReport {
  std::vector<std::string> problems;
  // Informational findings that do not make the object invalid (for example
  // an inconclusive bounded homotopy check).
  std::vector<std::string> notes;

  bool ok() const { return problems.empty(); }
};

// A finite 1-complex. `src` is total on darts and keyed by every dart name,
// both '^'-free bases and their inverses.
struct Graph {
  std::set<Name> vertices;
  std::map<Name, Name> src;

  void add_vertex(const Name& v) { vertices.insert(v); }

  // Declares the dart pair base / base^ running from `from` to `to`.
  void add_arc(const Name& base, const Name& from, const Name& to);

  bool has_vertex(const Name& v) const { return vertices.count(v) > 0; }
  bool has_dart(const Name& d) const { return src.count(d) > 0; }

  const Name& dart_src(const Name& d) const;
  const Name& dart_dst(const Name& d) const { return dart_src(inverse(d)); }

  // Canonical ('^'-free) dart names, one per arc, sorted.
  std::vector<Name> arcs() const;
  // All darts with src == v, sorted.
  std::vector<Name> darts_at(const Name& v) const;
  std::size_t valency(const Name& v) const { return darts_at(v).size(); }

  Name path_end(const Path& p) const;
  bool path_valid(const Path& p) const;
  bool path_closed(const Path& p) const;

  bool operator==(const Graph&) const = default;
};

ValidationReport validate_graph(const Graph& g);

struct ComponentsResult {
  // Parallel lists: block i of vertices and its induced subgraph.
  std::vector<std::vector<Name>> blocks;
  std::vector<Graph> subgraphs;
};

ComponentsResult components(const Graph& g);
bool is_connected(const Graph& g);

// Layered spanning tree from `root`: vertices are ranked by BFS distance and
// each non-root vertex is joined by the minimal dart from the previous
// layer. `dart_order` defaults to lexicographic name order; a custom order
// must list every dart. Output keeps all vertices and the tree arcs only.
Graph spanning_tree(const Graph& g, const Name& root,
                    const std::vector<Name>& dart_order = {});

// Unique reduced path between two vertices of a tree (as built above).
Path tree_path(const Graph& tree, const Name& from, const Name& to);

// Kind-tagged cell reference for quotient generators.
struct CellRef {
  enum Kind { Vertex, Dart } kind;
  Name name;

  static CellRef vertex(Name n) { return {Vertex, std::move(n)}; }
  static CellRef dart(Name n) { return {Dart, std::move(n)}; }
  bool operator==(const CellRef&) const = default;
};

CellRef resolve_cell(const Graph& g, const Name& name);

struct GraphQuotient {
  Graph quotient;
  // Class names: a vertex class is named by its least vertex member; a dart
  // class pair by the least dart name across the pair (always '^'-free).
  std::map<Name, Name> vertex_class;          // vertex -> quotient vertex
  std::map<Name, Name> dart_class;            // dart -> quotient dart
  std::map<Name, Name> dart_collapsed;        // dart -> quotient vertex
};

// Quotient by the smallest quotient relation containing the given pairs.
// Closure propagates start vertices and inverses, treating vertices as fixed
// points of both maps; a class containing a dart and its inverse must also
// contain a vertex, otherwise NotQuotientRelation.
GraphQuotient quotient_graph(
    const Graph& g, const std::vector<std::pair<CellRef, CellRef>>& gen_pairs);

Graph subdivide_edge(const Graph& g, const Name& arc);

// Un-subdivides valency-2 vertices until none remain, except that a
// component that is a bare cycle keeps one vertex and one loop arc.
Graph topological_normal_form(const Graph& g);

bool graph_isomorphic(const Graph& a, const Graph& b);
bool is_homeomorphic(const Graph& a, const Graph& b);

}  // namespace cx
