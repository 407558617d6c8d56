#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cx/complex.hpp"
#include "cx/map.hpp"

namespace fx {

using cx::Graph;
using cx::Name;
using cx::TwoComplex;

// Cycle v0 -> v1 -> ... -> v(n-1) -> v0 with arcs a0..a(n-1).
inline Graph cycle_graph(std::size_t n, const std::string& vp = "v",
                         const std::string& ap = "a") {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex(vp + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    g.add_arc(ap + std::to_string(i), vp + std::to_string(i),
              vp + std::to_string((i + 1) % n));
  return g;
}

// One vertex. loops named as given.
inline Graph bouquet(const std::vector<Name>& loops, const Name& v = "o") {
  Graph g;
  g.add_vertex(v);
  for (const Name& a : loops) g.add_arc(a, v, v);
  return g;
}

// Two vertices joined by three parallel arcs.
inline Graph theta() {
  Graph g;
  g.add_vertex("p");
  g.add_vertex("q");
  g.add_arc("a", "p", "q");
  g.add_arc("b", "p", "q");
  g.add_arc("c", "p", "q");
  return g;
}

// Torus: one vertex, loops a and b, square face a b a^ b^.
inline TwoComplex torus() {
  TwoComplex x;
  x.skel = bouquet({"a", "b"});
  x.add_face("t", {"a", "b", "a^", "b^"});
  return x;
}

// Projective plane: one vertex, one loop, face x x.
inline TwoComplex rp2() {
  TwoComplex x;
  x.skel = bouquet({"x"});
  x.add_face("r", {"x", "x"});
  return x;
}

// Sphere built from the circle n -> s -> n and two discs.
inline TwoComplex sph2() {
  TwoComplex x;
  x.skel.add_vertex("n");
  x.skel.add_vertex("s");
  x.skel.add_arc("e1", "n", "s");
  x.skel.add_arc("e2", "s", "n");
  x.add_face("s1", {"e1", "e2"});
  x.add_face("s2", {"e2", "e1"});
  return x;
}

// Single vertex with one loop; the terminal object for graph coverings here.
inline TwoComplex loop1() {
  TwoComplex x;
  x.skel = bouquet({"a"}, "u");
  return x;
}

inline std::shared_ptr<const TwoComplex> shared(TwoComplex x) {
  return std::make_shared<const TwoComplex>(std::move(x));
}

inline std::shared_ptr<const TwoComplex> shared(Graph g) {
  return std::make_shared<const TwoComplex>(cx::as_complex(std::move(g)));
}

// Degree-n cyclic cover of loop1: cycle graph mapping every arc to the loop.
inline cx::ComplexMap cyclic_cover_map(std::size_t n) {
  auto total = shared(cycle_graph(n));
  auto base = shared(loop1());
  cx::ComplexMap m;
  m.source = total;
  m.target = base;
  for (std::size_t i = 0; i < n; ++i) {
    m.set_vertex("v" + std::to_string(i), "u");
    m.set_dart("a" + std::to_string(i), "a");
  }
  return m;
}

// 3-fold irregular cover of the two-loop bouquet: sigma_a = (0 1),
// sigma_b = (0 1 2) acting on fiber p0 p1 p2.
inline cx::ComplexMap irregular3_map() {
  Graph g;
  for (int i = 0; i < 3; ++i) g.add_vertex("p" + std::to_string(i));
  g.add_arc("a0", "p0", "p1");
  g.add_arc("a1", "p1", "p0");
  g.add_arc("a2", "p2", "p2");
  g.add_arc("b0", "p0", "p1");
  g.add_arc("b1", "p1", "p2");
  g.add_arc("b2", "p2", "p0");
  auto total = shared(std::move(g));
  auto base = shared(bouquet({"a", "b"}));
  cx::ComplexMap m;
  m.source = total;
  m.target = base;
  for (int i = 0; i < 3; ++i) {
    m.set_vertex("p" + std::to_string(i), "o");
    m.set_dart("a" + std::to_string(i), "a");
    m.set_dart("b" + std::to_string(i), "b");
  }
  return m;
}

// The antipodal deck transformation of sph2 over rp2.
inline cx::ComplexMap sph2_antipode(std::shared_ptr<const TwoComplex> s) {
  cx::ComplexMap a;
  a.source = s;
  a.target = s;
  a.set_vertex("n", "s");
  a.set_vertex("s", "n");
  a.set_dart("e1", "e2");
  a.set_dart("e2", "e1");
  a.set_face("s1", cx::FaceImage::to_face("s2", 0));
  a.set_face("s2", cx::FaceImage::to_face("s1", 0));
  return a;
}

// Covering sph2 -> rp2 wrapping the circle twice.
inline cx::ComplexMap sph2_over_rp2() {
  auto total = shared(sph2());
  auto base = shared(rp2());
  cx::ComplexMap m;
  m.source = total;
  m.target = base;
  m.set_vertex("n", "o");
  m.set_vertex("s", "o");
  m.set_dart("e1", "x");
  m.set_dart("e2", "x");
  m.set_face("s1", cx::FaceImage::to_face("r", 0));
  m.set_face("s2", cx::FaceImage::to_face("r", 0));
  return m;
}

}  // namespace fx
