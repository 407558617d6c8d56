#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cx/constructions.hpp"
#include "fixtures.hpp"

using namespace cx;

namespace {

std::shared_ptr<const TwoComplex> seg() {
  TwoComplex x;
  x.skel.add_vertex("u");
  x.skel.add_vertex("v");
  x.skel.add_arc("e", "u", "v");
  return fx::shared(std::move(x));
}

// Rotation of the n-cycle by one step.
ComplexMap cycle_rotation(std::shared_ptr<const TwoComplex> c, std::size_t n) {
  ComplexMap r;
  r.source = c;
  r.target = c;
  for (std::size_t i = 0; i < n; ++i) {
    r.set_vertex("v" + std::to_string(i), "v" + std::to_string((i + 1) % n));
    r.set_dart("a" + std::to_string(i), "a" + std::to_string((i + 1) % n));
  }
  return r;
}

// Three-cycle and two-cycle with hexagonal faces over the one-loop hexagon.
std::shared_ptr<const TwoComplex> hex_base() {
  TwoComplex b;
  b.skel = fx::bouquet({"e"});
  b.add_face("H", {"e", "e", "e", "e", "e", "e"});
  return fx::shared(std::move(b));
}

ComplexMap hex_cover(std::size_t n, const std::string& vp, const std::string& ap,
                     const std::string& fp,
                     std::shared_ptr<const TwoComplex> base) {
  TwoComplex x;
  x.skel = fx::cycle_graph(n, vp, ap);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Name> w;
    for (std::size_t p = 0; p < 6; ++p)
      w.push_back(ap + std::to_string((i + p) % n));
    x.add_face(fp + std::to_string(i), std::move(w));
  }
  auto xs = fx::shared(std::move(x));
  ComplexMap f;
  f.source = xs;
  f.target = base;
  for (std::size_t i = 0; i < n; ++i) {
    f.set_vertex(vp + std::to_string(i), "o");
    f.set_dart(ap + std::to_string(i), "e");
    f.set_face(fp + std::to_string(i), FaceImage::to_face("H", 0));
  }
  return f;
}

// Double cover of the loop-with-whisker graph: the a-fiber is a 2-cycle.
ComplexMap whisker_double_cover(std::shared_ptr<const TwoComplex> base) {
  TwoComplex y;
  for (const char* v : {"u1", "u2", "w1", "w2"}) y.skel.add_vertex(v);
  y.skel.add_arc("a1", "u1", "u2");
  y.skel.add_arc("a2", "u2", "u1");
  y.skel.add_arc("b1", "u1", "w1");
  y.skel.add_arc("b2", "u2", "w2");
  auto ys = fx::shared(std::move(y));
  ComplexMap f;
  f.source = ys;
  f.target = base;
  for (int i : {1, 2}) {
    f.set_vertex("u" + std::to_string(i), "u");
    f.set_vertex("w" + std::to_string(i), "w");
    f.set_dart("a" + std::to_string(i), "a");
    f.set_dart("b" + std::to_string(i), "b");
  }
  return f;
}

std::shared_ptr<const TwoComplex> whisker_base() {
  TwoComplex x;
  x.skel.add_vertex("u");
  x.skel.add_vertex("w");
  x.skel.add_arc("a", "u", "u");
  x.skel.add_arc("b", "u", "w");
  return fx::shared(std::move(x));
}

std::size_t fiber_size(const ComplexMap& f, const Name& base_vertex) {
  std::size_t n = 0;
  for (const Name& v : f.source->skel.vertices)
    if (f.vertex_image(v) == base_vertex) ++n;
  return n;
}

}  // namespace

TEST_CASE("disjoint union prefixes the two summands") {
  TwoComplex u = disjoint_union(fx::torus(), fx::sph2());
  CHECK(u.skel.vertices.size() == 3);
  CHECK(u.skel.arcs().size() == 4);
  CHECK(u.faces.size() == 3);
  CHECK(u.skel.has_vertex("1:o"));
  CHECK(u.has_face("2:s1"));
  CHECK(u.boundary("1:t") ==
        std::vector<Name>{"1:a", "1:b", "1:a^", "1:b^"});
  CHECK(validate_complex(u).ok());
  CHECK_FALSE(is_connected(u.skel));
}

TEST_CASE("component extraction keeps the faces of the piece") {
  TwoComplex u = disjoint_union(fx::torus(), fx::sph2());
  TwoComplex piece = component_containing(u, "2:n");
  CHECK(piece.skel.vertices.size() == 2);
  CHECK(piece.faces.size() == 2);
  CHECK(complex_isomorphic(piece, fx::sph2()));
  CHECK_THROWS_AS(component_containing(u, "nowhere"), Error);
}

TEST_CASE("trivial group action leaves the complex unchanged") {
  auto t = fx::shared(fx::torus());
  GroupAction a = make_group_action(t, {});
  CHECK(a.closure.size() == 1);
  QuotientResult r = quotient_by_group_action(a);
  CHECK(*r.complex == *t);
  CHECK(r.q.same_maps(identity_map(t)));
  CHECK(validate_map(r.q).ok());
}

TEST_CASE("antipodal action on the sphere gives the projective plane") {
  auto s = fx::shared(fx::sph2());
  GroupAction a = make_group_action(s, {fx::sph2_antipode(s)});
  CHECK(a.closure.size() == 2);
  QuotientResult r = quotient_by_group_action(a);
  CHECK(r.complex->skel.vertices.size() == 1);
  CHECK(r.complex->skel.arcs().size() == 1);
  CHECK(r.complex->faces.size() == 1);
  CHECK(r.complex->face_size("s1") == 2);
  CHECK(complex_isomorphic(*r.complex, fx::rp2()));
  CHECK(validate_map(r.q).ok());
  CHECK(r.q.vertex_image("s") == "n");
  CHECK(r.q.face_image("s2") == FaceImage::to_face("s1", 0));
}

TEST_CASE("cyclic rotation action on the 4-cycle gives one loop") {
  auto c = fx::shared(fx::cycle_graph(4));
  GroupAction a = make_group_action(c, {cycle_rotation(c, 4)});
  CHECK(a.closure.size() == 4);
  QuotientResult r = quotient_by_group_action(a);
  CHECK(r.complex->skel.vertices.size() == 1);
  CHECK(r.complex->skel.arcs().size() == 1);
  CHECK(graph_isomorphic(r.complex->skel, fx::loop1().skel));
}

TEST_CASE("orientation reversing action is rejected at quotient time") {
  auto l = fx::shared(fx::loop1());
  ComplexMap flip;
  flip.source = l;
  flip.target = l;
  flip.set_vertex("u", "u");
  flip.set_dart("a", "a^");
  GroupAction a = make_group_action(l, {flip});
  CHECK(a.closure.size() == 2);
  CHECK_THROWS_AS(quotient_by_group_action(a), Error);
  try {
    quotient_by_group_action(a);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotOrientationPreserving);
  }
}

TEST_CASE("group action generators must be automorphisms") {
  auto l = fx::shared(fx::loop1());
  ComplexMap collapse;
  collapse.source = l;
  collapse.target = l;
  collapse.set_vertex("u", "u");
  collapse.set_dart_collapsed("a", "u");
  CHECK_THROWS_AS(make_group_action(l, {collapse}), Error);
}

TEST_CASE("collapsing the one-vertex spanning tree of the torus is a no-op") {
  auto t = fx::shared(fx::torus());
  TwoComplex part;
  part.skel.add_vertex("o");
  QuotientResult r = quotient_by_subcomplexes(t, {part});
  CHECK(*r.complex == *t);
  CHECK(validate_map(r.q).ok());
}

TEST_CASE("collapsing one arc of the 2-cycle leaves a single loop") {
  auto c = fx::shared(fx::cycle_graph(2));
  TwoComplex part;
  part.skel.add_vertex("v0");
  part.skel.add_vertex("v1");
  part.skel.add_arc("a0", "v0", "v1");
  QuotientResult r = quotient_by_subcomplexes(c, {part});
  CHECK(r.complex->skel.vertices.size() == 1);
  CHECK(r.complex->skel.arcs().size() == 1);
  CHECK(graph_isomorphic(r.complex->skel, fx::loop1().skel));
  CHECK(r.q.dart_collapses("a0"));
  CHECK(r.q.vertex_image("v1") == "v0");
  CHECK(r.q.dart_image("a1") == "a1");
}

TEST_CASE("collapsing a spanning tree squashes the 4-cycle to one loop") {
  Graph g = fx::cycle_graph(4);
  Graph tree = spanning_tree(g, "v0");
  CHECK(tree.arcs() == std::vector<Name>{"a0", "a1", "a3"});
  auto c = fx::shared(g);
  QuotientResult r = quotient_by_subcomplexes(c, {as_complex(tree)});
  CHECK(r.complex->skel.vertices.size() == 1);
  CHECK(r.complex->skel.arcs().size() == g.arcs().size() - tree.arcs().size());
}

TEST_CASE("quotient parts must be disjoint nonempty subcomplexes") {
  auto c = fx::shared(fx::cycle_graph(2));
  TwoComplex p1;
  p1.skel.add_vertex("v0");
  TwoComplex p2;
  p2.skel.add_vertex("v0");
  CHECK_THROWS_AS(quotient_by_subcomplexes(c, {p1, p2}), Error);
  TwoComplex foreign;
  foreign.skel.add_vertex("z");
  CHECK_THROWS_AS(quotient_by_subcomplexes(c, {foreign}), Error);
  CHECK_THROWS_AS(quotient_by_subcomplexes(c, {TwoComplex{}}), Error);
}

TEST_CASE("subdividing then collapsing the chord restores the boundary total") {
  TwoComplex split = subdivide_face(fx::torus(), "t", 0, 2);
  CHECK(split.faces.size() == 2);
  auto xs = fx::shared(std::move(split));
  TwoComplex part;
  part.skel.add_vertex("o");
  part.skel.add_arc("t.c", "o", "o");
  QuotientResult r = quotient_by_subcomplexes(xs, {part});
  CHECK(r.complex->faces.size() == 2);
  std::size_t total = 0;
  for (const Name& f : r.complex->face_names()) total += r.complex->face_size(f);
  CHECK(total == 4);
}

TEST_CASE("pushout of two spheres along a point is their wedge") {
  auto s1 = fx::shared(fx::sph2());
  auto s2 = fx::shared(fx::sph2());
  TwoComplex pt;
  pt.skel.add_vertex("w");
  auto y = fx::shared(std::move(pt));
  ComplexMap f1;
  f1.source = y;
  f1.target = s1;
  f1.set_vertex("w", "n");
  ComplexMap f2;
  f2.source = y;
  f2.target = s2;
  f2.set_vertex("w", "n");
  PushoutResult p = pushout(f1, f2);
  CHECK(p.complex->skel.vertices.size() == 3);
  CHECK(p.complex->skel.arcs().size() == 4);
  CHECK(p.complex->faces.size() == 4);
  CHECK(is_connected(p.complex->skel));
  CHECK(validate_map(p.t1).ok());
  CHECK(validate_map(p.t2).ok());
  CHECK(compose_maps(p.t1, f1).same_maps(compose_maps(p.t2, f2)));
}

TEST_CASE("pushout refuses identifications without consistent orientations") {
  auto y = seg();
  ComplexMap f1 = identity_map(y);
  ComplexMap f2;
  f2.source = y;
  f2.target = y;
  f2.set_vertex("u", "v");
  f2.set_vertex("v", "u");
  f2.set_dart("e", "e^");
  CHECK(validate_map(f2).ok());
  CHECK_THROWS_AS(pushout(f1, f2), Error);
  try {
    pushout(f1, f2);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotQuotientRelation);
  }
}

TEST_CASE("pushout folds two arcs sharing a start") {
  TwoComplex star;
  star.skel.add_vertex("r");
  star.skel.add_vertex("s");
  star.skel.add_vertex("t");
  star.skel.add_arc("a", "r", "s");
  star.skel.add_arc("b", "r", "t");
  auto x = fx::shared(std::move(star));
  auto y = seg();
  ComplexMap f1;
  f1.source = y;
  f1.target = x;
  f1.set_vertex("u", "r");
  f1.set_vertex("v", "s");
  f1.set_dart("e", "a");
  ComplexMap f2;
  f2.source = y;
  f2.target = x;
  f2.set_vertex("u", "r");
  f2.set_vertex("v", "t");
  f2.set_dart("e", "b");
  PushoutResult p = pushout(f1, f2);
  CHECK(p.complex->skel.arcs().size() == x->skel.arcs().size() - 1);
  CHECK(p.complex->skel.vertices.size() == 2);
  CHECK(p.t1.same_maps(p.t2));
  CHECK(p.t1.dart_image("b") == "a");
  CHECK(p.t1.vertex_image("t") == "s");

  ComplexMap h = pushout_factorize(p, p.t1, p.t2);
  CHECK(h.same_maps(identity_map(p.complex)));
}

TEST_CASE("pushout factorization sends both spheres onto one") {
  auto s1 = fx::shared(fx::sph2());
  auto s2 = fx::shared(fx::sph2());
  TwoComplex pt;
  pt.skel.add_vertex("w");
  auto y = fx::shared(std::move(pt));
  ComplexMap f1;
  f1.source = y;
  f1.target = s1;
  f1.set_vertex("w", "n");
  ComplexMap f2;
  f2.source = y;
  f2.target = s2;
  f2.set_vertex("w", "n");
  PushoutResult p = pushout(f1, f2);

  ComplexMap g1 = identity_map(s1);
  ComplexMap g2;
  g2.source = s2;
  g2.target = s1;
  g2.set_vertex("n", "n");
  g2.set_vertex("s", "s");
  g2.set_dart("e1", "e1");
  g2.set_dart("e2", "e2");
  g2.set_face("s1", FaceImage::to_face("s1", 0));
  g2.set_face("s2", FaceImage::to_face("s2", 0));
  ComplexMap h = pushout_factorize(p, g1, g2);
  CHECK(validate_map(h).ok());
  CHECK(compose_maps(h, p.t1).same_maps(g1));
  CHECK(compose_maps(h, p.t2).same_maps(g2));

  ComplexMap bad = fx::sph2_antipode(s2);
  bad.target = s1;
  CHECK_THROWS_AS(pushout_factorize(p, g1, bad), Error);
}

TEST_CASE("pushout legs must share a source and preserve dimension") {
  auto y = seg();
  ComplexMap f1 = identity_map(y);
  ComplexMap other = identity_map(fx::shared(fx::torus()));
  CHECK_THROWS_AS(pushout(f1, other), Error);
  ComplexMap squash;
  squash.source = y;
  squash.target = fx::shared(fx::loop1());
  squash.set_vertex("u", "u");
  squash.set_vertex("v", "u");
  squash.set_dart_collapsed("e", "u");
  CHECK_THROWS_AS(pushout(squash, squash), Error);
}

TEST_CASE("pullback of the 2- and 3-cycle covers is the 6-cycle") {
  ComplexMap f1 = fx::cyclic_cover_map(2);
  ComplexMap f2 = fx::cyclic_cover_map(3);
  PullbackResult q = pullback(f1, f2);
  CHECK(q.complex->skel.vertices.size() == 6);
  CHECK(q.complex->skel.arcs().size() == 6);
  CHECK(is_connected(q.complex->skel));
  CHECK(compose_maps(f1, q.t1).same_maps(compose_maps(f2, q.t2)));

  TwoComplex z6 = as_complex(fx::cycle_graph(6, "w", "d"));
  auto z = fx::shared(std::move(z6));
  ComplexMap g1;
  g1.source = z;
  g1.target = f1.source;
  ComplexMap g2;
  g2.source = z;
  g2.target = f2.source;
  for (int i = 0; i < 6; ++i) {
    g1.set_vertex("w" + std::to_string(i), "v" + std::to_string(i % 2));
    g1.set_dart("d" + std::to_string(i), "a" + std::to_string(i % 2));
    g2.set_vertex("w" + std::to_string(i), "v" + std::to_string(i % 3));
    g2.set_dart("d" + std::to_string(i), "a" + std::to_string(i % 3));
  }
  ComplexMap h = pullback_factorize(q, g1, g2);
  CHECK(validate_map(h).ok());
  CHECK(is_isomorphism(h));
  CHECK(compose_maps(q.t1, h).same_maps(g1));
  CHECK(compose_maps(q.t2, h).same_maps(g2));
}

TEST_CASE("pullback of the hexagonal covers pairs the faces positionwise") {
  auto base = hex_base();
  ComplexMap f1 = hex_cover(3, "c", "x", "F", base);
  ComplexMap f2 = hex_cover(2, "d", "y", "G", base);
  PullbackResult q = pullback(f1, f2);
  CHECK(q.complex->skel.vertices.size() == 6);
  CHECK(q.complex->skel.arcs().size() == 6);
  CHECK(q.complex->faces.size() == 6);
  CHECK(q.complex->boundary("F0|G0") ==
        std::vector<Name>{"x0|y0", "x1|y1", "x2|y0", "x0|y1", "x1|y0",
                          "x2|y1"});
  CHECK(validate_map(q.t1).ok());
  CHECK(validate_map(q.t2).ok());
  CHECK(q.t1.face_image("F0|G0") == FaceImage::to_face("F0", 0));
  CHECK(compose_maps(f1, q.t1).same_maps(compose_maps(f2, q.t2)));

  ComplexMap h = pullback_factorize(q, q.t1, q.t2);
  CHECK(h.same_maps(identity_map(q.complex)));
}

TEST_CASE("pullback along identity legs is the diagonal") {
  auto t = fx::shared(fx::torus());
  PullbackResult q = pullback(identity_map(t), identity_map(t));
  CHECK(q.complex->skel.vertices.size() == 1);
  CHECK(q.complex->skel.arcs().size() == 2);
  CHECK(q.complex->faces.size() == 1);
  CHECK(complex_isomorphic(*q.complex, *t));
  CHECK(is_isomorphism(q.t1));
}

TEST_CASE("pullback legs must share a target and preserve dimension") {
  ComplexMap f1 = fx::cyclic_cover_map(2);
  ComplexMap other = identity_map(fx::shared(fx::torus()));
  CHECK_THROWS_AS(pullback(f1, other), Error);
  auto y = seg();
  ComplexMap squash;
  squash.source = y;
  squash.target = fx::shared(fx::loop1());
  squash.set_vertex("u", "u");
  squash.set_vertex("v", "u");
  squash.set_dart_collapsed("e", "u");
  CHECK_THROWS_AS(pullback(squash, squash), Error);
}

TEST_CASE("splicing the two whisker covers along separate pairs reconnects them") {
  auto base = whisker_base();
  ComplexMap f1 = whisker_double_cover(base);
  ComplexMap f2 = whisker_double_cover(base);
  HandleConfiguration hc;
  hc.edge = "a";
  hc.pairs = {{0, "a1", "a2"}, {1, "a1", "a2"}};
  validate_handle_configuration({f1, f2}, hc);
  HigmanResult out = higman_composition({f1, f2}, hc);
  CHECK(out.complex->skel.vertices.size() == 8);
  CHECK(out.complex->skel.arcs().size() == 8);
  CHECK(components(out.complex->skel).blocks.size() == 2);
  CHECK(fiber_size(out.map, "u") == 4);
  CHECK(validate_map(out.map).ok());
  CHECK(out.complex->skel.dart_src("1:a1") == "1:u1");
  CHECK(out.complex->skel.dart_dst("1:a1") == "2:u2");
  CHECK(out.complex->skel.dart_dst("2:a1") == "1:u2");
  CHECK(out.complex->skel.dart_dst("1:a2") == "2:u1");
  CHECK(out.complex->skel.dart_dst("2:a2") == "1:u1");
}

TEST_CASE("splicing a double cover with two loose sheets is connected") {
  auto base = whisker_base();
  ComplexMap f1 = whisker_double_cover(base);
  TwoComplex two;
  for (const char* v : {"v1", "x1", "v2", "x2"}) two.skel.add_vertex(v);
  two.skel.add_arc("as1", "v1", "v1");
  two.skel.add_arc("bs1", "v1", "x1");
  two.skel.add_arc("as2", "v2", "v2");
  two.skel.add_arc("bs2", "v2", "x2");
  auto ys = fx::shared(std::move(two));
  ComplexMap f2;
  f2.source = ys;
  f2.target = base;
  for (int i : {1, 2}) {
    f2.set_vertex("v" + std::to_string(i), "u");
    f2.set_vertex("x" + std::to_string(i), "w");
    f2.set_dart("as" + std::to_string(i), "a");
    f2.set_dart("bs" + std::to_string(i), "b");
  }
  HandleConfiguration hc;
  hc.edge = "a";
  hc.pairs = {{0, "a1", "a2"}, {1, "as1", "as2"}};
  HigmanResult out = higman_composition({f1, f2}, hc);
  CHECK(is_connected(out.complex->skel));
  CHECK(fiber_size(out.map, "u") == 4);
  CHECK(out.complex->skel.arcs().size() == 8);
  CHECK(out.complex->skel.dart_dst("1:a1") == "2:v1");
  CHECK(out.complex->skel.dart_dst("2:as1") == "1:u2");
  CHECK(validate_map(out.map).ok());
}

TEST_CASE("splicing the 2- and 3-cycle covers leaves two components") {
  ComplexMap f1 = fx::cyclic_cover_map(2);
  ComplexMap f2 = fx::cyclic_cover_map(3);
  HandleConfiguration hc;
  hc.edge = "a";
  hc.pairs = {{0, "a0", "a1"}, {1, "a0", "a1"}};
  HigmanResult out = higman_composition({f1, f2}, hc);
  CHECK(out.complex->skel.vertices.size() == 5);
  CHECK(out.complex->skel.arcs().size() == 5);
  CHECK(components(out.complex->skel).blocks.size() == 2);
  CHECK(fiber_size(out.map, "u") == 5);
}

TEST_CASE("one-pair self splice returns the cover unchanged") {
  ComplexMap f = fx::cyclic_cover_map(2);
  HandleConfiguration hc;
  hc.edge = "a";
  hc.pairs = {{0, "a0", "a1"}};
  HigmanResult out = higman_composition({f}, hc);
  CHECK(*out.complex == *f.source);
  CHECK(out.map.same_maps(f));
}

TEST_CASE("pure power handle faces are rethreaded cyclically") {
  TwoComplex b;
  b.skel = fx::bouquet({"e"});
  b.add_face("s", {"e", "e"});
  auto base = fx::shared(std::move(b));
  TwoComplex y;
  y.skel = fx::bouquet({"p1a", "p1b", "p2a", "p2b"}, "w");
  y.add_face("T11", {"p1a", "p1a"});
  y.add_face("T12", {"p1b", "p1b"});
  y.add_face("T21", {"p2a", "p2a"});
  y.add_face("T22", {"p2b", "p2b"});
  auto ys = fx::shared(std::move(y));
  ComplexMap f;
  f.source = ys;
  f.target = base;
  f.set_vertex("w", "o");
  for (const char* d : {"p1a", "p1b", "p2a", "p2b"}) f.set_dart(d, "e");
  for (const char* t : {"T11", "T12", "T21", "T22"})
    f.set_face(t, FaceImage::to_face("s", 0));
  REQUIRE(validate_map(f).ok());

  HandleConfiguration hc;
  hc.edge = "e";
  hc.pairs = {{0, "p1a", "p1b"}, {0, "p2a", "p2b"}};
  HigmanResult out = higman_composition({f}, hc);
  CHECK(out.complex->boundary("T11") == std::vector<Name>{"p1a", "p2a"});
  CHECK(out.complex->boundary("T21") == std::vector<Name>{"p2a", "p1a"});
  CHECK(out.complex->boundary("T12") == std::vector<Name>{"p1b", "p2b"});
  CHECK(out.complex->boundary("T22") == std::vector<Name>{"p2b", "p1b"});
  CHECK(validate_map(out.map).ok());

  TwoComplex missing = *ys;
  missing.faces.erase("T22");
  ComplexMap g = f;
  g.source = fx::shared(std::move(missing));
  g.fmap.erase("T22");
  CHECK_THROWS_AS(validate_handle_configuration({g}, hc), Error);
}

TEST_CASE("taco handle faces are rethreaded with the next pair") {
  TwoComplex b;
  b.skel = fx::bouquet({"e", "g"});
  b.add_face("s", {"e", "g", "e", "g"});
  auto base = fx::shared(std::move(b));
  TwoComplex y;
  y.skel = fx::bouquet({"d11", "d12", "d21", "d22", "c1", "c1p", "c2", "c2p"},
                       "w");
  y.add_face("t1", {"d11", "c1", "d12", "c1p"});
  y.add_face("t2", {"d21", "c2", "d22", "c2p"});
  auto ys = fx::shared(std::move(y));
  ComplexMap f;
  f.source = ys;
  f.target = base;
  f.set_vertex("w", "o");
  for (const char* d : {"d11", "d12", "d21", "d22"}) f.set_dart(d, "e");
  for (const char* d : {"c1", "c1p", "c2", "c2p"}) f.set_dart(d, "g");
  f.set_face("t1", FaceImage::to_face("s", 0));
  f.set_face("t2", FaceImage::to_face("s", 0));
  REQUIRE(validate_map(f).ok());

  HandleConfiguration hc;
  hc.edge = "e";
  hc.pairs = {{0, "d11", "d12"}, {0, "d21", "d22"}};
  HigmanResult out = higman_composition({f}, hc);
  CHECK(out.complex->boundary("t1") ==
        std::vector<Name>{"d11", "c2", "d22", "c1p"});
  CHECK(out.complex->boundary("t2") ==
        std::vector<Name>{"d21", "c1", "d12", "c2p"});
  CHECK(validate_map(out.map).ok());
  CHECK(out.map.face_image("t1") == FaceImage::to_face("s", 0));
}

TEST_CASE("one-pair taco splice keeps the face word") {
  TwoComplex b;
  b.skel = fx::bouquet({"e", "g"});
  b.add_face("s", {"e", "g", "e", "g"});
  auto base = fx::shared(std::move(b));
  TwoComplex y;
  y.skel = fx::bouquet({"d1", "d2", "c1", "c2"}, "w");
  y.add_face("T", {"d1", "c1", "d2", "c2"});
  auto ys = fx::shared(std::move(y));
  ComplexMap f;
  f.source = ys;
  f.target = base;
  f.set_vertex("w", "o");
  for (const char* d : {"d1", "d2"}) f.set_dart(d, "e");
  for (const char* d : {"c1", "c2"}) f.set_dart(d, "g");
  f.set_face("T", FaceImage::to_face("s", 0));
  REQUIRE(validate_map(f).ok());

  HandleConfiguration hc;
  hc.edge = "e";
  hc.pairs = {{0, "d1", "d2"}};
  HigmanResult out = higman_composition({f}, hc);
  CHECK(*out.complex == *ys);
  CHECK(out.map.same_maps(f));
}

TEST_CASE("handle configuration rejections") {
  ComplexMap f1 = fx::cyclic_cover_map(2);
  ComplexMap f2 = fx::cyclic_cover_map(3);
  HandleConfiguration hc;
  hc.edge = "a";

  SUBCASE("unknown base arc") {
    hc.edge = "z";
    hc.pairs = {{0, "a0", "a1"}};
    CHECK_THROWS_AS(validate_handle_configuration({f1}, hc), Error);
  }
  SUBCASE("pair dart outside the fiber") {
    auto base = whisker_base();
    ComplexMap f = whisker_double_cover(base);
    hc.pairs = {{0, "b1", "a2"}};
    CHECK_THROWS_AS(validate_handle_configuration({f}, hc), Error);
  }
  SUBCASE("every source needs a pair") {
    hc.pairs = {{0, "a0", "a1"}};
    CHECK_THROWS_AS(validate_handle_configuration({f1, f2}, hc), Error);
  }
  SUBCASE("pair darts must be distinct and unrepeated") {
    hc.pairs = {{0, "a0", "a0"}};
    CHECK_THROWS_AS(validate_handle_configuration({f1}, hc), Error);
    hc.pairs = {{0, "a0", "a1"}, {0, "a1", "a0"}};
    CHECK_THROWS_AS(validate_handle_configuration({f1}, hc), Error);
  }
  SUBCASE("source index out of range") {
    hc.pairs = {{3, "a0", "a1"}};
    CHECK_THROWS_AS(validate_handle_configuration({f1}, hc), Error);
  }
}

TEST_CASE("handle face clause rejections") {
  TwoComplex b;
  b.skel = fx::bouquet({"e", "g"});
  b.add_face("s", {"e", "g", "e", "g"});
  auto base = fx::shared(std::move(b));

  auto cover_with_face = [&](std::vector<Name> word) {
    TwoComplex y;
    y.skel = fx::bouquet({"d11", "d12", "d21", "d22", "c1", "c2"}, "w");
    y.add_face("T", std::move(word));
    auto ys = fx::shared(std::move(y));
    ComplexMap f;
    f.source = ys;
    f.target = base;
    f.set_vertex("w", "o");
    for (const char* d : {"d11", "d12", "d21", "d22"}) f.set_dart(d, "e");
    for (const char* d : {"c1", "c2"}) f.set_dart(d, "g");
    f.set_face("T", FaceImage::to_face("s", 0));
    REQUIRE(validate_map(f).ok());
    return f;
  };

  HandleConfiguration hc;
  hc.edge = "e";
  hc.pairs = {{0, "d11", "d12"}, {0, "d21", "d22"}};

  SUBCASE("mixing darts of two pairs in one face") {
    ComplexMap f = cover_with_face({"d11", "c1", "d21", "c2"});
    CHECK_THROWS_AS(validate_handle_configuration({f}, hc), Error);
  }
  SUBCASE("pair darts that do not alternate") {
    ComplexMap f = cover_with_face({"d11", "c1", "d11", "c2"});
    CHECK_THROWS_AS(validate_handle_configuration({f}, hc), Error);
  }
  SUBCASE("missing the taco of the other pair") {
    ComplexMap f = cover_with_face({"d11", "c1", "d12", "c2"});
    CHECK_THROWS_AS(validate_handle_configuration({f}, hc), Error);
  }
  SUBCASE("backwards pair dart inside a taco") {
    TwoComplex b2;
    b2.skel = fx::bouquet({"e", "g"});
    b2.add_face("s", {"e", "e^", "e", "g"});
    auto base2 = fx::shared(std::move(b2));
    TwoComplex y;
    y.skel = fx::bouquet({"d1", "d2", "c"}, "w");
    y.add_face("T", {"d1", "d2^", "d2", "c"});
    auto ys = fx::shared(std::move(y));
    ComplexMap f;
    f.source = ys;
    f.target = base2;
    f.set_vertex("w", "o");
    f.set_dart("d1", "e");
    f.set_dart("d2", "e");
    f.set_dart("c", "g");
    f.set_face("T", FaceImage::to_face("s", 0));
    REQUIRE(validate_map(f).ok());
    HandleConfiguration one;
    one.edge = "e";
    one.pairs = {{0, "d1", "d2"}};
    CHECK_THROWS_AS(validate_handle_configuration({f}, one), Error);
  }
  SUBCASE("pure power with the wrong exponent") {
    TwoComplex b3;
    b3.skel = fx::bouquet({"e"});
    b3.add_face("s", {"e", "e", "e"});
    auto base3 = fx::shared(std::move(b3));
    TwoComplex y;
    y.skel = fx::bouquet({"d11", "d12", "d21", "d22"}, "w");
    y.add_face("T", {"d11", "d11", "d11"});
    auto ys = fx::shared(std::move(y));
    ComplexMap f;
    f.source = ys;
    f.target = base3;
    f.set_vertex("w", "o");
    for (const char* d : {"d11", "d12", "d21", "d22"}) f.set_dart(d, "e");
    f.set_face("T", FaceImage::to_face("s", 0));
    REQUIRE(validate_map(f).ok());
    CHECK_THROWS_AS(validate_handle_configuration({f}, hc), Error);
  }
}
