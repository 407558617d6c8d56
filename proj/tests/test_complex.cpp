#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cx/complex.hpp"
#include "fixtures.hpp"

using namespace cx;

TEST_CASE("face boundaries obey the orientation-reversal convention") {
  TwoComplex t = fx::torus();
  auto w = t.boundary("t");
  CHECK(w == std::vector<Name>{"a", "b", "a^", "b^"});
  auto wi = t.boundary("t^");
  // position i of the inverse face reads the inverse of position n-1-i
  CHECK(wi == std::vector<Name>{"b", "a", "b^", "a^"});
  CHECK(t.face_size("t") == 4);
  CHECK(t.has_face("t^"));
  CHECK_FALSE(t.has_face("s"));
}

TEST_CASE("face names must be fresh and words nonempty over known darts") {
  TwoComplex x;
  x.skel = fx::bouquet({"a"});
  x.add_face("f", {"a"});
  CHECK_THROWS_AS(x.add_face("f", {"a"}), Error);
  CHECK_THROWS_AS(x.add_face("g^", {"a"}), Error);
  CHECK_THROWS_AS(x.add_face("h", {}), Error);
}

TEST_CASE("validation checks closedness of every face word") {
  TwoComplex x = fx::torus();
  CHECK(validate_complex(x).ok());

  SUBCASE("unknown dart in a word") {
    x.faces["bad"] = {"zz"};
    CHECK_FALSE(validate_complex(x).ok());
  }
  SUBCASE("word that does not close up") {
    TwoComplex y;
    y.skel.add_vertex("p");
    y.skel.add_vertex("q");
    y.skel.add_arc("a", "p", "q");
    y.faces["open"] = {"a"};
    auto rep = validate_complex(y);
    CHECK_FALSE(rep.ok());
  }
  SUBCASE("skeleton damage propagates") {
    x.skel.src["a0_orphan"] = "o";
    CHECK_FALSE(validate_complex(x).ok());
  }
}

TEST_CASE("appearances list boundary positions anchored at a vertex") {
  TwoComplex t = fx::torus();
  auto app = appearances(t, "t", "o");
  CHECK(app == std::vector<std::size_t>{0, 1, 2, 3});

  TwoComplex s = fx::sph2();
  CHECK(appearances(s, "s1", "n") == std::vector<std::size_t>{0});
  CHECK(appearances(s, "s1", "s") == std::vector<std::size_t>{1});
  CHECK(appearances(s, "s1^", "n") == std::vector<std::size_t>{0});
}

TEST_CASE("face subdivision splits along a chord") {
  TwoComplex t = fx::torus();
  TwoComplex s = subdivide_face(t, "t", 0, 2);
  CHECK(s.faces.size() == 2);
  CHECK(s.has_face("t.1"));
  CHECK(s.has_face("t.2"));
  CHECK(s.skel.has_dart("t.c"));
  CHECK(validate_complex(s).ok());
  // chord runs from src(w[0]) to src(w[2]), here o to o
  CHECK(s.skel.dart_src("t.c") == "o");
  CHECK(s.boundary("t.1") == std::vector<Name>{"a", "b", "t.c^"});
  CHECK(s.boundary("t.2") == std::vector<Name>{"t.c", "a^", "b^"});

  CHECK_THROWS_AS(subdivide_face(t, "t", 2, 2), Error);
  CHECK_THROWS_AS(subdivide_face(t, "t", 0, 4), Error);
}

TEST_CASE("subcomplex check demands cells verbatim") {
  TwoComplex t = fx::torus();
  TwoComplex sub;
  sub.skel.add_vertex("o");
  sub.skel.add_arc("a", "o", "o");
  CHECK(is_subcomplex(sub, t));

  TwoComplex bad;
  bad.skel.add_vertex("o");
  bad.skel.add_arc("c", "o", "o");
  CHECK_FALSE(is_subcomplex(bad, t));

  TwoComplex whole = t;
  CHECK(is_subcomplex(whole, t));

  SUBCASE("a face needs its full boundary") {
    TwoComplex f;
    f.skel.add_vertex("o");
    f.skel.add_arc("a", "o", "o");
    f.faces["t"] = {"a", "b", "a^", "b^"};
    CHECK_FALSE(is_subcomplex(f, t));
  }
}

TEST_CASE("complex isomorphism matches faces up to rotation and reflection") {
  TwoComplex a = fx::torus();
  TwoComplex b;
  b.skel = fx::bouquet({"x", "y"}, "w");
  b.add_face("sq", {"y", "x", "y^", "x^"});
  // same shape: commutator square with the roles of the loops swapped
  CHECK(complex_isomorphic(a, b));

  TwoComplex c;
  c.skel = fx::bouquet({"x", "y"}, "w");
  c.add_face("sq", {"x", "y", "x", "y"});
  CHECK_FALSE(complex_isomorphic(a, c));

  CHECK(complex_isomorphic(fx::sph2(), fx::sph2()));
  CHECK_FALSE(complex_isomorphic(fx::sph2(), fx::rp2()));

  SUBCASE("a face may land on the inverse of a face") {
    TwoComplex d;
    d.skel = fx::bouquet({"x", "y"}, "w");
    d.add_face("f", {"x", "y"});
    TwoComplex e;
    e.skel = fx::bouquet({"x", "y"}, "w");
    // same disc attached with the opposite orientation
    e.add_face("g", {"y^", "x^"});
    CHECK(complex_isomorphic(d, e));
  }
}

TEST_CASE("a graph is a complex without faces") {
  TwoComplex g = as_complex(fx::theta());
  CHECK(g.faces.empty());
  CHECK(validate_complex(g).ok());
  CHECK(is_connected(g));
}
