#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cx/homotopy.hpp"
#include "fixtures.hpp"

using namespace cx;

TEST_CASE("free reduction cancels adjacent inverse pairs") {
  TwoComplex l = fx::loop1();
  Path p{"u", {"a", "a^", "a", "a", "a^"}};
  Path r = reduce_path(l.skel, p);
  CHECK(r.darts == std::vector<Name>{"a"});
  CHECK(r.start == "u");

  Path q{"u", {"a", "a^"}};
  CHECK(reduce_path(l.skel, q).darts.empty());
}

TEST_CASE("moves apply only where legal") {
  TwoComplex t = fx::torus();
  Path p{"o", {"a", "b"}};

  HomotopyMove spur;
  spur.kind = HomotopyMove::SpurInsert;
  spur.pos = 1;
  spur.dart = "b^";
  Path p2 = apply_move(t, p, spur);
  CHECK(p2.darts == std::vector<Name>{"a", "b^", "b", "b"});

  HomotopyMove del;
  del.kind = HomotopyMove::SpurDelete;
  del.pos = 1;
  Path p3 = apply_move(t, p2, del);
  CHECK(p3.darts == p.darts);

  HomotopyMove bad = del;
  bad.pos = 0;
  CHECK_THROWS_AS(apply_move(t, p2, bad), Error);

  HomotopyMove facein;
  facein.kind = HomotopyMove::FaceInsert;
  facein.face = "t";
  facein.bpos = 0;
  facein.pos = 0;
  Path p4 = apply_move(t, p, facein);
  CHECK(p4.darts == std::vector<Name>{"a", "b", "a^", "b^", "a", "b"});

  HomotopyMove faceout;
  faceout.kind = HomotopyMove::FaceDelete;
  faceout.face = "t";
  faceout.bpos = 0;
  faceout.pos = 0;
  CHECK(apply_move(t, p4, faceout).darts == p.darts);

  HomotopyMove wrongrot = faceout;
  wrongrot.bpos = 1;
  CHECK_THROWS_AS(apply_move(t, p4, wrongrot), Error);
}

TEST_CASE("face deletion accepts any rotation and either orientation") {
  TwoComplex t = fx::torus();
  // b a^ b^ a is the rotation of t's word by 1
  Path p{"o", {"b", "a^", "b^", "a"}};
  HomotopyMove m;
  m.kind = HomotopyMove::FaceDelete;
  m.face = "t";
  m.bpos = 1;
  m.pos = 0;
  CHECK(apply_move(t, p, m).darts.empty());

  // the inverse face's word b a b^ a^
  Path q{"o", {"b", "a", "b^", "a^"}};
  HomotopyMove mi;
  mi.kind = HomotopyMove::FaceDelete;
  mi.face = "t^";
  mi.bpos = 0;
  mi.pos = 0;
  CHECK(apply_move(t, q, mi).darts.empty());
}

TEST_CASE("graphs get exact homotopy decisions with certificates") {
  TwoComplex th = as_complex(fx::theta());
  Path p{"p", {"a", "b^", "b", "a^"}};
  Path q{"p", {}};
  HomotopyVerdict v = homotopic_bounded(th, p, q);
  CHECK(v.status == HomotopyVerdict::Proven);
  // replay the certificate
  Path cur = p;
  for (const HomotopyMove& m : v.moves) cur = apply_move(th, cur, m);
  CHECK(reduce_path(th.skel, cur).darts == q.darts);
  CHECK(cur.darts == q.darts);

  Path r{"p", {"a", "b^"}};
  HomotopyVerdict w = homotopic_bounded(th, q, r);
  CHECK(w.status == HomotopyVerdict::Refuted);

  Path far{"q", {}};
  CHECK_THROWS_AS(homotopic_bounded(th, p, far), Error);
}

TEST_CASE("certificates also bridge two unreduced paths in a graph") {
  TwoComplex l = fx::loop1();
  Path p{"u", {"a", "a^", "a"}};
  Path q{"u", {"a", "a", "a^"}};
  HomotopyVerdict v = homotopic_bounded(l, p, q);
  REQUIRE(v.status == HomotopyVerdict::Proven);
  Path cur = p;
  for (const HomotopyMove& m : v.moves) cur = apply_move(l, cur, m);
  CHECK(cur.darts == q.darts);
}

TEST_CASE("torus commutator collapses within tight bounds") {
  TwoComplex t = fx::torus();
  Path ab{"o", {"a", "b"}};
  Path ba{"o", {"b", "a"}};
  HomotopyVerdict v = homotopic_bounded(t, ab, ba, 8, 4);
  REQUIRE(v.status == HomotopyVerdict::Proven);
  CHECK(v.moves.size() == 3);
  Path cur = ab;
  for (const HomotopyMove& m : v.moves) cur = apply_move(t, cur, m);
  CHECK(cur.start == ba.start);
  CHECK(cur.darts == ba.darts);
}

TEST_CASE("exhausted search reports inconclusive, not refuted") {
  TwoComplex t = fx::torus();
  Path ab{"o", {"a", "b"}};
  Path ba{"o", {"b", "a"}};
  HomotopyVerdict v = homotopic_bounded(t, ab, ba, 4, 1);
  CHECK(v.status == HomotopyVerdict::Inconclusive);
  CHECK_FALSE(v.reason.empty());
}

TEST_CASE("legal moves stay within the length budget") {
  TwoComplex t = fx::torus();
  Path p{"o", {"a", "b"}};
  auto moves = legal_moves(t, p, 4);
  for (const auto& m : moves) {
    Path r = apply_move(t, p, m);
    CHECK(r.darts.size() <= 4);
  }
  // with a budget of 6 spur inserts appear
  auto more = legal_moves(t, p, 6);
  CHECK(more.size() > moves.size());
}
