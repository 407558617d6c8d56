#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cx/permgroup.hpp"

using namespace cx;

namespace {

Permutation perm(std::vector<int> img) {
  Permutation p;
  p.img = std::move(img);
  return p;
}

PermGroup s3() { return closure(3, {perm({1, 0, 2}), perm({1, 2, 0})}); }
PermGroup z4() { return closure(4, {perm({1, 2, 3, 0})}); }
PermGroup v4() { return closure(4, {perm({1, 0, 3, 2}), perm({2, 3, 0, 1})}); }

Permutation rot(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) img[static_cast<std::size_t>(i)] = (i + 1) % n;
  return perm(std::move(img));
}

}  // namespace

TEST_CASE("products compose right to left") {
  Permutation a = perm({1, 0, 2});  // swap 0,1
  Permutation b = perm({0, 2, 1});  // swap 1,2
  Permutation ab = a * b;
  CHECK(ab(2) == 0);  // b sends 2 to 1, then a sends 1 to 0
  CHECK(ab(0) == 1);
  Permutation id = Permutation::identity(3);
  CHECK(a * a == id);
  CHECK(a.inverse() == a);
  CHECK((a * b).inverse() == b.inverse() * a.inverse());
}

TEST_CASE("orders and cycle strings") {
  CHECK(rot(4).order() == 4);
  CHECK(Permutation::identity(5).order() == 1);
  CHECK(perm({1, 2, 0, 4, 3}).cycle_string() == "(0 1 2)(3 4)");
  CHECK(Permutation::identity(3).cycle_string() == "()");
}

TEST_CASE("closure builds the generated group") {
  PermGroup g = s3();
  CHECK(g.order() == 6);
  CHECK(g.contains(perm({2, 1, 0})));
  CHECK(closure(4, {}).order() == 1);
  CHECK_THROWS_AS(closure(3, {perm({0, 1})}), Error);
  CHECK_THROWS_AS(closure(3, {perm({0, 0, 1})}), Error);
}

TEST_CASE("subgroup enumeration matches known counts") {
  CHECK(all_subgroups(s3()).size() == 6);
  CHECK(all_subgroups(z4()).size() == 3);
  CHECK(all_subgroups(v4()).size() == 5);
  CHECK(all_subgroups(closure(6, {rot(6)})).size() == 4);
  CHECK(all_subgroups(closure(12, {rot(12)})).size() == 6);

  PermGroup big = closure(65, {rot(65)});
  CHECK_THROWS_AS(all_subgroups(big, 64), Error);
}

TEST_CASE("subgroup lattice has meets, joins and a Hasse diagram") {
  SubgroupLattice lat = subgroup_lattice(s3());
  CHECK(lat.subgroups.size() == 6);
  CHECK(lat.subgroups[static_cast<std::size_t>(lat.bottom)].order() == 1);
  CHECK(lat.subgroups[static_cast<std::size_t>(lat.top)].order() == 6);
  CHECK(lat.hasse_edge_count() == 8);

  const std::size_t n = lat.subgroups.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      int m = lat.meet[i][j];
      int jn = lat.join[i][j];
      CHECK(lat.leq[static_cast<std::size_t>(m)][i]);
      CHECK(lat.leq[static_cast<std::size_t>(m)][j]);
      CHECK(lat.leq[i][static_cast<std::size_t>(jn)]);
      CHECK(lat.leq[j][static_cast<std::size_t>(jn)]);
      CHECK(lat.meet[i][i] == static_cast<int>(i));
      CHECK(lat.join[i][i] == static_cast<int>(i));
    }
  }
}

TEST_CASE("normality, normalizers and stabilizer orders") {
  PermGroup g = s3();
  // stabilizer of the point 0
  std::vector<Permutation> stab;
  for (const Permutation& p : g.elements)
    if (p(0) == 0) stab.push_back(p);
  PermGroup h;
  h.degree = 3;
  h.elements = stab;
  h.generators = stab;
  CHECK(h.order() == 2);
  CHECK_FALSE(is_normal(h, g));
  CHECK(normalizer(h, g).order() == 2);

  PermGroup a3 = closure(3, {perm({1, 2, 0})});
  CHECK(is_normal(a3, g));
  CHECK(normalizer(a3, g).order() == 6);

  PermGroup other = closure(4, {rot(4)});
  CHECK_THROWS_AS(is_normal(other, g), Error);
}

TEST_CASE("meet and join agree with intersection and generation") {
  PermGroup g = v4();
  PermGroup h1 = closure(4, {perm({1, 0, 3, 2})});
  PermGroup h2 = closure(4, {perm({2, 3, 0, 1})});
  CHECK(intersect(h1, h2).order() == 1);
  CHECK(generated_join(h1, h2).order() == 4);
  CHECK(is_subgroup(h1, g));
  CHECK_FALSE(is_subgroup(g, h1));
}

TEST_CASE("abstract isomorphism distinguishes Z4 from V4") {
  CHECK_FALSE(groups_isomorphic(z4(), v4()));
  PermGroup z4b = closure(4, {perm({3, 0, 1, 2})});
  CHECK(groups_isomorphic(z4(), z4b));
  // S3 on 3 points vs its left-regular representation on 6
  PermGroup s3reg = closure(
      6, {perm({2, 3, 0, 1, 5, 4}), perm({3, 2, 5, 4, 0, 1})});
  REQUIRE(s3reg.order() == 6);
  CHECK(groups_isomorphic(s3(), s3reg));
  CHECK(groups_isomorphic(closure(2, {}), closure(5, {})));
}
