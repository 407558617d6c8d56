#include "cx/permgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace cx {

Permutation Permutation::identity(std::size_t n) {
  Permutation p;
  p.img.resize(n);
  std::iota(p.img.begin(), p.img.end(), 0);
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < img.size(); ++i)
    if (img[i] != static_cast<int>(i)) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.img.resize(img.size());
  for (std::size_t i = 0; i < img.size(); ++i)
    p.img[static_cast<std::size_t>(img[i])] = static_cast<int>(i);
  return p;
}

std::size_t Permutation::order() const {
  Permutation acc = *this;
  std::size_t k = 1;
  while (!acc.is_identity()) {
    acc = acc * *this;
    ++k;
  }
  return k;
}

std::string Permutation::cycle_string() const {
  std::ostringstream out;
  std::vector<bool> seen(img.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (seen[i] || img[i] == static_cast<int>(i)) continue;
    any = true;
    out << '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out << ' ';
      out << j;
      first = false;
      j = static_cast<std::size_t>(img[j]);
    }
    out << ')';
  }
  if (!any) return "()";
  return out.str();
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree())
    fail(Errc::DomainMismatch, "permutation degrees differ: " +
                                   std::to_string(a.degree()) + " vs " +
                                   std::to_string(b.degree()));
  Permutation p;
  p.img.resize(a.degree());
  for (std::size_t i = 0; i < a.degree(); ++i)
    p.img[i] = a.img[static_cast<std::size_t>(b.img[i])];
  return p;
}

bool PermGroup::contains(const Permutation& p) const {
  return std::binary_search(elements.begin(), elements.end(), p);
}

namespace {

bool valid_perm(const Permutation& p, std::size_t degree) {
  if (p.degree() != degree) return false;
  std::vector<bool> hit(degree, false);
  for (int v : p.img) {
    if (v < 0 || v >= static_cast<int>(degree) ||
        hit[static_cast<std::size_t>(v)])
      return false;
    hit[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

std::vector<Permutation> close_elements(std::size_t degree,
                                        const std::vector<Permutation>& gens) {
  std::set<Permutation> seen;
  std::deque<Permutation> work;
  Permutation id = Permutation::identity(degree);
  seen.insert(id);
  work.push_back(id);
  while (!work.empty()) {
    Permutation cur = work.front();
    work.pop_front();
    for (const Permutation& g : gens) {
      Permutation nxt = g * cur;
      if (seen.insert(nxt).second) work.push_back(nxt);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

PermGroup closure(std::size_t degree, std::vector<Permutation> gens) {
  for (const Permutation& g : gens)
    if (!valid_perm(g, degree))
      fail(Errc::DomainMismatch,
           "generator is not a permutation of degree " + std::to_string(degree));
  PermGroup result;
  result.degree = degree;
  result.generators = std::move(gens);
  result.elements = close_elements(degree, result.generators);
  return result;
}

std::vector<PermGroup> all_subgroups(const PermGroup& g, std::size_t cap) {
  if (g.order() > cap)
    fail(Errc::TooLarge, "group of order " + std::to_string(g.order()) +
                             " exceeds the subgroup enumeration cap " +
                             std::to_string(cap));
  // Seed with all cyclic subgroups, then close under join until stable.
  std::set<std::vector<Permutation>> found;
  found.insert({Permutation::identity(g.degree)});
  for (const Permutation& p : g.elements)
    found.insert(close_elements(g.degree, {p}));

  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<Permutation>> snapshot(found.begin(), found.end());
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
      for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
        std::vector<Permutation> gens = snapshot[i];
        gens.insert(gens.end(), snapshot[j].begin(), snapshot[j].end());
        std::vector<Permutation> joined = close_elements(g.degree, gens);
        if (joined.size() <= g.order() && found.insert(joined).second)
          grew = true;
      }
    }
  }

  std::vector<PermGroup> out;
  for (const std::vector<Permutation>& elems : found) {
    PermGroup h;
    h.degree = g.degree;
    h.elements = elems;
    // Use the full element list as a generating set; callers only need
    // membership and products.
    h.generators = elems;
    out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(),
            [](const PermGroup& a, const PermGroup& b) {
              if (a.order() != b.order()) return a.order() < b.order();
              return a.elements < b.elements;
            });
  return out;
}

std::size_t SubgroupLattice::hasse_edge_count() const {
  return hasse_edges().size();
}

std::vector<std::pair<int, int>> SubgroupLattice::hasse_edges() const {
  std::vector<std::pair<int, int>> edges;
  const int n = static_cast<int>(subgroups.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        continue;
      bool covered = true;
      for (int k = 0; k < n && covered; ++k) {
        if (k == i || k == j) continue;
        if (leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
            leq[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
          covered = false;
      }
      if (covered) edges.emplace_back(i, j);
    }
  }
  return edges;
}

SubgroupLattice subgroup_lattice(const PermGroup& g, std::size_t cap) {
  SubgroupLattice lat;
  lat.subgroups = all_subgroups(g, cap);
  const std::size_t n = lat.subgroups.size();
  lat.leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      lat.leq[i][j] = is_subgroup(lat.subgroups[i], lat.subgroups[j]);

  auto index_of = [&](const std::vector<Permutation>& elems) {
    for (std::size_t k = 0; k < n; ++k)
      if (lat.subgroups[k].elements == elems) return static_cast<int>(k);
    fail(Errc::NotSubgroup, "meet/join escaped the subgroup enumeration");
  };

  lat.meet.assign(n, std::vector<int>(n, 0));
  lat.join.assign(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      lat.meet[i][j] = index_of(intersect(lat.subgroups[i], lat.subgroups[j]).elements);
      lat.join[i][j] =
          index_of(generated_join(lat.subgroups[i], lat.subgroups[j]).elements);
    }
  }
  lat.bottom = 0;
  lat.top = static_cast<int>(n) - 1;
  return lat;
}

bool is_subgroup(const PermGroup& h, const PermGroup& g) {
  if (h.degree != g.degree) return false;
  return std::includes(g.elements.begin(), g.elements.end(),
                       h.elements.begin(), h.elements.end());
}

bool is_normal(const PermGroup& h, const PermGroup& g) {
  if (!is_subgroup(h, g))
    fail(Errc::NotSubgroup, "normality asked for a non-subgroup");
  for (const Permutation& a : g.elements) {
    Permutation ai = a.inverse();
    for (const Permutation& x : h.elements)
      if (!h.contains(a * x * ai)) return false;
  }
  return true;
}

PermGroup normalizer(const PermGroup& h, const PermGroup& g) {
  if (!is_subgroup(h, g))
    fail(Errc::NotSubgroup, "normalizer asked for a non-subgroup");
  std::vector<Permutation> members;
  for (const Permutation& a : g.elements) {
    Permutation ai = a.inverse();
    bool ok = true;
    for (const Permutation& x : h.elements)
      if (!h.contains(a * x * ai)) {
        ok = false;
        break;
      }
    if (ok) members.push_back(a);
  }
  PermGroup out;
  out.degree = g.degree;
  out.elements = members;  // already sorted as a subsequence of g.elements
  out.generators = members;
  return out;
}

PermGroup intersect(const PermGroup& a, const PermGroup& b) {
  if (a.degree != b.degree)
    fail(Errc::DomainMismatch, "intersecting groups of different degrees");
  PermGroup out;
  out.degree = a.degree;
  std::set_intersection(a.elements.begin(), a.elements.end(),
                        b.elements.begin(), b.elements.end(),
                        std::back_inserter(out.elements));
  out.generators = out.elements;
  return out;
}

PermGroup generated_join(const PermGroup& a, const PermGroup& b) {
  if (a.degree != b.degree)
    fail(Errc::DomainMismatch, "joining groups of different degrees");
  std::vector<Permutation> gens = a.elements;
  gens.insert(gens.end(), b.elements.begin(), b.elements.end());
  return closure(a.degree, std::move(gens));
}

namespace {

// Greedy small generating set: add elements until they generate the group.
std::vector<Permutation> generating_set(const PermGroup& g) {
  std::vector<Permutation> gens;
  std::vector<Permutation> current = {Permutation::identity(g.degree)};
  for (const Permutation& p : g.elements) {
    if (std::binary_search(current.begin(), current.end(), p)) continue;
    gens.push_back(p);
    current = close_elements(g.degree, gens);
    if (current.size() == g.order()) break;
  }
  return gens;
}

bool extend_group_iso(const PermGroup& a, const PermGroup& b,
                      const std::vector<Permutation>& gens_a,
                      std::vector<Permutation>& images, std::size_t pos) {
  if (pos == gens_a.size()) {
    // Close the pair set (x, phi(x)) under right multiplication by the
    // chosen generator images; the map is an isomorphism iff no clash
    // appears and every element of a is reached with distinct images.
    std::map<Permutation, Permutation> phi;
    std::deque<Permutation> work;
    phi[Permutation::identity(a.degree)] = Permutation::identity(b.degree);
    work.push_back(Permutation::identity(a.degree));
    while (!work.empty()) {
      Permutation x = work.front();
      work.pop_front();
      const Permutation& y = phi.at(x);
      for (std::size_t i = 0; i < gens_a.size(); ++i) {
        Permutation x2 = gens_a[i] * x;
        Permutation y2 = images[i] * y;
        auto it = phi.find(x2);
        if (it == phi.end()) {
          phi[x2] = y2;
          work.push_back(x2);
        } else if (it->second != y2) {
          return false;
        }
      }
    }
    if (phi.size() != a.order()) return false;
    std::set<Permutation> values;
    for (const auto& [x, y] : phi) values.insert(y);
    return values.size() == b.order();
  }
  std::size_t want = gens_a[pos].order();
  for (const Permutation& cand : b.elements) {
    if (cand.order() != want) continue;
    images[pos] = cand;
    if (extend_group_iso(a, b, gens_a, images, pos + 1)) return true;
  }
  return false;
}

}  // namespace

bool groups_isomorphic(const PermGroup& a, const PermGroup& b) {
  if (a.order() != b.order()) return false;
  std::multiset<std::size_t> orders_a, orders_b;
  for (const Permutation& p : a.elements) orders_a.insert(p.order());
  for (const Permutation& p : b.elements) orders_b.insert(p.order());
  if (orders_a != orders_b) return false;
  std::vector<Permutation> gens_a = generating_set(a);
  if (gens_a.empty()) return true;  // both trivial
  std::vector<Permutation> images(gens_a.size(),
                                  Permutation::identity(b.degree));
  return extend_group_iso(a, b, gens_a, images, 0);
}

}  // namespace cx
