#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "eikonal/grid.hpp"

using namespace eikonal;

namespace {

bool has_normal(const BoundaryEntry& e, Normal n) {
  for (int t = 0; t < e.normal_count; ++t)
    if (e.normals[static_cast<std::size_t>(t)] == n) return true;
  return false;
}

}  // namespace

TEST_CASE("coords of hand-evaluated nodes") {
  const GridSpec spec(2, 4, 5);
  const Point origin = coords(spec, Coarse{0, 0});
  CHECK(origin.x == 0.0);
  CHECK(origin.y == 0.0);

  // iH = 1/4, jH + mh = 2/4 + 3/20 = 0.65.
  const Point v = coords(spec, VShift{1, 2, 3});
  CHECK(v.x == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(v.y == doctest::Approx(0.65).epsilon(1e-15));

  const Point far = coords(spec, Fine{3, 3, 5, 5});
  CHECK(far.x == 1.0);
  CHECK(far.y == 1.0);
}

TEST_CASE("coords rejects out-of-range indices") {
  const GridSpec spec(2, 4, 5);
  CHECK_THROWS_AS(coords(spec, Coarse{5, 0}), std::out_of_range);
  CHECK_THROWS_AS(coords(spec, VShift{1, 4, 1}), std::out_of_range);
  CHECK_THROWS_AS(coords(spec, HShift{0, 0, 0}), std::out_of_range);
  CHECK_THROWS_AS(coords(spec, Fine{0, 0, 6, 0}), std::out_of_range);
  const GridSpec line(1, 4, 5);
  CHECK_THROWS_AS(coords(line, VShift{1, 1, 1}), std::out_of_range);
}

TEST_CASE("coords agree with the analytic map for every family") {
  const GridSpec spec(2, 3, 7);
  const double H = 1.0 / 3, h = 1.0 / 21;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j) {
      const Point c = coords(spec, Coarse{i, j});
      CHECK(c.x == doctest::Approx(i * H).epsilon(1e-14));
      CHECK(c.y == doctest::Approx(j * H).epsilon(1e-14));
      if (i < 3)
        for (int l = 1; l < 7; ++l) {
          const Point s = coords(spec, HShift{i, l, j});
          CHECK(s.x == doctest::Approx(i * H + l * h).epsilon(1e-14));
          CHECK(s.y == doctest::Approx(j * H).epsilon(1e-14));
        }
    }
  // A node reached through two families has bit-identical coordinates.
  const Point a = coords(spec, HShift{1, 3, 2});
  const Point b = coords(spec, Fine{1, 1, 3, 7});
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
}

TEST_CASE("boundary_of, N=2 M=3, subdomain (0,0)") {
  const GridSpec spec(2, 2, 3);
  const auto b = boundary_of(spec, 0, 0);
  CHECK(b.entries.size() == 12);
  bool found = false;
  for (const auto& e : b.entries) {
    if (const auto* c = std::get_if<Coarse>(&e.node); c && c->i == 0 && c->j == 0) {
      found = true;
      CHECK(e.normal_count == 2);
      CHECK(has_normal(e, Normal{1, 0}));
      CHECK(has_normal(e, Normal{0, 1}));
    }
  }
  CHECK(found);
}

TEST_CASE("boundary_of, N=2 M=3, west edge of subdomain (1,1)") {
  const GridSpec spec(2, 2, 3);
  const auto b = boundary_of(spec, 1, 1);
  int hits = 0;
  for (const auto& e : b.entries) {
    if (const auto* v = std::get_if<VShift>(&e.node); v && v->i == 1 && v->j == 1 && v->m == 1) {
      ++hits;
      CHECK(e.normal_count == 1);
      CHECK(e.normals[0] == Normal{1, 0});
    }
  }
  CHECK(hits == 1);
}

TEST_CASE("boundary_of in 1D gives the two endpoints") {
  const GridSpec spec(1, 2, 3);
  const auto b = boundary_of(spec, 0);
  REQUIRE(b.entries.size() == 2);
  CHECK(std::get<Coarse>(b.entries[0].node).i == 0);
  CHECK(b.entries[0].normals[0] == Normal{1, 0});
  CHECK(std::get<Coarse>(b.entries[1].node).i == 1);
  CHECK(b.entries[1].normals[0] == Normal{-1, 0});
  CHECK_THROWS_AS(boundary_of(spec, 2), std::out_of_range);
}

TEST_CASE("boundary entries sit on the subdomain perimeter with matching local indices") {
  const GridSpec spec(2, 4, 6);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const auto b = boundary_of(spec, i, j);
      CHECK(b.entries.size() == 24);
      std::set<std::pair<int, int>> seen;
      for (const auto& e : b.entries) {
        const FineIndex g = global_index(spec, e.node);
        CHECK(g.p == i * 6 + e.l);
        CHECK(g.q == j * 6 + e.m);
        CHECK((e.l == 0 || e.l == 6 || e.m == 0 || e.m == 6));
        CHECK(seen.insert({g.p, g.q}).second);
        // Inward normals point into the subdomain.
        for (int t = 0; t < e.normal_count; ++t) {
          const Normal n = e.normals[static_cast<std::size_t>(t)];
          if (n.x == 1) CHECK(e.l == 0);
          if (n.x == -1) CHECK(e.l == 6);
          if (n.y == 1) CHECK(e.m == 0);
          if (n.y == -1) CHECK(e.m == 6);
        }
      }
    }
}

TEST_CASE("partition property and skeleton coverage") {
  for (auto [n, m] : {std::pair{2, 3}, std::pair{3, 4}, std::pair{4, 5}}) {
    const GridSpec spec(2, n, m);
    const int nm = n * m;
    // Subdomain (i,j) owns fine nodes [iM,(i+1)M] x [jM,(j+1)M].
    std::map<std::pair<int, int>, int> owners;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l <= m; ++l)
          for (int mm = 0; mm <= m; ++mm) {
            const FineIndex g = global_index(spec, Fine{i, j, l, mm});
            ++owners[{g.p, g.q}];
          }
    CHECK(owners.size() == spec.fine_node_count());
    for (const auto& [pq, count] : owners) {
      const auto [p, q] = pq;
      const bool interior_x = p % m == 0 && p != 0 && p != nm;
      const bool interior_y = q % m == 0 && q != 0 && q != nm;
      CHECK(count == (interior_x ? 2 : 1) * (interior_y ? 2 : 1));
    }

    // Every skeleton node on a subdomain's perimeter is listed by boundary_of.
    const Skeleton skel(spec);
    std::map<std::pair<int, int>, int> listed;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (const auto& e : boundary_of(spec, i, j).entries) {
          const FineIndex g = global_index(spec, e.node);
          ++listed[{g.p, g.q}];
        }
    CHECK(listed.size() == skel.size());
    for (std::size_t k = 0; k < skel.size(); ++k) {
      const FineIndex f = skel.position(k);
      CHECK(listed[{f.p, f.q}] == owners[{f.p, f.q}]);
    }
  }
}

TEST_CASE("skeleton numbering round-trips") {
  const GridSpec spec(2, 3, 4);
  const Skeleton skel(spec);
  CHECK(skel.size() == static_cast<std::size_t>(4 * 13 + 4 * 3 * 3));
  for (std::size_t k = 0; k < skel.size(); ++k) {
    const FineIndex f = skel.position(k);
    CHECK(skel.index(f.p, f.q) == k);
    CHECK(global_index(spec, skel.node(k)) == f);
  }
  CHECK_FALSE(skel.contains(1, 1));
  CHECK(skel.family(skel.index(Coarse{1, 1})) == Family::Coarse);
  CHECK(skel.family(skel.index(HShift{0, 1, 2})) == Family::HShift);
  CHECK(skel.family(skel.index(VShift{2, 0, 3})) == Family::VShift);
}

TEST_CASE("coarse grids: one non-shifted plus 2(M-1) shifted lattices") {
  const GridSpec spec(2, 3, 4);
  const auto grids = coarse_grids(spec);
  CHECK(grids.size() == 1 + 2 * 3);
  CHECK(grids[0].offset_x == 0);
  CHECK(grids[0].offset_y == 0);
  std::size_t nodes = 0;
  for (const auto& g : grids) nodes += static_cast<std::size_t>(g.nx) * g.ny;
  CHECK(nodes == Skeleton(spec).size());
  CHECK(coarse_grids(GridSpec(1, 3, 4)).size() == 1);
}
