#include <algorithm>

#include "doctest.h"
#include "dre/geometry.hpp"
#include "dre/oracle.hpp"

using namespace dre;

namespace {

std::vector<Point> sorted_points(const SiteMask& m) {
  std::vector<Point> pts = m.points();
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

TEST_CASE("points and boxes") {
  Point a{1, 2, 3};
  Point b{1, 2, 3};
  CHECK(a == b);
  CHECK(a.leq(Point{1, 3, 3}));
  CHECK_FALSE(a.leq(Point{0, 3, 3}));
  CHECK(a.l1_dist(Point{0, 0, 0}) == 6);
  CHECK(a.linf_dist(Point{0, 0, 0}) == 3);
  CHECK_THROWS_AS((a + Point{1, 2}), precondition_error);

  Box q(Point{0, 0}, Point{2, 3});
  CHECK(q.size() == 12);
  CHECK(q.contains(Point{2, 3}));
  CHECK_FALSE(q.contains(Point{3, 0}));
  CHECK_THROWS_AS(Box(Point{1, 0}, Point{0, 0}), precondition_error);
  // Single-point boxes are legal.
  CHECK(Box(Point{2, 2}, Point{2, 2}).size() == 1);

  // Row-major indexing round trip, lexicographic order.
  for (int64_t i = 0; i < q.size(); ++i) CHECK(q.index_of(q.site_at(i)) == i);
  CHECK(q.site_at(0) == q.lo);
  CHECK(q.site_at(q.size() - 1) == q.hi);
  CHECK(q.site_at(1) == Point{0, 1});
}

TEST_CASE("up cone examples") {
  Box q(Point{0, 0}, Point{2, 2});
  // Cone of the lower corner is the whole box.
  CHECK(up_cone(q.lo, q).count() == q.size());
  // Cone past the box is empty.
  CHECK(up_cone(Point{3, 0}, q).none());
  // d=2, z=(1,1): the four upper sites.
  auto pts = sorted_points(up_cone(Point{1, 1}, q));
  CHECK(pts == std::vector<Point>{{1, 1}, {1, 2}, {2, 1}, {2, 2}});
  // Down cone mirrors.
  CHECK(down_cone(q.hi, q).count() == q.size());
  CHECK(down_cone(Point{1, 1}, q).count() == 4);
}

TEST_CASE("up-set closure examples") {
  Box q(Point{0, 0}, Point{2, 2});
  CHECK(up_set_closure(std::vector<Point>{}, q).none());
  CHECK(up_set_closure({q.lo}, q).count() == q.size());
  auto pts = sorted_points(up_set_closure({Point{2, 0}, Point{0, 2}}, q));
  CHECK(pts == std::vector<Point>{{0, 2}, {1, 2}, {2, 0}, {2, 1}, {2, 2}});
  CHECK_THROWS_AS(up_set_closure({Point{5, 5}}, q), precondition_error);

  // Sweep equals the cone-union oracle on a 3d instance.
  Box q3(Point{-1, -1, -1}, Point{1, 2, 1});
  SiteMask a(q3);
  a.set_point(Point{0, 1, -1});
  a.set_point(Point{-1, -1, 1});
  CHECK(up_set_closure(a) == oracle::up_set_closure(a));
  CHECK(is_solid_above(up_set_closure(a)));
}

TEST_CASE("sub-lattice membership") {
  for (int d = 2; d <= 6; ++d) {
    VdLattice vd(d);
    CHECK(vd.contains(Point::zero(d)));
  }
  CHECK(VdLattice(2).rho == 3);
  CHECK(VdLattice(3).rho == 5);
  CHECK(VdLattice(4).rho == 5);
  CHECK(VdLattice(5).rho == 7);
  CHECK(VdLattice(7).rho == 11);

  VdLattice v2(2);
  CHECK(v2.contains(Point{1, 1}));
  CHECK_FALSE(v2.contains(Point{1, 0}));
  // Negative coordinates use the representative in [0, rho).
  CHECK(v2.contains(Point{-1, -1}));
  CHECK(v2.contains(Point{-2, 1}));
  CHECK_FALSE(v2.contains(Point{-1, 0}));

  VdLattice v3(3);
  CHECK_FALSE(v3.contains(Point{2, 1, 1}));  // h = 2 - 1 + 2 = 3 mod 5
  CHECK(v3.contains(Point{2, 1, 2}));        // h = 2 - 1 + 4 = 5 mod 5

  CHECK_THROWS_AS(v2.h_mod(Point{1, 1, 1}), precondition_error);
}

TEST_CASE("relative boundary examples") {
  SUBCASE("window equal to the ambient box") {
    Box q(Point{0, 0}, Point{3, 3});
    RelativeBoundary rb = relative_boundary(q, q);
    CHECK(rb.boundary.none());
    CHECK(rb.interior.count() == q.size());
  }
  SUBCASE("strictly interior window") {
    Box r(Point{0, 0}, Point{4, 4});
    Box q(Point{1, 1}, Point{3, 3});
    RelativeBoundary rb = relative_boundary(q, r);
    CHECK(rb.boundary.count() == 8);
    auto in = sorted_points(rb.interior);
    CHECK(in == std::vector<Point>{{2, 2}});
  }
  SUBCASE("window sharing faces with the ambient box") {
    Box r(Point{0, 0}, Point{4, 4});
    Box q(Point{0, 0}, Point{2, 2});
    RelativeBoundary rb = relative_boundary(q, r);
    auto bd = sorted_points(rb.boundary);
    CHECK(bd == std::vector<Point>{{0, 2}, {1, 2}, {2, 0}, {2, 1}, {2, 2}});
    CHECK(rb.interior.count() == 4);
  }
  CHECK_THROWS_AS(relative_boundary(Box(Point{0, 0}, Point{9, 9}), Box(Point{0, 0}, Point{4, 4})),
                  precondition_error);
}

TEST_CASE("mask operations") {
  Box q(Point{0, 0}, Point{3, 3});
  SiteMask m(q);
  m.set_point(Point{1, 2});
  m.set_point(Point{3, 3});
  CHECK(m.count() == 2);
  CHECK(m.contains(Point{1, 2}));
  CHECK_FALSE(m.contains(Point{9, 9}));  // out of box is simply absent
  SiteMask n = m;
  n.set_point(Point{0, 0});
  CHECK(m.is_subset_of(n));
  CHECK_FALSE(n.is_subset_of(m));
  n.subtract(m);
  CHECK(n.count() == 1);
  SiteMask full(q);
  full.fill();
  CHECK(full.all());
  CHECK(restrict_mask(full, Box(Point{1, 1}, Point{2, 2})).count() == 4);
}
