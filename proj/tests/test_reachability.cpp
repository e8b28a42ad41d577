#include <set>

#include "doctest.h"
#include "dre/environment.hpp"
#include "dre/oracle.hpp"
#include "dre/reachability.hpp"

using namespace dre;

namespace {

ConfigGrid uniform_grid(const Box& q, bool all_e) {
  ConfigGrid g(q, steps_plus(q.dim()), steps_all(q.dim()));
  if (all_e) g.omega.fill();
  return g;
}

}  // namespace

TEST_CASE("forward cluster at the extremes") {
  Box q = Box::centered(Point::zero(2), 3);
  Point x{1, -2};
  // All F sites (full step set): the whole box is reachable.
  CHECK(Reach::forward_cluster(uniform_grid(q, false), x).count() == q.size());
  // All E sites: exactly the up cone.
  CHECK(Reach::forward_cluster(uniform_grid(q, true), x) == up_cone(x, q));
  // Both outgoing arrows leave the box.
  Box q2(Point{0, 0}, Point{1, 1});
  SiteMask c = Reach::forward_cluster(uniform_grid(q2, true), Point{1, 1});
  CHECK(c.count() == 1);
  CHECK(c.contains(Point{1, 1}));
  CHECK_THROWS_AS(Reach::forward_cluster(uniform_grid(q, true), Point{9, 9}),
                  precondition_error);
}

TEST_CASE("down-set connectivity and witness paths") {
  Box q = Box::centered(Point::zero(2), 3);
  ClusterScratch scratch(q);
  SUBCASE("target equal to the source is trivially reached") {
    ConfigGrid g = uniform_grid(q, true);
    CHECK(Reach::connects_to_down_set(g, Point{1, 1}, Point{1, 1}, scratch));
  }
  SUBCASE("no decreasing steps, target strictly below") {
    ConfigGrid g = uniform_grid(q, true);
    CHECK_FALSE(Reach::connects_to_down_set(g, Point{0, 0}, Point{3, -1}, scratch));
  }
  SUBCASE("witness paths replay against the configuration") {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      ConfigGrid g(q, steps_plus(2), steps_all(2));
      for (int64_t i = 0; i < q.size(); ++i)
        if (rng.next_below(2)) g.omega.set(i);
      Point target{-1, -1};
      auto res = Reach::connects_to_down_set_witness(g, Point{0, 0}, target);
      CHECK(res.connected == Reach::connects_to_down_set(g, Point{0, 0}, target, scratch));
      if (res.connected) {
        REQUIRE(!res.witness.points.empty());
        CHECK(res.witness.points.front() == Point{0, 0});
        CHECK(res.witness.points.back().leq(target));
        for (size_t i = 0; i + 1 < res.witness.points.size(); ++i) {
          const Point& a = res.witness.points[i];
          const Point& b = res.witness.points[i + 1];
          CHECK(a.l1_dist(b) == 1);
          int axis = b[0] != a[0] ? 0 : 1;
          bool minus = b[axis] < a[axis];
          StepSet steps = g.step_set(q.index_of(a));
          CHECK(((steps >> (minus ? 2 + axis : axis)) & 1u) == 1u);
        }
      }
    }
  }
}

TEST_CASE("cluster agrees with the transitive-closure oracle exhaustively on 3x3") {
  Box q(Point{0, 0}, Point{2, 2});
  for (uint32_t bits = 0; bits < (1u << 9); ++bits) {
    ConfigGrid g(q, steps_plus(2), steps_all(2));
    for (int i = 0; i < 9; ++i)
      if ((bits >> i) & 1) g.omega.set(i);
    CHECK(Reach::forward_cluster(g, Point{1, 1}) == oracle::forward_cluster(g, Point{1, 1}));
  }
}

TEST_CASE("line records") {
  Box q = Box::centered(Point::zero(2), 2);
  Point source{0, 1};
  SUBCASE("all-F configuration: every line hits at the box floor") {
    auto recs = l_values(uniform_grid(q, false), source, 0);
    CHECK(recs.size() == 5);
    for (const auto& r : recs) {
      CHECK(r.found);
      CHECK(r.hit_point()[0] == q.lo[0]);
      CHECK(r.base[0] == source[0]);
    }
  }
  SUBCASE("the source's own line has a non-positive value") {
    auto recs = l_values(uniform_grid(q, true), source, 0);
    for (const auto& r : recs)
      if (r.base == source) {
        CHECK(r.found);
        CHECK(r.value <= 0);
      }
  }
  SUBCASE("values recompute from the cluster mask") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
      ConfigGrid g(q, steps_plus(2), steps_all(2));
      for (int64_t i = 0; i < q.size(); ++i)
        if (rng.next_below(3)) g.omega.set(i);
      SiteMask cluster = Reach::forward_cluster(g, source);
      for (int axis = 0; axis < 2; ++axis)
        for (const auto& r : l_values(g, source, axis)) {
          int32_t best = 0;
          bool found = false;
          for (int32_t v = q.lo[axis]; v <= q.hi[axis]; ++v) {
            Point pt = r.base;
            pt[axis] = v;
            if (cluster.test_point(pt)) {
              best = v - r.base[axis];
              found = true;
              break;
            }
          }
          CHECK(r.found == found);
          if (found) {
            CHECK(r.value == best);
            CHECK(cluster.test_point(r.hit_point()));
            Point below = r.hit_point().shifted(axis, -1);
            if (q.contains(below)) CHECK_FALSE(cluster.test_point(below));
          }
        }
    }
  }
}

TEST_CASE("greedy plane walks") {
  Box q = Box::centered(Point::zero(2), 2);
  Point start{0, 0};
  SUBCASE("all decreasing arrows available: a pure descending ray") {
    EnvironmentField env(ModelSpec::half_orthant(2, 0.0), q, 1);
    auto stop = [&](const Point& z) { return z[0] == -5; };
    LatticePath p = wn_se_path(env, start, 0, 1, PathVariant::wn, stop);
    CHECK(p.complete);
    CHECK(p.points.size() == 6);
    for (size_t i = 0; i < p.points.size(); ++i) CHECK(p.points[i] == Point{-int32_t(i), 0});
  }
  SUBCASE("no decreasing arrows: a pure increasing ray") {
    EnvironmentField env(ModelSpec::half_orthant(2, 1.0), q, 1);
    auto stop = [&](const Point& z) { return z[1] == 4; };
    LatticePath p = wn_se_path(env, start, 0, 1, PathVariant::wn, stop);
    CHECK(p.complete);
    for (const Point& z : p.points) CHECK(z[0] == 0);
    CHECK(p.points.back() == Point{0, 4});
  }
  SUBCASE("budget exhaustion flags the path incomplete") {
    EnvironmentField env(ModelSpec::half_orthant(2, 1.0), q, 1);
    auto never = [](const Point&) { return false; };
    LatticePath p = wn_se_path(env, start, 0, 1, PathVariant::wn, never, 10);
    CHECK_FALSE(p.complete);
    CHECK(p.points.size() == 11);
  }
  SUBCASE("staged hits from below land at or below the target line") {
    for (uint64_t s = 0; s < 20; ++s) {
      EnvironmentField env(ModelSpec::half_orthant(2, 0.5), q, 1000 + s);
      Point u{-3, -2}, v{1, 2};
      auto hit = staged_line_hit(env, u, v, 1);
      REQUIRE(hit.has_value());
      CHECK(hit->k <= 0);
      CHECK(hit->path.points.back() == v.shifted(1, hit->k));
      CHECK(hit->path.points.back()[1] <= u[1]);
      CHECK(path_consistent(env, hit->path));
    }
  }
}
