#include <algorithm>

#include "doctest.h"
#include "dre/enhancement.hpp"
#include "dre/environment.hpp"
#include "json.hpp"

using namespace dre;

namespace {

ConfigGrid uniform_grid(const Box& q, bool all_e) {
  ConfigGrid g(q, steps_plus(q.dim()), steps_all(q.dim()));
  if (all_e) g.omega.fill();
  return g;
}

std::vector<Point> all_sites(const PivotalReport& rep) {
  std::vector<Point> out;
  for (const auto& s : rep.on_vd) out.push_back(s.site);
  for (const auto& s : rep.off_vd) out.push_back(s.site);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("disturbance function") {
  CHECK(f_disturbance(0.0, 2) == 0.0);
  CHECK(f_disturbance(1.0, 2) == 1.0);
  CHECK(f_disturbance(0.5, 2) == doctest::Approx(0.4375));
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (int d = 2; d <= 5; ++d) CHECK(f_disturbance(p, d) < p);
  CHECK_THROWS_AS(f_disturbance(1.5, 2), precondition_error);
}

TEST_CASE("pivotal sets at the extremes are empty") {
  Box r = Box::centered(Point::zero(2), 3);
  // All F: the connection exists and survives any single flip to E.
  PivotalReport rep_f = find_pivotal(uniform_grid(r, false), 1, PivotalMode::naive);
  CHECK(rep_f.total() == 0);
  CHECK_FALSE(rep_f.base_blocked);
  // All E: blocked, and no single flip creates the multi-axis descent.
  PivotalReport rep_e = find_pivotal(uniform_grid(r, true), 1, PivotalMode::naive);
  CHECK(rep_e.total() == 0);
  CHECK(rep_e.base_blocked);
  // Fast mode agrees.
  CHECK(find_pivotal(uniform_grid(r, false), 1).total() == 0);
  CHECK(find_pivotal(uniform_grid(r, true), 1).total() == 0);
}

TEST_CASE("fast pivotal mode matches the definitional oracle") {
  Box r = Box::centered(Point::zero(2), 2);
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    ConfigGrid g(r, steps_plus(2), steps_all(2));
    double dens = 0.2 + 0.6 * rng.next_unit();
    for (int64_t i = 0; i < r.size(); ++i)
      if (rng.next_unit() < dens) g.omega.set(i);
    PivotalReport fast = find_pivotal(g, 1, PivotalMode::fast);
    PivotalReport naive = find_pivotal(g, 1, PivotalMode::naive);
    CHECK(all_sites(fast) == all_sites(naive));
    // Pivotality never depends on the site's own configuration.
    for (const Point& u : all_sites(fast)) {
      ConfigGrid flip = g;
      int64_t ui = r.index_of(u);
      flip.omega.assign(ui, !flip.omega.test(ui));
      CHECK(is_pivotal_naive(flip, u, Point::zero(2), Point::constant(2, -1)));
    }
  }
}

TEST_CASE("window modification on a cone configuration") {
  // E exactly on the cone above the origin: the cluster is the cone, every
  // axis site is pivotal, and the segment routes are fully deterministic.
  int d = 2, n = 8, M = 9, N = 17;
  Box r = Box::centered(Point::zero(d), N);
  ConfigGrid g(r, steps_plus(d), steps_all(d));
  g.omega = up_cone(Point::zero(d), r);

  SUBCASE("pivot far out on an axis: the segment below u supplies the replacement") {
    Point u{7, 0};
    REQUIRE(is_pivotal_naive(g, u, Point::zero(d), Point::constant(d, -M)));
    ModificationCertificate cert = local_modify(g, u, n, M);
    CHECK(cert.verified);
    CHECK(cert.case_tag == "I");
    CHECK(cert.u_bar == Point{3, 0});  // least sub-lattice point on the run below u
    CHECK_FALSE(cert.used_fallback);
    CHECK(cert.diff.size() > 0);
    for (const auto& e : cert.diff) CHECK(cert.window.contains(e.site));
  }
  SUBCASE("pivot near the origin keeps the origin as the replacement") {
    Point u{4, 0};
    REQUIRE(is_pivotal_naive(g, u, Point::zero(d), Point::constant(d, -M)));
    ModificationCertificate cert = local_modify(g, u, n, M);
    CHECK(cert.verified);
    CHECK(cert.case_tag == "III");
    CHECK(cert.u_bar == Point::zero(d));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(local_modify(g, Point{6, 0}, n, M), precondition_error);   // in V_2
    CHECK_THROWS_AS(local_modify(g, Point{1, 1}, n, M), precondition_error);   // not pivotal
    CHECK_THROWS_AS(local_modify(g, Point{7, 0}, 3, M), precondition_error);   // n too small
  }
}

TEST_CASE("random modification certificates round-trip as JSON") {
  int d = 2, n = 8, M = 9, N = 17;
  Box r = Box::centered(Point::zero(d), N);
  ModelSpec spec = ModelSpec::half_orthant(d, 0.62);
  int done = 0;
  for (uint64_t s = 0; s < 60 && done < 5; ++s) {
    EnvironmentField env(spec, r, derive_seed(400, s));
    ConfigGrid g = env.config_grid(r);
    PivotalReport rep = find_pivotal(g, M);
    if (rep.off_vd.empty()) continue;
    ModificationCertificate cert = local_modify(g, rep.off_vd.front().site, n, M);
    CHECK(cert.verified);
    auto j = nlohmann::json::parse(cert.to_json());
    CHECK(j.contains("u"));
    CHECK(j.contains("u_bar"));
    CHECK(j.contains("case"));
    CHECK(j.contains("diff"));
    CHECK(j["verified"].get<bool>());
    // The diff triples carry old/new configurations.
    for (const auto& e : j["diff"]) {
      CHECK((e["old"] == "E" || e["old"] == "F"));
      CHECK((e["new"] == "E" || e["new"] == "F"));
    }
    ++done;
  }
  CHECK(done == 5);
}

TEST_CASE("russo estimator vanishes at p = q = 1") {
  RussoEstimate est = russo_estimates(2, 4, 1, 1.0, 1.0, 200, 3);
  CHECK(est.dbeta_dp == 0.0);
  CHECK(est.dbeta_dq == 0.0);
  CHECK(est.se_p == 0.0);
  CHECK(est.se_q == 0.0);
}

TEST_CASE("slab layer terraces") {
  Box base = Box::centered(Point::zero(2), 5);
  SUBCASE("p = 1: cone slices above the start, staircase boundaries") {
    EnvironmentField env(ModelSpec::slab(2, 1.0), slab_box(base), 2);
    Point start{1, -1};
    SlabTerraceReport rep = slab_terraces(env, base, slab_site(start, 1));
    REQUIRE(rep.layer1.has_value());
    REQUIRE(rep.layer2.has_value());
    // Both slices are the cone above the start; the boundary is its two faces.
    SiteMask cone_boundary(base);
    for (int32_t x = start[0]; x <= base.hi[0]; ++x) cone_boundary.set_point(Point{x, start[1]});
    for (int32_t y = start[1]; y <= base.hi[1]; ++y) cone_boundary.set_point(Point{start[0], y});
    CHECK(rep.layer1->sites == cone_boundary);
    CHECK(rep.layer2->sites == cone_boundary);
    CHECK(rep.layer1->sites.contains(start));
    CHECK(rep.all_clauses());
  }
  SUBCASE("p = 0: both layers fill and are flagged") {
    EnvironmentField env(ModelSpec::slab(2, 0.0), slab_box(base), 2);
    SlabTerraceReport rep = slab_terraces(env, base, slab_site(Point{0, 0}, 1));
    CHECK(rep.fills_layer1);
    CHECK(rep.fills_layer2);
    CHECK_FALSE(rep.layer1.has_value());
  }
  SUBCASE("random slabs satisfy every clause") {
    for (uint64_t s = 0; s < 25; ++s) {
      EnvironmentField env(ModelSpec::slab(2, 0.9), slab_box(base), 500 + s);
      SlabTerraceReport rep = slab_terraces(env, base, slab_site(Point{0, 0}, 1));
      if (rep.fills_layer1 || rep.fills_layer2) continue;
      CHECK(rep.all_clauses());
    }
  }
}

TEST_CASE("zeta marginal matches the disturbance function") {
  // Frequency of E at sub-lattice sites of the derived environment.
  int d = 2;
  double p = 0.6;
  Box base(Point{0, 0}, Point{140, 140});
  Box env_base(base.lo - Point{1, 1}, base.hi);
  EnvironmentField env(ModelSpec::slab(d, p), slab_box(env_base), 31);
  EtaZetaFields ez = derive_eta_zeta(env, base);
  VdLattice vd(d);
  long hits = 0, total = 0;
  for (int64_t i = 0; i < base.size(); ++i) {
    if (!vd.contains(base.site_at(i))) continue;
    ++total;
    if (ez.zeta.omega.test(i)) ++hits;
  }
  double f = f_disturbance(p, d);
  double sigma = std::sqrt(f * (1 - f) / double(total));
  CHECK(total > 5000);
  CHECK(std::abs(double(hits) / double(total) - f) < 5 * sigma);
}
