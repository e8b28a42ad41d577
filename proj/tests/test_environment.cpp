#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "dre/environment.hpp"

using namespace dre;

TEST_CASE("site configurations at the extremes") {
  Box q = Box::centered(Point::zero(2), 4);
  EnvironmentField all_e(ModelSpec::half_orthant(2, 1.0), q, 7);
  EnvironmentField all_f(ModelSpec::half_orthant(2, 0.0), q, 7);
  for (int64_t i = 0; i < q.size(); ++i) {
    CHECK(all_e.site_config(q.site_at(i)) == SiteConfig::E);
    CHECK(all_f.site_config(q.site_at(i)) == SiteConfig::F);
  }
  CHECK(all_e.omega_mask(q).all());
  CHECK(all_f.omega_mask(q).none());
  CHECK_THROWS_AS(all_e.site_config(Point{99, 99}), precondition_error);
}

TEST_CASE("disturbed threshold applies only on the sub-lattice") {
  // A sub-lattice site whose uniform falls strictly between q = 0.3 and
  // p = 0.9 flips between the two models.
  Box q = Box::centered(Point::zero(2), 10);
  VdLattice vd(2);
  uint64_t seed = 11;
  EnvironmentField half(ModelSpec::half_orthant(2, 0.9), q, seed);
  EnvironmentField dist(ModelSpec::disturbed(2, 0.9, 0.3), q, seed);
  bool exercised = false;
  for (int64_t i = 0; i < q.size(); ++i) {
    Point x = q.site_at(i);
    double u = half.uniform_at(x);
    if (vd.contains(x) && u > 0.3 && u < 0.9) {
      CHECK(dist.site_config(x) == SiteConfig::F);
      CHECK(half.site_config(x) == SiteConfig::E);
      exercised = true;
    }
    if (!vd.contains(x)) CHECK(dist.site_config(x) == half.site_config(x));
  }
  CHECK(exercised);
}

TEST_CASE("coupling is monotone in p on shared seeds") {
  Box q = Box::centered(Point::zero(3), 4);
  uint64_t seed = 3;
  EnvironmentField lo(ModelSpec::half_orthant(3, 0.3), q, seed);
  EnvironmentField hi(ModelSpec::half_orthant(3, 0.7), q, seed);
  CHECK(lo.omega_mask(q).is_subset_of(hi.omega_mask(q)));
}

TEST_CASE("empirical density concentrates") {
  Box q(Point{0, 0}, Point{99, 99});
  double p = 0.3;
  EnvironmentField env(ModelSpec::half_orthant(2, p), q, 2024);
  double freq = double(env.omega_mask(q).count()) / double(q.size());
  double sigma = std::sqrt(p * (1 - p) / double(q.size()));
  CHECK(std::abs(freq - p) < 4 * sigma);
}

TEST_CASE("force_config overrides single sites") {
  Box q = Box::centered(Point::zero(2), 3);
  EnvironmentField env(ModelSpec::half_orthant(2, 1.0), q, 5);
  SUBCASE("empty override changes nothing") {
    EnvironmentField same = env.force_config({});
    CHECK(env.omega_mask(q) == same.omega_mask(q));
  }
  SUBCASE("one forced site") {
    Point u{1, -2};
    EnvironmentField forced = env.force_config({{u, SiteConfig::F}});
    for (int64_t i = 0; i < q.size(); ++i) {
      Point x = q.site_at(i);
      if (x == u)
        CHECK(forced.site_config(x) == SiteConfig::F);
      else
        CHECK(forced.site_config(x) == SiteConfig::E);
    }
    // The original environment is untouched.
    CHECK(env.site_config(u) == SiteConfig::E);
  }
  CHECK_THROWS_AS(env.force_config({{Point{50, 50}, SiteConfig::F}}), precondition_error);
}

TEST_CASE("slab boxes carry layers 1 and 2 literally") {
  Box base = Box::centered(Point::zero(2), 2);
  Box sb = slab_box(base);
  CHECK(sb.dim() == 3);
  CHECK(sb.lo[2] == 1);
  CHECK(sb.hi[2] == 2);
  CHECK(slab_site(Point{1, -1}, 2) == Point{1, -1, 2});
  CHECK(slab_project(Point{1, -1, 2}) == Point{1, -1});
  CHECK_THROWS_AS(slab_site(Point{0, 0}, 0), precondition_error);
  // Slab environments reject boxes with other layer coordinates.
  CHECK_THROWS_AS(EnvironmentField(ModelSpec::slab(2, 0.5), Box::centered(Point::zero(3), 2), 1),
                  precondition_error);
}

TEST_CASE("eta and zeta derived environments") {
  Box base = Box::centered(Point::zero(2), 5);
  Box env_base(base.lo - Point{1, 1}, base.hi);
  SUBCASE("p = 1 gives everything, p = 0 nothing") {
    EnvironmentField one(ModelSpec::slab(2, 1.0), slab_box(env_base), 4);
    EtaZetaFields ez1 = derive_eta_zeta(one, base);
    CHECK(ez1.eta.omega.all());
    CHECK(ez1.zeta.omega.all());
    EnvironmentField zero(ModelSpec::slab(2, 0.0), slab_box(env_base), 4);
    EtaZetaFields ez0 = derive_eta_zeta(zero, base);
    CHECK(ez0.eta.omega.none());
    CHECK(ez0.zeta.omega.none());
  }
  SUBCASE("eta inside zeta and the W rule at a generic p") {
    EnvironmentField env(ModelSpec::slab(2, 0.6), slab_box(env_base), 9);
    EtaZetaFields ez = derive_eta_zeta(env, base);
    CHECK(ez.eta.omega.is_subset_of(ez.zeta.omega));
    for (int64_t i = 0; i < base.size(); ++i) {
      Point x = base.site_at(i);
      bool raw = env.site_config(slab_site(x, 1)) == SiteConfig::E;
      bool w = env.site_config(slab_site(x, 2)) == SiteConfig::E ||
               env.site_config(slab_site(x.shifted(0, -1), 2)) == SiteConfig::E ||
               env.site_config(slab_site(x.shifted(1, -1), 2)) == SiteConfig::E;
      CHECK(ez.eta.omega.test(i) == (raw && w));
    }
  }
  // Window too small for the W lookups.
  CHECK_THROWS_AS(derive_eta_zeta(EnvironmentField(ModelSpec::slab(2, 0.5), slab_box(base), 1),
                                  base),
                  precondition_error);
}

TEST_CASE("snapshot round trip and format lock") {
  Box q(Point{-2, -1}, Point{3, 2});
  EnvironmentField env(ModelSpec::disturbed(2, 0.42, 0.17), q, 0xfeedbeef);
  std::string path =
      (std::filesystem::temp_directory_path() / "dre_snapshot_test.dre").string();
  write_snapshot(env, path);
  Snapshot snap = read_snapshot(path);
  CHECK(snap.spec == env.spec());
  CHECK(snap.box == q);
  CHECK(snap.seed == env.seed());
  CHECK(snap.omega == env.omega_mask(q));

  // Header layout is pinned: magic, u32 d, lo/hi as i32, u64 seed, u8 model.
  std::FILE* f = std::fopen(path.c_str(), "rb");
  REQUIRE(f);
  unsigned char head[8];
  REQUIRE(std::fread(head, 1, 8, f) == 8);
  std::fclose(f);
  CHECK(head[0] == 'D');
  CHECK(head[1] == 'R');
  CHECK(head[2] == 'E');
  CHECK(head[3] == '1');
  CHECK(head[4] == 2);  // dimension, little-endian
  CHECK(head[5] == 0);
  std::filesystem::remove(path);
}

TEST_CASE("uniforms are a pure function of seed and site") {
  Point x{3, -7, 2};
  CHECK(site_hash53(99, x) == site_hash53(99, x));
  CHECK(site_hash53(99, x) != site_hash53(100, x));
  CHECK(site_hash53(99, x) < (uint64_t(1) << 53));
  CHECK(acceptance_threshold(0.0) == 0);
  CHECK(acceptance_threshold(1.0) == (uint64_t(1) << 53));
  CHECK(acceptance_threshold(0.25) == (uint64_t(1) << 51));
}
