// Acceptance runner: one pass/fail line per criterion.
//
//  1  geometry oracle equivalence (exhaustive d=2 boxes, random pivotality)
//  2  lemma suite on randomized instances, zero violations
//  3  local-modification soundness, 100% verified certificates
//  4  Russo consistency against coupled finite differences
//  5  monotone coupling of masks and blocking indicators
//  6  strict monotonicity of the finite-box crossings in dimension
//  7  marginal law of the derived sub-lattice environment
//  8  staircase surface export

#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dre/enhancement.hpp"
#include "dre/environment.hpp"
#include "dre/experiments.hpp"
#include "dre/validate.hpp"

using namespace dre;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool ok, Clock::time_point t0,
            const std::string& detail) {
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("[%s] criterion %d: %s (%s) [%.1f s]\n", ok ? "PASS" : "FAIL", idx, what.c_str(),
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

// ---- criterion 1 -----------------------------------------------------------

void criterion1() {
  auto t0 = Clock::now();
  long cases = 0, violations = 0;

  // Every configuration of every d=2 box up to 4x4: closure, lower boundary
  // and cluster against the naive oracles (exact match).
  auto checks = validate::geometry_suite(0, 1, /*exhaustive=*/true);
  for (const auto& c : checks)
    if (c.name.rfind("exhaustive", 0) == 0) {
      cases += c.cases;
      violations += c.violations;
    }

  // Pivotal sets on random d=2, N=2, M=1 configurations against the per-site
  // two-sided recomputation.
  Box r = Box::centered(Point::zero(2), 2);
  Rng rng(20240811);
  long piv_cases = 0, piv_bad = 0;
  for (int t = 0; t < 2000; ++t) {
    ConfigGrid g(r, steps_plus(2), steps_all(2));
    double dens = 0.15 + 0.7 * rng.next_unit();
    for (int64_t i = 0; i < r.size(); ++i)
      if (rng.next_unit() < dens) g.omega.set(i);
    auto collect = [](const PivotalReport& rep) {
      std::vector<Point> v;
      for (const auto& s : rep.on_vd) v.push_back(s.site);
      for (const auto& s : rep.off_vd) v.push_back(s.site);
      std::sort(v.begin(), v.end());
      return v;
    };
    ++piv_cases;
    if (collect(find_pivotal(g, 1, PivotalMode::fast)) !=
        collect(find_pivotal(g, 1, PivotalMode::naive)))
      ++piv_bad;
  }

  char detail[160];
  std::snprintf(detail, sizeof detail,
                "%ld exhaustive configurations, %ld pivotal configurations, %ld violations",
                cases, piv_cases, violations + piv_bad);
  report(1, "geometry oracle equivalence", violations + piv_bad == 0, t0, detail);
}

// ---- criterion 2 -----------------------------------------------------------

void criterion2() {
  auto t0 = Clock::now();
  long violations = 0;
  long min_cases = LONG_MAX;

  std::vector<validate::Check> all;
  for (const auto& c : validate::terrace_suite(4000, 7001)) all.push_back(c);
  for (const auto& c : validate::slab_suite(3000, 7002)) all.push_back(c);
  for (const auto& c : validate::pivotal_suite(3000, 7003)) all.push_back(c);
  // Sub-lattice line coverage and separation live in the geometry suite.
  for (const auto& c : validate::geometry_suite(1000, 7004, false))
    if (c.name.rfind("sub-lattice", 0) == 0) all.push_back(c);

  for (const auto& c : all) {
    violations += c.violations;
    min_cases = std::min(min_cases, c.cases);
    if (c.violations)
      std::printf("    VIOLATED: %s (%ld of %ld)\n", c.name.c_str(), c.violations, c.cases);
  }
  char detail[160];
  std::snprintf(detail, sizeof detail, "%zu checks, fewest cases per check %ld, violations %ld",
                all.size(), min_cases, violations);
  report(2, "terrace lemma suite", violations == 0 && min_cases >= 1000, t0, detail);
}

// ---- criterion 3 -----------------------------------------------------------

void criterion3() {
  auto t0 = Clock::now();
  long total = 0, verified = 0, fallbacks = 0;
  std::string first_fail;
  std::string case_summary;
  for (int d : {2, 3}) {
    auto st = validate::modify_suite(5000, d, 8100 + uint64_t(d));
    total += st.produced;
    verified += st.verified;
    fallbacks += st.fallbacks;
    if (!st.failures.empty() && first_fail.empty()) first_fail = st.failures.front();
    for (const auto& [tag, cnt] : st.case_counts)
      case_summary += " d" + std::to_string(d) + ":" + tag + "=" + std::to_string(cnt);
  }
  char detail[256];
  std::snprintf(detail, sizeof detail, "%ld certificates, %ld verified, %ld fallbacks;%s%s%s",
                total, verified, fallbacks, case_summary.c_str(),
                first_fail.empty() ? "" : " first failure: ", first_fail.c_str());
  report(3, "local-modification soundness", total == 10000 && verified == total, t0, detail);
}

// ---- criterion 4 -----------------------------------------------------------

void criterion4() {
  auto t0 = Clock::now();
  const int d = 2, N = 6, M = 2;
  const long trials = 100000;
  const double h = 0.02;
  Box r = Box::centered(Point::zero(d), N);
  ClusterScratch scratch(r);
  const Point o = Point::zero(d), target = Point::constant(d, -M);

  bool ok = true;
  std::string detail;
  for (auto [p, q] : {std::pair{0.5, 0.5}, {0.6, 0.5}, {0.6, 0.6}}) {
    double sp = 0, spp = 0, sq = 0, sqq = 0;
    double sfp = 0, sfpp = 0, sfq = 0, sfqq = 0;
    for (long t = 0; t < trials; ++t) {
      uint64_t s = derive_seed(4200, uint64_t(t));
      auto blocked = [&](double pp, double qq) {
        EnvironmentField env(ModelSpec::disturbed(d, pp, qq), r, s);
        ConfigGrid g = env.config_grid(r);
        return !Reach::connects_to_down_set(g, o, target, scratch) ? 1.0 : 0.0;
      };
      EnvironmentField env(ModelSpec::disturbed(d, p, q), r, s);
      ConfigGrid g = env.config_grid(r);
      PivotalReport rep = find_pivotal(g, M);
      double off = double(rep.off_vd.size()), on = double(rep.on_vd.size());
      double fp = (blocked(p + h, q) - blocked(p - h, q)) / (2 * h);
      double fq = (blocked(p, q + h) - blocked(p, q - h)) / (2 * h);
      sp += off;
      spp += off * off;
      sfp += fp;
      sfpp += fp * fp;
      sq += on;
      sqq += on * on;
      sfq += fq;
      sfqq += fq * fq;
    }
    auto stat = [&](double s1, double s2) {
      double m = s1 / double(trials);
      double var = std::max(0.0, s2 / double(trials) - m * m);
      return std::pair{m, std::sqrt(var / double(trials))};
    };
    auto [mp, ep] = stat(sp, spp);
    auto [mfp, efp] = stat(sfp, sfpp);
    auto [mq, eq] = stat(sq, sqq);
    auto [mfq, efq] = stat(sfq, sfqq);
    double zp = std::fabs(mp - mfp) / std::sqrt(ep * ep + efp * efp);
    double zq = std::fabs(mq - mfq) / std::sqrt(eq * eq + efq * efq);
    char buf[128];
    std::snprintf(buf, sizeof buf, " (%.1f,%.1f): z_p=%.2f z_q=%.2f", p, q, zp, zq);
    detail += buf;
    ok = ok && zp <= 3.0 && zq <= 3.0;
  }
  report(4, "Russo derivative consistency", ok, t0, detail.substr(1));
}

// ---- criterion 5 -----------------------------------------------------------

void criterion5() {
  auto t0 = Clock::now();
  const int d = 2, N = 6, M = 2;
  Box r = Box::centered(Point::zero(d), N);
  ClusterScratch scratch(r);
  const Point o = Point::zero(d), target = Point::constant(d, -M);
  // Coordinatewise increasing parameter ladder.
  const std::vector<std::pair<double, double>> ladder = {
      {0.30, 0.20}, {0.50, 0.35}, {0.70, 0.55}, {0.90, 0.80}};
  long violations = 0;
  const long trials = 10000;
  for (long t = 0; t < trials; ++t) {
    uint64_t s = derive_seed(5200, uint64_t(t));
    SiteMask prev_mask(r);
    double prev_blocked = -1;
    for (size_t k = 0; k < ladder.size(); ++k) {
      EnvironmentField env(ModelSpec::disturbed(d, ladder[k].first, ladder[k].second), r, s);
      ConfigGrid g = env.config_grid(r);
      if (k > 0 && !prev_mask.is_subset_of(g.omega)) ++violations;
      double blocked = !Reach::connects_to_down_set(g, o, target, scratch) ? 1.0 : 0.0;
      if (blocked + 1e-9 < prev_blocked) ++violations;
      prev_mask = g.omega;
      prev_blocked = blocked;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof detail, "%ld coupled trials x %zu ladder steps, %ld violations",
                trials, ladder.size(), violations);
  report(5, "monotone coupling", violations == 0, t0, detail);
}

// ---- criterion 6 -----------------------------------------------------------

void criterion6() {
  auto t0 = Clock::now();
  const int N = 48, M = 16;
  const long pilot = 1500, fine = 10000;
  const double step = 0.01;

  CrossingEstimate d2 =
      locate_crossing(ModelKind::half_orthant, 2, N, M, QRule::equal, pilot, fine, step, 6001);
  CrossingEstimate d3 =
      locate_crossing(ModelKind::half_orthant, 3, N, M, QRule::equal, pilot, fine, step, 6002);
  CrossingEstimate slab =
      locate_crossing(ModelKind::slab, 2, N, M, QRule::equal, pilot, fine, step, 6003);
  CrossingEstimate dist =
      locate_crossing(ModelKind::disturbed, 2, N, M, QRule::f_rule, pilot, fine, step, 6004);

  bool dims_ordered = d2.p_hat < d3.p_hat && d2.ci_hi < d3.ci_lo;
  bool disturbed_above = dist.p_hat > d2.p_hat && dist.ci_lo > d2.ci_hi;
  // Slab sandwich within the confidence intervals.
  bool sandwich = slab.ci_hi >= d2.ci_lo && slab.ci_lo <= d3.ci_hi;

  char detail[320];
  std::snprintf(detail, sizeof detail,
                "d2 %.4f [%.4f,%.4f]; d3 %.4f [%.4f,%.4f]; slab %.4f [%.4f,%.4f]; "
                "disturbed %.4f [%.4f,%.4f]",
                d2.p_hat, d2.ci_lo, d2.ci_hi, d3.p_hat, d3.ci_lo, d3.ci_hi, slab.p_hat,
                slab.ci_lo, slab.ci_hi, dist.p_hat, dist.ci_lo, dist.ci_hi);
  report(6, "strict monotonicity of finite-box crossings",
         dims_ordered && disturbed_above && sandwich, t0, detail);
}

// ---- criterion 7 -----------------------------------------------------------

void criterion7() {
  auto t0 = Clock::now();
  const int d = 2;
  // A base window with over 10^5 sub-lattice sites.
  Box base(Point{0, 0}, Point{599, 599});
  Box env_base(base.lo - Point::constant(d, 1), base.hi);
  VdLattice vd(d);
  bool ok = true;
  std::string detail;
  for (double p : {0.3, 0.6, 0.9}) {
    EnvironmentField env(ModelSpec::slab(d, p), slab_box(env_base), 7777);
    EtaZetaFields ez = derive_eta_zeta(env, base);
    if (!ez.eta.omega.is_subset_of(ez.zeta.omega)) ok = false;
    long hits = 0, total = 0;
    for (int64_t i = 0; i < base.size(); ++i) {
      if (!vd.contains(base.site_at(i))) continue;
      ++total;
      if (ez.zeta.omega.test(i)) ++hits;
    }
    double f = f_disturbance(p, d);
    double freq = double(hits) / double(total);
    double sigma = std::sqrt(f * (1 - f) / double(total));
    double z = std::fabs(freq - f) / sigma;
    char buf[96];
    std::snprintf(buf, sizeof buf, " p=%.1f: freq %.5f vs f %.5f (z=%.2f, n=%ld)", p, freq, f, z,
                  total);
    detail += buf;
    ok = ok && z <= 4.0 && total >= 100000;
  }
  report(7, "derived-environment marginal law", ok, t0, detail.substr(1));
}

// ---- criterion 8 -----------------------------------------------------------

void criterion8() {
  auto t0 = Clock::now();
  const int d = 3;
  Box q = Box::centered(Point::zero(d), 30);
  EnvironmentField env(ModelSpec::half_orthant(d, 0.95), q, 314159);
  std::string path = (std::filesystem::temp_directory_path() / "dre_accept.ply").string();
  SurfaceExport ex = export_surface(env, Point::zero(d), "ply", path);

  bool ok = !ex.fills && ex.vertices > 0;
  // Re-verify every exported vertex against the cluster from scratch.
  ConfigGrid g = env.config_grid(q);
  SiteMask cluster = Reach::forward_cluster(g, Point::zero(d));
  long checked = 0;
  std::ifstream f(path);
  std::string line;
  bool in_header = true;
  while (std::getline(f, line)) {
    if (in_header) {
      if (line == "end_header") in_header = false;
      continue;
    }
    int x, y, z;
    if (std::sscanf(line.c_str(), "%d %d %d", &x, &y, &z) != 3) continue;
    Point v{x, y, z};
    ++checked;
    if (env.site_config(v) != SiteConfig::E) ok = false;
    if (!cluster.test_point(v)) ok = false;
    bool witness = false;
    for (int k = 0; k < d; ++k) {
      Point below = v.shifted(k, -1);
      if (q.contains(below) && !cluster.test_point(below)) witness = true;
    }
    if (!witness) ok = false;
  }
  ok = ok && checked == ex.vertices;
  std::filesystem::remove(path);
  char detail[128];
  std::snprintf(detail, sizeof detail, "%lld staircase vertices exported and re-verified",
                (long long)ex.vertices);
  report(8, "staircase surface export", ok, t0, detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf(failures == 0 ? "all criteria passed\n" : "%d criteria FAILED\n", failures);
  return failures;
}
