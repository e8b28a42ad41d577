#include "dre/enhancement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace dre {

bool blocks_down_set(const ConfigGrid& g, const Point& source, const Point& target,
                     ClusterScratch& scratch) {
  return !Reach::connects_to_down_set(g, source, target, scratch);
}

bool is_pivotal_naive(const ConfigGrid& g, const Point& u, const Point& source,
                      const Point& target) {
  DRE_REQUIRE(g.box.contains(u), "pivotality query outside box");
  ClusterScratch scratch(g.box);
  ConfigGrid probe = g;
  const int64_t ui = g.box.index_of(u);
  probe.omega.set(ui);
  bool blocked_with_e = !Reach::connects_to_down_set(probe, source, target, scratch);
  probe.omega.reset(ui);
  bool connected_with_f = Reach::connects_to_down_set(probe, source, target, scratch);
  return blocked_with_e && connected_with_f;
}

namespace {

Point origin_of(const ConfigGrid& g) { return Point::zero(g.dim()); }

void require_pivotal_setting(const ConfigGrid& g, int M) {
  const int d = g.dim();
  DRE_REQUIRE(g.e_steps == steps_plus(d) && g.f_steps == steps_all(d),
              "pivotality needs half-orthant step semantics");
  DRE_REQUIRE(M >= 1, "target offset must be >= 1");
  DRE_REQUIRE(g.box.contains(Point::zero(d)), "box must contain the origin");
  DRE_REQUIRE(g.box.contains(Point::constant(d, -M)), "box must contain -M*1");
}

}  // namespace

PivotalReport find_pivotal(const ConfigGrid& g, int M, PivotalMode mode) {
  require_pivotal_setting(g, M);
  const int d = g.dim();
  const Box& r = g.box;
  const Point o = origin_of(g);
  const Point target = Point::constant(d, -M);
  VdLattice vd(d);
  ClusterScratch scratch(r);

  PivotalReport report;
  report.box = r;
  report.target_offset = M;
  report.base_blocked = blocks_down_set(g, o, target, scratch);

  // Terrace membership witness: defined when the base configuration blocks.
  SiteMask terrace_sites(r);
  if (report.base_blocked) {
    auto t = extract_terrace(g, o, scratch);
    DRE_INVARIANT(t.has_value(), "blocked cluster cannot fill the box");
    terrace_sites = t->sites;
  }

  auto emit = [&](int64_t idx) {
    PivotalSite s;
    s.site = r.site_at(idx);
    s.on_vd = vd.contains(s.site);
    s.in_terrace = report.base_blocked && terrace_sites.test(idx);
    (s.on_vd ? report.on_vd : report.off_vd).push_back(s);
  };

  const int64_t n = r.size();
  if (mode == PivotalMode::naive) {
    for (int64_t i = 0; i < n; ++i)
      if (is_pivotal_naive(g, r.site_at(i), o, target)) emit(i);
    return report;
  }

  // Fast mode. Reachability to u never uses u's own arrows, so the forward
  // cluster marks exactly the sites the origin can reach no matter how u is
  // configured; similarly the tail after the last decreasing step out of u is
  // a plain reverse-reachability fact.
  SiteMask fwd = Reach::forward_cluster(g, o, scratch);
  SiteMask rev = Reach::reaches_down_set(g, target, scratch);
  const BoxIndexer& idx = scratch.indexer();

  auto lower_neighbour_reaches = [&](int64_t i) {
    for (int k = 0; k < d; ++k)
      if (idx.offset(i, k) > 0 && rev.test(i - idx.stride(k))) return true;
    return false;
  };

  if (report.base_blocked) {
    // u pivotal iff u is an E site of the cluster with a lower neighbour that
    // reaches the target corner.
    for (int64_t i = 0; i < n; ++i)
      if (g.is_e(i) && fwd.test(i) && lower_neighbour_reaches(i)) emit(i);
  } else {
    // Connected base: only F sites whose decreasing arrows carry every
    // origin-to-target route qualify; check those few exactly.
    ConfigGrid probe = g;
    for (int64_t i = 0; i < n; ++i) {
      if (g.is_e(i) || !fwd.test(i) || !lower_neighbour_reaches(i)) continue;
      probe.omega.set(i);
      if (!Reach::connects_to_down_set(probe, o, target, scratch)) emit(i);
      probe.omega.reset(i);
    }
  }
  return report;
}

// ---- local modification -------------------------------------------------------

namespace {

struct ModifyContext {
  const ConfigGrid& g;
  Box r;
  int d;
  int n;
  int M;
  VdLattice vd;
  Point o, target, u;
  Box window, inner;
  SiteMask window_int, inner_int;   // masks over R
  std::vector<Point> inner_rim;     // relative boundary of the inner window, lex order

  QTerrace base_terrace;  // from the u-forced-E configuration
  QTerrace bar;           // deformed terrace
  int l_star = -1;        // relabeled axis with u + e_{l_star} outside the terrace
  std::vector<Point> a_pts;
  SiteMask a_mask;
  bool stopped_early = false;
  bool used_special = false;
  bool used_fallback = false;

  ModifyContext(const ConfigGrid& grid, const Point& u_, int n_, int M_)
      : g(grid),
        r(grid.box),
        d(grid.dim()),
        n(n_),
        M(M_),
        vd(grid.dim()),
        o(Point::zero(grid.dim())),
        target(Point::constant(grid.dim(), -M_)),
        u(u_),
        window(Box::centered(u_, n_).intersect(grid.box)),
        inner(Box::centered(u_, n_ - 2).intersect(grid.box)),
        window_int(relative_interior_mask(window, grid.box)),
        inner_int(relative_interior_mask(inner, grid.box)),
        a_mask(grid.box) {
    for (int64_t i = 0; i < inner.size(); ++i) {
      Point x = inner.site_at(i);
      if (on_relative_boundary(x, inner, r)) inner_rim.push_back(x);
    }
  }

  bool in_a_plus(const Point& y) const {
    for (const Point& a : a_pts)
      if (y.geq(a)) return true;
    return false;
  }

  bool eqn5_ok(const Point& cand) const {
    return !in_h_set(bar, cand) || cand.geq(o);
  }

  // Candidates along the run cand_base + k e_axis, 0 <= k <= len.
  void scan_run(const Point& start, int axis, int len, std::vector<Point>& out) const {
    for (int k = 0; k <= len; ++k) {
      Point cand = start.shifted(axis, k);
      DRE_INVARIANT(bar.sites.contains(cand), "straight run left the terrace");
      DRE_INVARIANT(inner.contains(cand), "straight run left the inner window");
      if (vd.contains(cand)) out.push_back(cand);
    }
  }

  // The straight-segment search from `s` along +e_i with fallback through the
  // rectangle [z, y]; seg_len = n-3 on the generic route, n-4 on the special.
  void collect_route(const Point& s, int i, int j, int seg_len, std::vector<Point>& out) const {
    Point tip = s.shifted(i, seg_len);
    if (!r.contains(tip)) return;
    if (bar.sites.contains(tip)) {
      scan_run(s, i, seg_len, out);
      return;
    }
    int q = 1;
    while (bar.sites.contains(s.shifted(i, q))) ++q;
    DRE_INVARIANT(q <= seg_len, "no exit point on a run whose tip left the terrace");
    Point y1 = s.shifted(i, q).shifted(j, -1);
    Point y0 = s.shifted(i, q - 1).shifted(j, -1);
    DRE_INVARIANT(r.contains(y1) && r.contains(y0), "rectangle anchors left the box");
    Point y;
    if (bar.sites.contains(y1)) {
      y = y1;
    } else {
      DRE_INVARIANT(bar.upset.contains(y1), "anchor below the exit point left the up-set");
      DRE_INVARIANT(bar.sites.contains(y0), "neither rectangle anchor lies in the terrace");
      y = y0;
    }
    DRE_INVARIANT(inner.contains(y), "rectangle anchor left the inner window");
    DRE_INVARIANT(!in_a_plus(y), "rectangle anchor sits above a protected site");
    for (const Point& z : inner_rim) {
      if (!bar.upset.contains(z) || !z.leq(y)) continue;
      for (int k = 0; k < d; ++k) {
        if (z[k] != u[k] - (n - 2)) continue;
        for (int l = 0; l <= seg_len; ++l) {
          Point cand = y.shifted(k, -l);
          DRE_INVARIANT(bar.sites.contains(cand), "rectangle column left the terrace");
          DRE_INVARIANT(inner.contains(cand), "rectangle column left the inner window");
          if (vd.contains(cand)) out.push_back(cand);
        }
      }
    }
  }
};

// Pushes corners inside the inner window (protecting A) and deletes h-set
// corners outside o_+ inside the full window, in turn, until stable. In the
// o-in-window case the pass stops right before the origin would be pushed.
void deform_terrace(ModifyContext& ctx, bool stop_at_origin) {
  TerraceWorkspace ws(ctx.base_terrace);
  const int64_t stop_idx = stop_at_origin ? ctx.r.index_of(ctx.o) : -1;
  for (;;) {
    auto s = ws.stabilize_pass(ctx.inner_int, ctx.a_mask, stop_idx);
    if (s.stopped) {
      ctx.stopped_early = true;
      break;
    }
    int64_t dels = ws.delete_h_pass(ctx.window_int, ctx.o);
    if (s.pushes == 0 && dels == 0) break;
  }
  ctx.bar = ws.snapshot();
}

Point find_u_bar_case1(const ModifyContext& ctx) {
  // u above the origin, origin outside the inner window: the segment [o, u]
  // lies in the terrace and contains long axis runs ending at u.
  std::vector<Point> cands;
  for (int j = 0; j < ctx.d; ++j) {
    if (ctx.u[j] <= ctx.n - 2) continue;
    for (int k = 0; k <= ctx.n - 2; ++k) {
      Point cand = ctx.u.shifted(j, -k);
      DRE_INVARIANT(ctx.bar.sites.contains(cand), "segment below u left the terrace");
      if (ctx.vd.contains(cand)) cands.push_back(cand);
    }
  }
  DRE_INVARIANT(!cands.empty(), "no sub-lattice point on the segment below u");
  return *std::min_element(cands.begin(), cands.end());
}

std::optional<Point> find_u_bar_segments(ModifyContext& ctx) {
  std::vector<int> plus_axes, minus_axes;
  for (int k = 0; k < ctx.d; ++k) {
    if (ctx.r.contains(ctx.u.shifted(k, ctx.n))) plus_axes.push_back(k);
    if (ctx.r.contains(ctx.u.shifted(k, -ctx.n))) minus_axes.push_back(k);
  }
  std::vector<Point> cands;
  bool special_hit = false;
  for (int i : plus_axes) {
    for (int j : minus_axes) {
      if (i == j) continue;
      if (i != ctx.l_star) {
        ctx.collect_route(ctx.u, i, j, ctx.n - 3, cands);
      } else {
        Point v = ctx.u.shifted(ctx.l_star, +1).shifted(j, -1);
        if (!ctx.bar.sites.contains(v)) continue;
        size_t before = cands.size();
        ctx.collect_route(v, i, j, ctx.n - 4, cands);
        if (cands.size() > before) special_hit = true;
      }
    }
  }
  std::erase_if(cands, [&](const Point& c) { return !ctx.eqn5_ok(c); });
  if (cands.empty()) return std::nullopt;
  Point best = *std::min_element(cands.begin(), cands.end());
  // Tag the run as special only if the winner could not come from a generic route.
  if (special_hit) {
    std::vector<Point> generic;
    for (int i : plus_axes)
      for (int j : minus_axes)
        if (i != j && i != ctx.l_star) ctx.collect_route(ctx.u, i, j, ctx.n - 3, generic);
    std::erase_if(generic, [&](const Point& c) { return !ctx.eqn5_ok(c); });
    if (std::find(generic.begin(), generic.end(), best) == generic.end())
      ctx.used_special = true;
  }
  return best;
}

Point find_u_bar_fallback(ModifyContext& ctx) {
  for (int64_t i = 0; i < ctx.inner.size(); ++i) {
    Point cand = ctx.inner.site_at(i);
    if (ctx.bar.sites.contains(cand) && ctx.vd.contains(cand) && ctx.eqn5_ok(cand)) {
      ctx.used_fallback = true;
      return cand;
    }
  }
  throw invariant_error("no replacement pivot available in the inner window");
}

}  // namespace

ModificationCertificate local_modify(const ConfigGrid& g, const Point& u, int n, int M) {
  require_pivotal_setting(g, M);
  const int d = g.dim();
  VdLattice vd_check(d);
  DRE_REQUIRE(n > vd_check.rho + 4, "window half-width must exceed rho_d + 4");
  DRE_REQUIRE(g.box.contains(u), "u outside box");
  DRE_REQUIRE(!vd_check.contains(u), "u must lie outside the sub-lattice");
  DRE_REQUIRE(is_pivotal_naive(g, u, Point::zero(d), Point::constant(d, -M)),
              "u must be pivotal for the origin-to-corner connection");

  ModifyContext ctx(g, u, n, M);
  ModificationCertificate cert;
  cert.u = u;
  cert.window = ctx.window;
  cert.inner = ctx.inner;

  Point u_bar;
  try {
    // Terrace of the blocked configuration (u forced to E).
    ConfigGrid g1 = g;
    g1.omega.set(g.box.index_of(u));
    ClusterScratch scratch(g.box);
    auto t0 = extract_terrace(g1, ctx.o, scratch);
    DRE_INVARIANT(t0.has_value(), "pivotal u implies a blocked, non-filling cluster");
    ctx.base_terrace = *t0;
    ctx.bar = ctx.base_terrace;

    const bool o_in_inner = ctx.inner.contains(ctx.o);
    const bool u_above_o = u.geq(ctx.o);

    if (u_above_o) {
      // The straight segment [o, u] already lies in the terrace.
      cert.case_tag = o_in_inner ? "III" : "I";
      if (o_in_inner) {
        DRE_INVARIANT(ctx.bar.sites.contains(ctx.o), "origin below u missing from terrace");
        u_bar = ctx.o;
      } else {
        u_bar = find_u_bar_case1(ctx);
      }
    } else {
      cert.case_tag = o_in_inner ? "III" : "II";
      for (int i = 0; i < d; ++i) {
        Point w = u.shifted(i, +1);
        if (ctx.r.contains(w) && !ctx.base_terrace.sites.test_point(w)) {
          ctx.l_star = i;
          break;
        }
      }
      DRE_INVARIANT(ctx.l_star >= 0, "pivotal u below o_+ has an upper neighbour off the terrace");
      Point base = u.shifted(ctx.l_star, +1);
      for (int i = 0; i < d; ++i) {
        Point w = base.shifted(i, -1);
        if (!ctx.r.contains(w)) continue;
        DRE_INVARIANT(ctx.base_terrace.upset.test_point(w),
                      "in-box lower neighbour of the off-terrace site left the up-set");
        ctx.a_pts.push_back(w);
        ctx.a_mask.set_point(w);
      }
      deform_terrace(ctx, o_in_inner);
      if (ctx.stopped_early) {
        DRE_INVARIANT(ctx.bar.sites.contains(ctx.o), "stopped process left the origin off the terrace");
        u_bar = ctx.o;
      } else {
        auto found = find_u_bar_segments(ctx);
        u_bar = found ? *found : find_u_bar_fallback(ctx);
        if (ctx.used_special && cert.case_tag == "II") cert.case_tag = "II-special";
      }
    }
  } catch (const invariant_error& e) {
    cert.first_violation = std::string("construction: ") + e.what();
    cert.verified = false;
    return cert;
  }
  cert.u_bar = u_bar;
  cert.stopped_early = ctx.stopped_early;
  cert.used_fallback = ctx.used_fallback;

  // Rewrite the window: E exactly on the deformed terrace, F elsewhere.
  cert.modified = g;
  for (int64_t i = 0; i < ctx.window.size(); ++i) {
    Point x = ctx.window.site_at(i);
    int64_t ri = ctx.r.index_of(x);
    bool after = ctx.bar.sites.test(ri);
    bool before = g.omega.test(ri);
    cert.modified.omega.assign(ri, after);
    if (before != after)
      cert.diff.push_back({x, before ? SiteConfig::E : SiteConfig::F,
                           after ? SiteConfig::E : SiteConfig::F});
  }

  // ---- verification, all from scratch --------------------------------------
  auto check = [&](const std::string& name, bool ok) {
    cert.checks.emplace_back(name, ok);
    if (!ok && cert.first_violation.empty()) cert.first_violation = name;
  };

  const QTerrace& bar = ctx.bar;
  const QTerrace& base = ctx.base_terrace;

  check("replacement pivot in sub-lattice", ctx.vd.contains(u_bar));
  check("replacement pivot in inner window", ctx.inner.contains(u_bar));
  check("replacement pivot on deformed terrace", bar.sites.contains(u_bar));

  bool canonical = is_solid_above(bar.upset) &&
                   lower_boundary_unchecked(bar.upset).sites == bar.sites;
  check("deformed terrace canonical", canonical);

  auto equal_off_interior = [&](const SiteMask& a, const SiteMask& b) {
    const auto& wi = ctx.window_int.words();
    for (size_t w = 0; w < wi.size(); ++w)
      if ((a.words()[w] ^ b.words()[w]) & ~wi[w]) return false;
    return true;
  };
  check("terrace unchanged off window interior", equal_off_interior(bar.sites, base.sites));
  check("up-set unchanged off window interior", equal_off_interior(bar.upset, base.upset));
  check("up-set shrunk inside original", bar.upset.is_subset_of(base.upset));
  check("origin kept in up-set", bar.upset.contains(ctx.o));

  SiteMask s_mask = down_cone(ctx.target, ctx.r);
  s_mask &= bar.upset;
  check("target corner kept outside up-set", s_mask.none());

  check("replacement pivot off h-set or above origin", ctx.eqn5_ok(u_bar));

  if (ctx.l_star >= 0 && !ctx.stopped_early) {
    bool a_kept = true;
    for (const Point& a : ctx.a_pts) a_kept = a_kept && bar.upset.contains(a);
    check("protected anchors kept in up-set", a_kept);
    check("anchor column head outside terrace",
          !bar.sites.contains(u.shifted(ctx.l_star, +1)));
    check("u kept on deformed terrace", bar.sites.contains(u));
  }

  bool terrace_in_omega = bar.sites.is_subset_of(cert.modified.omega);
  check("deformed terrace carried by E sites", terrace_in_omega);

  bool confined = true;
  for (int64_t i = 0; i < ctx.r.size(); ++i)
    if (cert.modified.omega.test(i) != g.omega.test(i) &&
        !ctx.window.contains(ctx.r.site_at(i)))
      confined = false;
  check("modification confined to window", confined);

  check("replacement pivot pivotal (recomputed)",
        is_pivotal_naive(cert.modified, u_bar, ctx.o, ctx.target));

  cert.verified = cert.first_violation.empty();
  return cert;
}

std::string ModificationCertificate::to_json() const {
  nlohmann::json j;
  auto pt = [](const Point& p) {
    std::vector<int32_t> v(p.c.begin(), p.c.begin() + p.dim);
    return v;
  };
  j["u"] = pt(u);
  j["u_bar"] = pt(u_bar);
  j["case"] = case_tag;
  j["stopped_early"] = stopped_early;
  j["used_fallback"] = used_fallback;
  j["window"] = {{"lo", pt(window.lo)}, {"hi", pt(window.hi)}};
  j["inner"] = {{"lo", pt(inner.lo)}, {"hi", pt(inner.hi)}};
  nlohmann::json diffs = nlohmann::json::array();
  for (const auto& e : diff)
    diffs.push_back({{"site", pt(e.site)},
                     {"old", e.before == SiteConfig::E ? "E" : "F"},
                     {"new", e.after == SiteConfig::E ? "E" : "F"}});
  j["diff"] = diffs;
  nlohmann::json checks_j = nlohmann::json::object();
  for (const auto& [name, ok] : checks) checks_j[name] = ok;
  j["verification"] = checks_j;
  j["verified"] = verified;
  if (!verified) j["first_violation"] = first_violation;
  return j.dump(2);
}

// ---- Russo estimators ------------------------------------------------------------

RussoEstimate russo_estimates(int d, int N, int M, double p, double q, long trials,
                              uint64_t seed) {
  DRE_REQUIRE(trials >= 1, "need at least one trial");
  DRE_REQUIRE(N > M && M >= 1, "need N > M >= 1");
  Box r = Box::centered(Point::zero(d), N);
  ModelSpec spec = ModelSpec::disturbed(d, p, q);

  double sum_off = 0, sumsq_off = 0, sum_on = 0, sumsq_on = 0;
  for (long t = 0; t < trials; ++t) {
    EnvironmentField env(spec, r, derive_seed(seed, uint64_t(t)));
    ConfigGrid g = env.config_grid(r);
    PivotalReport rep = find_pivotal(g, M, PivotalMode::fast);
    double off = double(rep.off_vd.size());
    double on = double(rep.on_vd.size());
    sum_off += off;
    sumsq_off += off * off;
    sum_on += on;
    sumsq_on += on * on;
  }
  auto finish = [&](double s, double sq, double& mean, double& se) {
    mean = s / double(trials);
    double var = std::max(0.0, sq / double(trials) - mean * mean);
    se = std::sqrt(var / double(trials));
  };
  RussoEstimate out;
  out.trials = trials;
  finish(sum_off, sumsq_off, out.dbeta_dp, out.se_p);
  finish(sum_on, sumsq_on, out.dbeta_dq, out.se_q);
  return out;
}

double f_disturbance(double p, int d) {
  DRE_REQUIRE(p >= 0.0 && p <= 1.0, "probability outside [0,1]");
  DRE_REQUIRE(d >= 1, "dimension must be positive");
  return p * (1.0 - std::pow(1.0 - p, d + 1));
}

// ---- slab layer terraces -----------------------------------------------------------

SlabTerraceReport slab_terraces(const EnvironmentField& slab_env, const Box& base_window,
                                const Point& x) {
  DRE_REQUIRE(slab_env.spec().kind == ModelKind::slab, "slab terraces need a slab environment");
  const int d = slab_env.spec().base_dim();
  DRE_REQUIRE(base_window.dim() == d, "base window dimension mismatch");
  Box sw = slab_box(base_window);
  DRE_REQUIRE(slab_env.box().contains_box(sw), "window not inside the slab environment");
  DRE_REQUIRE(sw.contains(x), "start site outside the slab window");

  ConfigGrid g = slab_env.config_grid(sw);
  SiteMask cluster = Reach::forward_cluster(g, x);

  SlabTerraceReport rep;
  rep.base_window = base_window;

  SiteMask slice[2] = {SiteMask(base_window), SiteMask(base_window)};
  for (int layer = 0; layer < 2; ++layer)
    for (int64_t i = 0; i < base_window.size(); ++i) {
      Point z = base_window.site_at(i);
      if (cluster.test_point(slab_site(z, layer + 1))) slice[layer].set(i);
    }
  rep.fills_layer1 = slice[0].all();
  rep.fills_layer2 = slice[1].all();
  DRE_INVARIANT(is_solid_above(slice[0]) && is_solid_above(slice[1]),
                "slab cluster slices must be solid above");
  if (!rep.fills_layer1) rep.layer1 = lower_boundary_unchecked(slice[0]);
  if (!rep.fills_layer2) rep.layer2 = lower_boundary_unchecked(slice[1]);

  auto omega1 = [&](const Point& z, int layer) {
    return slab_env.site_config(slab_site(z, layer)) == SiteConfig::E;
  };

  for (int layer = 0; layer < 2; ++layer) {
    if (!(layer == 0 ? rep.layer1 : rep.layer2)) continue;
    const QTerrace& t = layer == 0 ? *rep.layer1 : *rep.layer2;
    for (const Point& z : t.sites.points()) {
      ++rep.sites_checked;
      if (!slice[layer].test_point(z)) rep.terraces_in_cluster = false;        // (i)
      if (!omega1(z, layer + 1)) rep.terraces_in_omega1 = false;               // (ii)
    }
    // (iii) closure of the layer terrace recovers the cluster slice.
    if (!(up_set_closure(t.sites) == slice[layer])) rep.closures_match_slices = false;
  }

  // (iv) layer-1 slice sits inside the layer-2 slice (projection ordering).
  if (!slice[0].is_subset_of(slice[1])) rep.layer1_below_layer2 = false;

  // (v) layer-2 sites above layer 2's terrace but not above layer 1's are E.
  for (int64_t i = 0; i < base_window.size(); ++i)
    if (slice[1].test(i) && !slice[0].test(i) &&
        !omega1(base_window.site_at(i), 2))
      rep.gap_in_omega1 = false;

  // (vi) around each layer-1 terrace site the W-shifted neighbourhood meets
  // Omega_1; checked where the d lower lookups stay in the window.
  if (rep.layer1) {
    for (const Point& z : rep.layer1->sites.points()) {
      bool in_margin = true;
      for (int j = 0; j < d; ++j)
        if (z[j] - 1 < base_window.lo[j]) in_margin = false;
      if (!in_margin) continue;
      bool hit = omega1(z, 2);
      for (int j = 0; j < d && !hit; ++j) hit = omega1(z.shifted(j, -1), 2);
      if (!hit) rep.w_neighbourhood_hit = false;
    }
  }
  return rep;
}

}  // namespace dre
