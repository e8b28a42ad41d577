#include "dre/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace dre {

void ExperimentGeometry::validate() const {
  DRE_REQUIRE(d >= 2 && d <= kMaxDim, "dimension out of range");
  DRE_REQUIRE(N > M && M >= 1, "need N > M >= 1");
  DRE_REQUIRE(trials >= 1, "need at least one trial");
  if (n > 0) {
    VdLattice vd(d);
    DRE_REQUIRE(M > n && n > vd.rho + 4, "need N > M > n > rho_d + 4");
  }
}

namespace {

struct BlockingSetup {
  Box box;        // ambient box of the run
  Point origin;   // source of the cluster
  Point target;   // corner of the down-set to reach
};

BlockingSetup blocking_setup(const ModelSpec& spec, int N, int M) {
  if (spec.kind == ModelKind::slab) {
    int bd = spec.base_dim();
    Box base = Box::centered(Point::zero(bd), N);
    return {slab_box(base), slab_site(Point::zero(bd), 1),
            slab_site(Point::constant(bd, -M), 1)};
  }
  Box r = Box::centered(Point::zero(spec.dim), N);
  return {r, Point::zero(spec.dim), Point::constant(spec.dim, -M)};
}

// Per-site 53-bit uniforms over a box, odometer order.
void fill_hash53(const Box& box, uint64_t seed, std::vector<uint64_t>& out) {
  const int d = box.dim();
  out.resize(size_t(box.size()));
  Point cur = box.lo;
  for (int64_t i = 0; i < box.size(); ++i) {
    out[size_t(i)] = site_hash53(seed, cur);
    for (int k = d - 1; k >= 0; --k) {
      if (cur[k] < box.hi[k]) {
        ++cur[k];
        break;
      }
      cur[k] = box.lo[k];
    }
  }
}

double mean_se(long hits, long trials, double& se) {
  double m = double(hits) / double(trials);
  se = std::sqrt(std::max(0.0, m * (1.0 - m)) / double(trials));
  return m;
}

}  // namespace

EstimateRecord estimate_beta(const ModelSpec& spec, const ExperimentGeometry& geo) {
  geo.validate();
  BlockingSetup setup = blocking_setup(spec, geo.N, geo.M);
  ClusterScratch scratch(setup.box);
  long blocked = 0;
  for (long t = 0; t < geo.trials; ++t) {
    EnvironmentField env(spec, setup.box, derive_seed(geo.seed, uint64_t(t)));
    ConfigGrid g = env.config_grid(setup.box);
    if (!Reach::connects_to_down_set(g, setup.origin, setup.target, scratch)) ++blocked;
  }
  EstimateRecord rec;
  rec.p = spec.p;
  rec.q = spec.q;
  rec.trials = geo.trials;
  rec.d = spec.base_dim();
  rec.N = geo.N;
  rec.M = geo.M;
  rec.kind = EstimatorKind::beta;
  rec.value = mean_se(blocked, geo.trials, rec.se);
  return rec;
}

EstimateRecord estimate_theta_proxy(const ModelSpec& spec, const ExperimentGeometry& geo) {
  geo.validate();
  BlockingSetup setup = blocking_setup(spec, geo.N, geo.M);
  ClusterScratch scratch(setup.box);
  long touched = 0;
  for (long t = 0; t < geo.trials; ++t) {
    EnvironmentField env(spec, setup.box, derive_seed(geo.seed, uint64_t(t)));
    ConfigGrid g = env.config_grid(setup.box);
    SiteMask cluster = Reach::forward_cluster(g, setup.origin, scratch);
    bool touch = false;
    for (const Point& x : cluster.points()) {
      for (int k = 0; k < setup.box.dim() && !touch; ++k)
        if (x[k] == setup.box.lo[k]) touch = true;
      if (touch) break;
    }
    if (touch) ++touched;
  }
  EstimateRecord rec;
  rec.p = spec.p;
  rec.q = spec.q;
  rec.trials = geo.trials;
  rec.d = spec.base_dim();
  rec.N = geo.N;
  rec.M = geo.M;
  rec.kind = EstimatorKind::theta_proxy;
  rec.value = mean_se(touched, geo.trials, rec.se);
  return rec;
}

// ---- coupled scans -----------------------------------------------------------

namespace {

double q_for(QRule rule, double p, int d) {
  return rule == QRule::equal ? p : f_disturbance(p, d);
}

struct ScanEngine {
  const ScanSpec& spec;
  BlockingSetup setup;
  BoxIndexer idx;
  ClusterScratch scratch;
  ConfigGrid grid;
  std::vector<uint64_t> hashes;
  std::vector<uint8_t> vd_site;  // disturbed only
  std::vector<uint64_t> thresh_p, thresh_q;

  explicit ScanEngine(const ScanSpec& s)
      : spec(s),
        setup(blocking_setup(model_spec_at(s, s.grid.empty() ? 0.5 : s.grid.front()), s.N, s.M)),
        idx(setup.box),
        scratch(setup.box),
        grid(setup.box, steps_plus(setup.box.dim()), steps_all(setup.box.dim())) {
    DRE_REQUIRE(!s.grid.empty(), "grid must be non-empty");
    DRE_REQUIRE(std::is_sorted(s.grid.begin(), s.grid.end()), "grid must be ascending");
    if (s.kind == ModelKind::disturbed) {
      VdLattice vd(s.d);
      vd_site.resize(size_t(setup.box.size()));
      for (int64_t i = 0; i < setup.box.size(); ++i)
        vd_site[size_t(i)] = vd.contains(setup.box.site_at(i)) ? 1 : 0;
    }
    for (double p : s.grid) {
      thresh_p.push_back(acceptance_threshold(p));
      thresh_q.push_back(acceptance_threshold(q_for(s.qrule, p, s.d)));
    }
  }

  static ModelSpec model_spec_at(const ScanSpec& s, double p) {
    switch (s.kind) {
      case ModelKind::half_orthant: return ModelSpec::half_orthant(s.d, p);
      case ModelKind::disturbed: return ModelSpec::disturbed(s.d, p, q_for(s.qrule, p, s.d));
      case ModelKind::slab: return ModelSpec::slab(s.d, p);
      default: DRE_REQUIRE(false, "scan supports half, disturbed and slab models");
    }
    return ModelSpec::half_orthant(s.d, p);
  }

  bool blocked_at(size_t k) {
    const uint64_t tp = thresh_p[k], tq = thresh_q[k];
    const int64_t n = setup.box.size();
    for (int64_t i = 0; i < n; ++i) {
      uint64_t t = (!vd_site.empty() && vd_site[size_t(i)]) ? tq : tp;
      grid.omega.assign(i, hashes[size_t(i)] < t);
    }
    return !Reach::connects_to_down_set(grid, setup.origin, setup.target, scratch);
  }

  // First grid index at which this trial blocks (grid.size() if none); the
  // per-trial indicator is non-decreasing along the grid, so binary search.
  size_t threshold_index(uint64_t trial_seed) {
    fill_hash53(setup.box, trial_seed, hashes);
    size_t k = spec.grid.size();
    if (!blocked_at(k - 1)) return k;  // never blocks on this grid
    if (blocked_at(0)) return 0;
    size_t lo = 0, hi = k - 1;  // blocked at hi, open at lo
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      (blocked_at(mid) ? hi : lo) = mid;
    }
    return hi;
  }
};

bool crossing_from_counts(const std::vector<double>& grid, const std::vector<long>& counts,
                          long trials, double& p_hat) {
  const size_t k = grid.size();
  std::vector<double> beta(k);
  for (size_t i = 0; i < k; ++i) beta[i] = double(counts[i]) / double(trials);
  if (beta.front() >= 0.5 || beta.back() < 0.5) return false;
  size_t j = 0;
  while (beta[j] < 0.5) ++j;
  double b0 = beta[j - 1], b1 = beta[j];
  p_hat = grid[j - 1] + (0.5 - b0) / (b1 - b0) * (grid[j] - grid[j - 1]);
  return true;
}

}  // namespace

CrossingEstimate scan_critical(const ScanSpec& spec) {
  ScanEngine engine(spec);
  const size_t k = spec.grid.size();
  std::vector<size_t> tstar(size_t(spec.trials));
  for (long t = 0; t < spec.trials; ++t)
    tstar[size_t(t)] = engine.threshold_index(derive_seed(spec.seed, uint64_t(t)));

  // Cumulative blocked counts per grid point.
  std::vector<long> hist(k + 1, 0);
  for (size_t v : tstar) ++hist[v];
  std::vector<long> counts(k, 0);
  long acc = 0;
  for (size_t i = 0; i < k; ++i) {
    acc += hist[i];
    counts[i] = acc;
  }

  CrossingEstimate est;
  est.trials = spec.trials;
  est.d = spec.d;
  est.N = spec.N;
  est.M = spec.M;
  for (size_t i = 0; i < k; ++i) {
    GridPointStat s;
    s.p = spec.grid[i];
    s.q = q_for(spec.qrule, s.p, spec.d);
    double se;
    s.beta = mean_se(counts[i], spec.trials, se);
    s.se = se;
    est.curve.push_back(s);
  }
  est.bracketed = crossing_from_counts(spec.grid, counts, spec.trials, est.p_hat);
  if (!est.bracketed) return est;

  // Percentile bootstrap over trials.
  Rng rng(derive_seed(spec.seed, 0xb00757a9));
  std::vector<double> crossings;
  crossings.reserve(size_t(spec.bootstrap));
  std::vector<long> bhist(k + 1);
  for (int b = 0; b < spec.bootstrap; ++b) {
    std::fill(bhist.begin(), bhist.end(), 0L);
    for (long t = 0; t < spec.trials; ++t)
      ++bhist[tstar[rng.next_below(uint64_t(spec.trials))]];
    std::vector<long> bcounts(k);
    long bacc = 0;
    for (size_t i = 0; i < k; ++i) {
      bacc += bhist[i];
      bcounts[i] = bacc;
    }
    double ph;
    if (crossing_from_counts(spec.grid, bcounts, spec.trials, ph)) crossings.push_back(ph);
  }
  if (crossings.size() >= 50) {
    std::sort(crossings.begin(), crossings.end());
    est.ci_lo = crossings[size_t(0.025 * double(crossings.size()))];
    est.ci_hi = crossings[size_t(0.975 * double(crossings.size()))];
  } else {
    // Bootstrap degenerate (crossing at the grid edge); fall back to the grid span.
    est.ci_lo = spec.grid.front();
    est.ci_hi = spec.grid.back();
  }
  return est;
}

CrossingEstimate locate_crossing(ModelKind kind, int d, int N, int M, QRule qrule,
                                 long pilot_trials, long trials, double fine_step,
                                 uint64_t seed, double lo, double hi) {
  ScanSpec pilot;
  pilot.kind = kind;
  pilot.d = d;
  pilot.N = N;
  pilot.M = M;
  pilot.qrule = qrule;
  pilot.trials = pilot_trials;
  pilot.seed = seed;
  pilot.bootstrap = 0;
  for (double p = lo; p <= hi + 1e-12; p += 0.05) pilot.grid.push_back(p);
  CrossingEstimate coarse = scan_critical(pilot);
  DRE_REQUIRE(coarse.bracketed, "pilot grid does not straddle the 1/2 crossing");

  double center = coarse.p_hat;
  double half = 4.0 * fine_step;
  for (int attempt = 0; attempt < 4; ++attempt) {
    ScanSpec fine = pilot;
    fine.trials = trials;
    fine.bootstrap = 1000;
    fine.grid.clear();
    double a = std::max(0.01, center - half), b = std::min(0.99, center + half);
    for (double p = a; p <= b + 1e-12; p += fine_step) fine.grid.push_back(p);
    CrossingEstimate est = scan_critical(fine);
    if (est.bracketed) return est;
    half *= 2.0;  // widen and retry
  }
  DRE_REQUIRE(false, "fine grid repeatedly failed to straddle the crossing");
  return coarse;
}

DisturbedComparison disturbed_curve(int d, const ScanSpec& base_spec) {
  DisturbedComparison out;
  ScanSpec eq = base_spec;
  eq.kind = ModelKind::disturbed;
  eq.d = d;
  eq.qrule = QRule::equal;
  ScanSpec fr = eq;
  fr.qrule = QRule::f_rule;
  out.equal_rule = scan_critical(eq);
  out.f_rule = scan_critical(fr);
  // Shared seeds: blocking under q = f(p) <= p is pointwise below blocking
  // under q = p, so the blocking thresholds can only move up. Compare curves.
  for (size_t i = 0; i < out.equal_rule.curve.size(); ++i)
    if (out.f_rule.curve[i].beta > out.equal_rule.curve[i].beta + 1e-12)
      out.pointwise_coupled_ok = false;
  return out;
}

// ---- exports ---------------------------------------------------------------------

SurfaceExport export_surface(const EnvironmentField& env, const Point& x,
                             const std::string& format, const std::string& path) {
  DRE_REQUIRE(format == "csv" || format == "ply", "format must be csv or ply");
  if (format == "ply")
    DRE_REQUIRE(env.spec().dim == 3, "ply export is for 3-dimensional environments");
  ConfigGrid g = env.config_grid(env.box());
  auto t = extract_terrace(g, x);

  SurfaceExport out;
  std::ofstream f(path);
  DRE_REQUIRE(f.good(), "cannot open export file: " + path);
  if (!t) {
    out.fills = true;
    if (format == "ply")
      f << "ply\nformat ascii 1.0\ncomment cluster fills the box; empty terrace\n"
        << "element vertex 0\nproperty float x\nproperty float y\nproperty float z\n"
        << "end_header\n";
    else
      f << "# cluster fills the box; empty terrace\n";
    return out;
  }
  std::vector<Point> verts = t->sites.points();
  out.vertices = int64_t(verts.size());
  if (format == "ply") {
    f << "ply\nformat ascii 1.0\n"
      << "comment terrace of the cluster of " << x.str() << ", model "
      << model_name(env.spec().kind) << ", p " << env.spec().p << ", seed " << env.seed()
      << "\nelement vertex " << verts.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
    for (const Point& v : verts) f << v[0] << " " << v[1] << " " << v[2] << "\n";
  } else {
    f << "# terrace sites, model " << model_name(env.spec().kind) << ", p " << env.spec().p
      << ", seed " << env.seed() << "\n";
    for (const Point& v : verts) {
      for (int k = 0; k < v.dim; ++k) f << (k ? "," : "") << v[k];
      f << "\n";
    }
  }
  return out;
}

void write_path_csv(const std::string& path, const LatticePath& p, const std::string& header) {
  std::ofstream f(path);
  DRE_REQUIRE(f.good(), "cannot open export file: " + path);
  f << "# " << header << "\n";
  for (const Point& x : p.points) {
    for (int k = 0; k < x.dim; ++k) f << (k ? "," : "") << x[k];
    f << "\n";
  }
}

void write_curve_csv(const std::string& path, const CrossingEstimate& est) {
  std::ofstream f(path);
  DRE_REQUIRE(f.good(), "cannot open export file: " + path);
  f << "p,q,N,M,trials,beta_hat,se\n";
  char line[256];
  for (const GridPointStat& s : est.curve) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%d,%d,%ld,%.17g,%.17g\n", s.p, s.q, est.N,
                  est.M, est.trials, s.beta, s.se);
    f << line;
  }
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& params) {
  std::vector<std::pair<std::string, std::string>> sorted = params;
  std::sort(sorted.begin(), sorted.end());
  std::string canonical;
  for (const auto& [k, v] : sorted) canonical += k + "=" + v + "\n";
  nlohmann::json j;
  for (const auto& [k, v] : sorted) j["params"][k] = v;
  j["content_hash"] = sha256_hex(canonical);
  std::ofstream f(path);
  DRE_REQUIRE(f.good(), "cannot open manifest file: " + path);
  f << j.dump(2) << "\n";
}

}  // namespace dre
