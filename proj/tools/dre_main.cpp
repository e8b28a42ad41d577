// Command-line driver: environment simulation, terrace exports, pivotal-site
// reports, window modification, blocking curves, crossing scans, validators.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dre/enhancement.hpp"
#include "dre/environment.hpp"
#include "dre/experiments.hpp"
#include "dre/validate.hpp"

using namespace dre;

namespace {

Point point_from(const std::vector<int32_t>& xs) {
  DRE_REQUIRE(!xs.empty() && int(xs.size()) <= kMaxDim, "bad point coordinate count");
  Point p = Point::zero(int(xs.size()));
  for (size_t k = 0; k < xs.size(); ++k) p[int(k)] = xs[k];
  return p;
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

ModelSpec make_spec(const std::string& model, int d, double p, double q) {
  auto kind = model_from_name(model);
  DRE_REQUIRE(kind.has_value(), "unknown model: " + model);
  switch (*kind) {
    case ModelKind::orthant: return ModelSpec::orthant(d, p);
    case ModelKind::half_orthant: return ModelSpec::half_orthant(d, p);
    case ModelKind::disturbed: return ModelSpec::disturbed(d, p, q);
    case ModelKind::slab: return ModelSpec::slab(d, p);
  }
  return ModelSpec::half_orthant(d, p);
}

std::vector<double> parse_grid(const std::string& s) {
  // "p0:p1:step"
  double a, b, step;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0 || b < a)
    throw precondition_error("grid must be p0:p1:step with step > 0");
  std::vector<double> g;
  for (double p = a; p <= b + 1e-12; p += step) g.push_back(p);
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthant/half-orthant random environment toolkit"};
  app.require_subcommand(1);

  uint64_t seed = 1;
  std::string out_dir = ".";
  std::string model = "half";
  int d = 2;
  double p = 0.5, q = -1.0;
  int box_n = 10;
  int N = 6, M = 2;
  long trials = 1000;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--out", out_dir, "output directory");
  };
  auto add_env = [&](CLI::App* cmd) {
    cmd->add_option("--model", model, "orthant|half|disturbed|slab");
    cmd->add_option("--d", d, "dimension");
    cmd->add_option("--p", p, "acceptance probability");
    cmd->add_option("--q", q, "sub-lattice acceptance probability (disturbed)");
  };

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "generate an environment snapshot");
  add_common(sim);
  add_env(sim);
  sim->add_option("--box", box_n, "box half-width N (box = Q_N)");
  sim->callback([&] {
    ModelSpec spec = make_spec(model, d, p, q < 0 ? p : q);
    Box b = spec.kind == ModelKind::slab
                ? slab_box(Box::centered(Point::zero(spec.base_dim()), box_n))
                : Box::centered(Point::zero(spec.dim), box_n);
    EnvironmentField env(spec, b, seed);
    std::string file = out_path(out_dir, "snapshot.dre");
    write_snapshot(env, file);
    SiteMask omega = env.omega_mask(b);
    std::printf("model %s d=%d p=%g q=%g box %s seed %llu\n", model_name(spec.kind), spec.dim,
                spec.p, spec.q, b.str().c_str(), (unsigned long long)seed);
    std::printf("omega_1 density %.6f (%lld of %lld sites)\n",
                double(omega.count()) / double(b.size()), (long long)omega.count(),
                (long long)b.size());
    std::printf("wrote %s\n", file.c_str());
    write_manifest(out_path(out_dir, "manifest.json"),
                   {{"command", "simulate"},
                    {"model", model_name(spec.kind)},
                    {"d", std::to_string(spec.dim)},
                    {"p", std::to_string(spec.p)},
                    {"q", std::to_string(spec.q)},
                    {"box", std::to_string(box_n)},
                    {"seed", std::to_string(seed)}});
  });

  // ---- terrace ----
  auto* ter = app.add_subcommand("terrace", "extract and export a cluster terrace");
  add_common(ter);
  add_env(ter);
  std::string export_fmt = "csv";
  std::vector<int32_t> x_coords;
  ter->add_option("--export", export_fmt, "csv|ply");
  ter->add_option("--x", x_coords, "cluster start site (defaults to the origin)");
  ter->add_option("--box", box_n, "box half-width N");
  ter->callback([&] {
    ModelSpec spec = make_spec(model, d, p, q < 0 ? p : q);
    DRE_REQUIRE(spec.kind != ModelKind::orthant,
                "terrace extraction needs a model whose F set contains the increasing steps");
    Box b = spec.kind == ModelKind::slab
                ? slab_box(Box::centered(Point::zero(spec.base_dim()), box_n))
                : Box::centered(Point::zero(spec.dim), box_n);
    EnvironmentField env(spec, b, seed);
    Point x = x_coords.empty() ? (spec.kind == ModelKind::slab
                                      ? slab_site(Point::zero(spec.base_dim()), 1)
                                      : Point::zero(spec.dim))
                               : point_from(x_coords);
    std::string file = out_path(out_dir, export_fmt == "ply" ? "terrace.ply" : "terrace.csv");
    SurfaceExport ex = export_surface(env, x, export_fmt, file);
    if (ex.fills)
      std::printf("cluster fills the box; empty terrace written to %s\n", file.c_str());
    else
      std::printf("terrace with %lld sites written to %s\n", (long long)ex.vertices,
                  file.c_str());
  });

  // ---- pivotal ----
  auto* piv = app.add_subcommand("pivotal", "pivotal sites for the origin-to-corner connection");
  add_common(piv);
  add_env(piv);
  std::string report_path;
  piv->add_option("--N", N, "box half-width");
  piv->add_option("--M", M, "target corner offset");
  piv->add_option("--report", report_path, "write a JSON report here");
  piv->callback([&] {
    ModelSpec spec = make_spec(model, d, p, q < 0 ? p : q);
    DRE_REQUIRE(spec.kind == ModelKind::half_orthant || spec.kind == ModelKind::disturbed,
                "pivotal analysis uses the half-orthant or disturbed model");
    Box r = Box::centered(Point::zero(d), N);
    EnvironmentField env(spec, r, seed);
    ConfigGrid g = env.config_grid(r);
    PivotalReport rep = find_pivotal(g, M);
    std::printf("base %s; pivotal sites: %lld off sub-lattice, %lld on sub-lattice\n",
                rep.base_blocked ? "blocked" : "connected", (long long)rep.off_vd.size(),
                (long long)rep.on_vd.size());
    if (!report_path.empty()) {
      std::string file = out_path(out_dir, report_path);
      std::FILE* f = std::fopen(file.c_str(), "w");
      DRE_REQUIRE(f, "cannot open " + file);
      std::fprintf(f, "{\n  \"N\": %d, \"M\": %d, \"p\": %g, \"q\": %g, \"seed\": %llu,\n", N, M,
                   spec.p, spec.q, (unsigned long long)seed);
      std::fprintf(f, "  \"base_blocked\": %s,\n  \"sites\": [\n",
                   rep.base_blocked ? "true" : "false");
      bool first = true;
      auto dump = [&](const PivotalSite& s) {
        std::fprintf(f, "%s    {\"site\": \"%s\", \"on_vd\": %s, \"in_terrace\": %s}",
                     first ? "" : ",\n", s.site.str().c_str(), s.on_vd ? "true" : "false",
                     s.in_terrace ? "true" : "false");
        first = false;
      };
      for (const auto& s : rep.off_vd) dump(s);
      for (const auto& s : rep.on_vd) dump(s);
      std::fprintf(f, "\n  ]\n}\n");
      std::fclose(f);
      std::printf("wrote %s\n", file.c_str());
    }
  });

  // ---- modify ----
  auto* mod = app.add_subcommand("modify", "deform the window around a pivotal site");
  add_common(mod);
  add_env(mod);
  int mod_n = 8;
  std::vector<int32_t> u_coords;
  bool verify = false;
  mod->add_option("--n", mod_n, "window half-width");
  mod->add_option("--u", u_coords, "pivotal site coordinates")->required();
  mod->add_flag("--verify", verify, "print the verification breakdown");
  mod->add_option("--N", N, "box half-width");
  mod->add_option("--M", M, "target corner offset");
  mod->callback([&] {
    ModelSpec spec = make_spec(model, d, p, q < 0 ? p : q);
    Box r = Box::centered(Point::zero(d), N);
    EnvironmentField env(spec, r, seed);
    ConfigGrid g = env.config_grid(r);
    ModificationCertificate cert = local_modify(g, point_from(u_coords), mod_n, M);
    std::string file = out_path(out_dir, "certificate.json");
    std::FILE* f = std::fopen(file.c_str(), "w");
    DRE_REQUIRE(f, "cannot open " + file);
    std::string js = cert.to_json();
    std::fwrite(js.data(), 1, js.size(), f);
    std::fclose(f);
    std::printf("case %s: replacement pivot %s, %zu site changes, %s\n", cert.case_tag.c_str(),
                cert.u_bar.str().c_str(), cert.diff.size(),
                cert.verified ? "verified" : ("FAILED: " + cert.first_violation).c_str());
    if (verify)
      for (const auto& [name, ok] : cert.checks)
        std::printf("  %-48s %s\n", name.c_str(), ok ? "ok" : "VIOLATED");
    std::printf("wrote %s\n", file.c_str());
  });

  // ---- beta ----
  auto* beta = app.add_subcommand("beta", "blocking-probability curve over a p grid");
  add_common(beta);
  add_env(beta);
  std::string grid_str = "0.1:0.9:0.1";
  std::string q_rule = "equal";
  beta->add_option("--grid", grid_str, "p0:p1:step");
  beta->add_option("--q-rule", q_rule, "equal|f");
  beta->add_option("--trials", trials, "trials per grid point");
  beta->add_option("--N", N, "box half-width");
  beta->add_option("--M", M, "target corner offset");
  beta->callback([&] {
    ScanSpec spec;
    auto kind = model_from_name(model);
    DRE_REQUIRE(kind.has_value(), "unknown model: " + model);
    spec.kind = *kind == ModelKind::orthant ? ModelKind::half_orthant : *kind;
    spec.d = d;
    spec.N = N;
    spec.M = M;
    spec.grid = parse_grid(grid_str);
    spec.qrule = q_rule == "f" ? QRule::f_rule : QRule::equal;
    spec.trials = trials;
    spec.seed = seed;
    CrossingEstimate est = scan_critical(spec);
    for (const GridPointStat& s : est.curve)
      std::printf("p=%.5f q=%.5f beta=%.5f se=%.5f\n", s.p, s.q, s.beta, s.se);
    if (est.bracketed)
      std::printf("crossing p_hat=%.5f  95%% CI [%.5f, %.5f]\n", est.p_hat, est.ci_lo, est.ci_hi);
    else
      std::printf("crossing not bracketed by this grid\n");
    std::string file = out_path(out_dir, "beta_curve.csv");
    write_curve_csv(file, est);
    write_manifest(out_path(out_dir, "manifest.json"),
                   {{"command", "beta"},
                    {"model", model},
                    {"d", std::to_string(d)},
                    {"N", std::to_string(N)},
                    {"M", std::to_string(M)},
                    {"grid", grid_str},
                    {"q_rule", q_rule},
                    {"trials", std::to_string(trials)},
                    {"seed", std::to_string(seed)}});
    std::printf("wrote %s\n", file.c_str());
  });

  // ---- scan-pc / slab-scan ----
  std::string bracket = "0.3,0.9";
  double tol = 0.01;
  auto add_scan = [&](CLI::App* cmd, bool slab_fixed) {
    add_common(cmd);
    cmd->add_option("--d", d, "dimension");
    cmd->add_option("--bracket", bracket, "a,b search bracket");
    cmd->add_option("--tol", tol, "grid resolution");
    cmd->add_option("--trials", trials, "trials per grid point");
    cmd->add_option("--N", N, "box half-width");
    cmd->add_option("--M", M, "target corner offset");
    if (!slab_fixed) cmd->add_option("--model", model, "half|disturbed");
    cmd->callback([&, slab_fixed] {
      double a, b;
      DRE_REQUIRE(std::sscanf(bracket.c_str(), "%lf,%lf", &a, &b) == 2 && a < b,
                  "--bracket must be a,b with a < b");
      ScanSpec spec;
      spec.kind =
          slab_fixed ? ModelKind::slab : model_from_name(model).value_or(ModelKind::half_orthant);
      if (spec.kind == ModelKind::orthant) spec.kind = ModelKind::half_orthant;
      spec.d = d;
      spec.N = N;
      spec.M = M;
      for (double pv = a; pv <= b + 1e-12; pv += tol) spec.grid.push_back(pv);
      spec.trials = trials;
      spec.seed = seed;
      CrossingEstimate est = scan_critical(spec);
      DRE_REQUIRE(est.bracketed, "bracket does not straddle the 1/2 crossing");
      std::printf("crossing p_hat=%.5f  95%% CI [%.5f, %.5f]  (N=%d M=%d trials=%ld)\n",
                  est.p_hat, est.ci_lo, est.ci_hi, N, M, trials);
      write_curve_csv(out_path(out_dir, "scan_curve.csv"), est);
    });
  };
  add_scan(app.add_subcommand("scan-pc", "locate the finite-box 1/2 crossing"), false);
  add_scan(app.add_subcommand("slab-scan", "crossing for the two-layer slab"), true);

  // ---- validate ----
  auto* val = app.add_subcommand("validate", "randomized validator suites");
  add_common(val);
  std::string suite = "geometry";
  long cases = 200;
  val->add_option("--suite", suite, "geometry|terrace|pivotal|modify");
  val->add_option("--cases", cases, "instance count");
  val->callback([&] {
    long bad = 0;
    if (suite == "geometry") {
      bad = validate::print_checks(validate::geometry_suite(cases, seed, cases >= 1000));
    } else if (suite == "terrace") {
      bad = validate::print_checks(validate::terrace_suite(cases, seed));
      bad += validate::print_checks(validate::slab_suite(cases, seed + 1));
    } else if (suite == "pivotal") {
      bad = validate::print_checks(validate::pivotal_suite(cases, seed));
    } else if (suite == "modify") {
      for (int dd : {2, 3}) {
        auto st = validate::modify_suite(cases, dd, seed + uint64_t(dd));
        std::printf("  d=%d: %ld/%ld certificates verified, fallbacks %ld\n", dd, st.verified,
                    st.produced, st.fallbacks);
        for (const auto& [tag, cnt] : st.case_counts)
          std::printf("      case %-12s %ld\n", tag.c_str(), cnt);
        for (const auto& fmsg : st.failures) std::printf("      FAIL %s\n", fmsg.c_str());
        if (!st.ok()) ++bad;
      }
    } else {
      throw precondition_error("unknown suite: " + suite);
    }
    std::printf("%s\n", bad == 0 ? "all checks passed" : "VIOLATIONS FOUND");
    if (bad) std::exit(1);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
