#pragma once

#include <string>
#include <vector>

#include "dre/enhancement.hpp"
#include "dre/environment.hpp"
#include "dre/geometry.hpp"
#include "dre/terrace.hpp"

namespace dre {

// Box and sampling parameters for the finite-volume experiments: the ambient
// box is Q_N, the target set hangs off -M*1, and n is the modification window
// half-width when modification experiments run.
struct ExperimentGeometry {
  int d = 2;
  int N = 8;
  int M = 2;
  int n = 0;  // 0 when unused
  long trials = 1000;
  uint64_t seed = 1;

  void validate() const;
};

enum class EstimatorKind : uint8_t { beta, theta_proxy, crossing };

struct EstimateRecord {
  double p = 0, q = 0;
  double value = 0, se = 0;
  long trials = 0;
  int d = 0, N = 0, M = 0;
  EstimatorKind kind = EstimatorKind::beta;
};

// Monte Carlo estimate of the probability that the origin fails to reach the
// target corner's down-set inside Q_N. Trial t uses the derived seed
// derive_seed(geo.seed, t); identical inputs give identical outputs.
EstimateRecord estimate_beta(const ModelSpec& spec, const ExperimentGeometry& geo);

// Proxy for an unbounded cluster: probability that the origin's cluster
// touches the lower boundary face of the box.
EstimateRecord estimate_theta_proxy(const ModelSpec& spec, const ExperimentGeometry& geo);

// ---- coupled grid scans -----------------------------------------------------

enum class QRule : uint8_t { equal, f_rule };

struct GridPointStat {
  double p = 0, q = 0;
  double beta = 0, se = 0;
};

struct CrossingEstimate {
  bool bracketed = false;
  double p_hat = 0, ci_lo = 0, ci_hi = 0;  // 95% bootstrap CI
  std::vector<GridPointStat> curve;
  long trials = 0;
  int d = 0, N = 0, M = 0;
};

struct ScanSpec {
  ModelKind kind = ModelKind::half_orthant;  // half_orthant, disturbed, or slab
  int d = 2;  // base dimension for slab
  int N = 8;
  int M = 2;
  std::vector<double> grid;
  QRule qrule = QRule::equal;
  long trials = 1000;
  uint64_t seed = 1;
  int bootstrap = 1000;
};

// Blocking curve over the grid with shared per-trial uniforms, the 1/2
// crossing of the blocking probability by linear interpolation, and a
// percentile bootstrap CI. Per-trial indicators are monotone along the grid,
// so each trial contributes one threshold index.
CrossingEstimate scan_critical(const ScanSpec& spec);

// Pilot-then-fine crossing search: a coarse pass brackets the crossing, a
// fine grid around it gets the full trial budget.
CrossingEstimate locate_crossing(ModelKind kind, int d, int N, int M, QRule qrule,
                                 long pilot_trials, long trials, double fine_step,
                                 uint64_t seed, double lo = 0.02, double hi = 0.98);

// Undisturbed (q = p) and disturbed (q = f(p)) curves over one grid with
// shared seeds; the disturbed blocking never exceeds the undisturbed one
// pointwise per trial.
struct DisturbedComparison {
  CrossingEstimate equal_rule;
  CrossingEstimate f_rule;
  bool pointwise_coupled_ok = true;  // beta_f <= beta_equal per trial
};
DisturbedComparison disturbed_curve(int d, const ScanSpec& base_spec);

inline CrossingEstimate slab_scan(const ScanSpec& spec_in) {
  ScanSpec s = spec_in;
  s.kind = ModelKind::slab;
  return scan_critical(s);
}

// ---- exports ------------------------------------------------------------------

struct SurfaceExport {
  bool fills = false;
  int64_t vertices = 0;
};

// Terrace of the cluster of x over the environment's box, written as an ASCII
// PLY point cloud (d = 3 only) or a CSV site list (any d).
SurfaceExport export_surface(const EnvironmentField& env, const Point& x,
                             const std::string& format, const std::string& path);

void write_path_csv(const std::string& path, const LatticePath& p, const std::string& header);

void write_curve_csv(const std::string& path, const CrossingEstimate& est);

// JSON run manifest: parameters plus a sha-256 content hash of their
// canonical serialization.
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& params);

}  // namespace dre
