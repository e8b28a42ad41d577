#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dre/environment.hpp"
#include "dre/geometry.hpp"
#include "dre/reachability.hpp"
#include "dre/terrace.hpp"

namespace dre {

// Blocking event: the cluster of `source` misses target_- within the box.
bool blocks_down_set(const ConfigGrid& g, const Point& source, const Point& target,
                     ClusterScratch& scratch);

// Definitional pivotality check for source -> target_-: no connection with u
// forced to E, a connection with u forced to F. Independent of u's own
// configuration; this is the oracle the fast path is tested against.
bool is_pivotal_naive(const ConfigGrid& g, const Point& u, const Point& source,
                      const Point& target);

enum class PivotalMode : uint8_t { fast = 0, naive = 1 };

struct PivotalSite {
  Point site;
  bool on_vd = false;
  bool in_terrace = false;  // meaningful when the base configuration blocks
};

struct PivotalReport {
  Box box;
  int target_offset = 0;  // M
  bool base_blocked = false;
  std::vector<PivotalSite> on_vd;
  std::vector<PivotalSite> off_vd;

  int64_t total() const { return int64_t(on_vd.size() + off_vd.size()); }
};

// All sites of the box pivotal for o -> (-M 1)_- within the box, split on the
// V_d sub-lattice. The fast mode resolves the blocked case with two sweeps
// (forward cluster and reverse reachability) and checks the few remaining
// candidates exactly in the connected case.
PivotalReport find_pivotal(const ConfigGrid& g, int M, PivotalMode mode = PivotalMode::fast);

// ---- local modification -------------------------------------------------------

struct DiffEntry {
  Point site;
  SiteConfig before;
  SiteConfig after;
};

// Outcome of the window modification around a pivotal site u outside V_d:
// a rewritten configuration whose window carries the deformed terrace, plus
// the replacement pivot u_bar in V_d, and the verification of every required
// property by recomputation.
struct ModificationCertificate {
  Point u;
  Point u_bar;
  Box window;       // (u + Q_n) cut to the box
  Box inner;        // (u + Q_{n-2}) cut to the box
  std::string case_tag;  // "I", "II", "II-special", or "III"
  bool stopped_early = false;  // case III stopping rule fired
  bool used_fallback = false;  // u_bar located by window scan, not a segment route
  std::vector<DiffEntry> diff;
  ConfigGrid modified;

  std::vector<std::pair<std::string, bool>> checks;
  bool verified = false;
  std::string first_violation;  // empty when verified

  std::string to_json() const;
};

// Runs the terrace-deformation construction on the window (u + Q_n) and
// verifies the certificate from scratch. Preconditions: n > rho_d + 4, u
// pivotal for o -> (-M 1)_- and not in V_d, half-orthant step semantics.
// Construction-stage invariant violations are returned as unverified
// diagnostic certificates rather than thrown.
ModificationCertificate local_modify(const ConfigGrid& g, const Point& u, int n, int M);

// ---- Russo derivative estimators ------------------------------------------------

// Monte Carlo means of the pivotal counts off and on V_d for the disturbed
// model on Q_N; these are the two partial derivatives of the blocking
// probability in p and q.
struct RussoEstimate {
  double dbeta_dp = 0, se_p = 0;
  double dbeta_dq = 0, se_q = 0;
  long trials = 0;
};
RussoEstimate russo_estimates(int d, int N, int M, double p, double q, long trials,
                              uint64_t seed);

// Degraded V_d acceptance probability of the disturbed model matching the
// two-layer slab: f(p) = p (1 - (1-p)^{d+1}).
double f_disturbance(double p, int d);

// ---- slab layer terraces ---------------------------------------------------------

// Layer terraces of the two-layer slab cluster of x over a base window, with
// the layer-coupling properties checked site by site (lower-margin sites
// where a clause needs in-window lookups).
struct SlabTerraceReport {
  Box base_window;
  bool fills_layer1 = false;
  bool fills_layer2 = false;
  std::optional<QTerrace> layer1;  // d-dimensional
  std::optional<QTerrace> layer2;
  bool terraces_in_cluster = true;       // (i)
  bool terraces_in_omega1 = true;        // (ii)
  bool closures_match_slices = true;     // (iii)
  bool layer1_below_layer2 = true;       // (iv)
  bool gap_in_omega1 = true;             // (v)
  bool w_neighbourhood_hit = true;       // (vi)
  int64_t sites_checked = 0;

  bool all_clauses() const {
    return terraces_in_cluster && terraces_in_omega1 && closures_match_slices &&
           layer1_below_layer2 && gap_in_omega1 && w_neighbourhood_hit;
  }
};
SlabTerraceReport slab_terraces(const EnvironmentField& slab_env, const Box& base_window,
                                const Point& x);

}  // namespace dre
