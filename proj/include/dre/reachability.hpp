#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dre/environment.hpp"
#include "dre/geometry.hpp"

namespace dre {

// A nearest-neighbour (or terrace-step) path; consecutive points differ by a
// step appropriate to the construction that produced it.
struct LatticePath {
  std::vector<Point> points;
  bool complete = true;  // false when a step budget ran out

  int64_t length() const { return int64_t(points.size()) - 1; }
};

// Reusable buffers for cluster searches over one box.
class ClusterScratch {
public:
  explicit ClusterScratch(const Box& box);
  const BoxIndexer& indexer() const { return idx_; }

private:
  friend class Reach;
  BoxIndexer idx_;
  std::vector<uint8_t> visited;
  std::vector<int64_t> queue;
  std::vector<int64_t> parent;  // BFS tree, for witness paths
};

// Directed reachability in a configuration grid. All searches use a fixed
// lexicographic neighbour order (+e_0..+e_{d-1}, -e_0..-e_{d-1}), so witness
// paths are reproducible.
class Reach {
public:
  // Sites reachable from x by arrows that begin and end in the grid box.
  static SiteMask forward_cluster(const ConfigGrid& g, const Point& x);
  static SiteMask forward_cluster(const ConfigGrid& g, const Point& x, ClusterScratch& scratch);

  // True iff the cluster of x meets target_- within the box. No witness.
  static bool connects_to_down_set(const ConfigGrid& g, const Point& x, const Point& target,
                                   ClusterScratch& scratch);

  // As above with a witness path (BFS tree path) when connected.
  struct DownSetResult {
    bool connected = false;
    LatticePath witness;
  };
  static DownSetResult connects_to_down_set_witness(const ConfigGrid& g, const Point& x,
                                                    const Point& target);

  // Sites y whose cluster meets target_- within the box (reverse reachability).
  static SiteMask reaches_down_set(const ConfigGrid& g, const Point& target,
                                   ClusterScratch& scratch);
};

inline SiteMask forward_cluster(const ConfigGrid& g, const Point& x) {
  return Reach::forward_cluster(g, x);
}

// ---- line records -----------------------------------------------------------

// For the axis-i line through `base`: the least k with base + k e_i in the
// cluster, when the line meets it inside the box.
struct LValueRecord {
  Point base;
  int axis = 0;
  bool found = false;
  int32_t value = 0;

  Point hit_point() const { return base.shifted(axis, value); }
};

// One record per axis-`axis` line of the box; bases share the source's
// coordinate along `axis`.
std::vector<LValueRecord> l_values(const ConfigGrid& g, const Point& source, int axis);

// ---- greedy coordinate-plane paths ------------------------------------------

enum class PathVariant : uint8_t {
  wn,  // prefer -e_i, else +e_j
  se   // prefer -e_j, else +e_i
};

// Greedy path in the (i, j) coordinate plane from `start`, following the
// preferred decreasing arrow whenever the site's configuration offers it.
// Stops when `stop` returns true (the stop site is included) or the budget
// runs out (`complete` false). Evaluates the environment lazily, so the walk
// may leave the declared box.
LatticePath wn_se_path(const EnvironmentField& env, const Point& start, int axis_i, int axis_j,
                       PathVariant variant,
                       const std::function<bool(const Point&)>& stop,
                       int64_t budget = 1000000);

// Staged construction reaching the axis-j line through v: matches coordinates
// one axis at a time with wn/se walks. Returns the whole walk and k such that
// the endpoint is v + k e_j.
struct LineHit {
  LatticePath path;
  int32_t k = 0;
};
std::optional<LineHit> staged_line_hit(const EnvironmentField& env, const Point& u, const Point& v,
                                       int axis_j, int64_t budget = 1000000);

// Replays a path against an environment: every step must be a legal arrow.
bool path_consistent(const EnvironmentField& env, const LatticePath& path);

}  // namespace dre
