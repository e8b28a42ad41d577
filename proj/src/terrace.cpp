#include "dre/terrace.hpp"

#include <algorithm>
#include <set>

namespace dre {

namespace {

struct Strides {
  int d;
  int64_t stride[kMaxDim];
  int32_t extent[kMaxDim];

  explicit Strides(const Box& q) : d(q.dim()) {
    int64_t s = 1;
    for (int k = d - 1; k >= 0; --k) {
      stride[k] = s;
      extent[k] = q.extent(k);
      s *= q.extent(k);
    }
  }
  int32_t offset(int64_t i, int k) const { return int32_t((i / stride[k]) % extent[k]); }
};

}  // namespace

QTerrace lower_boundary_unchecked(const SiteMask& g) {
  const Box& q = g.box();
  Strides st(q);
  QTerrace t{q, SiteMask(q), g};
  const int64_t n = q.size();
  for (int64_t i = 0; i < n; ++i) {
    if (!g.test(i)) continue;
    for (int k = 0; k < st.d; ++k) {
      if (st.offset(i, k) > 0 && !g.test(i - st.stride[k])) {
        t.sites.set(i);
        break;
      }
    }
  }
  return t;
}

QTerrace lower_boundary(const SiteMask& g) {
  DRE_REQUIRE(is_solid_above(g), "lower_boundary input is not solid above");
  return lower_boundary_unchecked(g);
}

std::optional<QTerrace> extract_terrace(const ConfigGrid& g, const Point& x) {
  ClusterScratch scratch(g.box);
  return extract_terrace(g, x, scratch);
}

std::optional<QTerrace> extract_terrace(const ConfigGrid& g, const Point& x,
                                        ClusterScratch& scratch) {
  const StepSet plus = steps_plus(g.dim());
  DRE_REQUIRE((g.e_steps & plus) == plus && (g.f_steps & plus) == plus,
              "terrace extraction needs increasing steps in both configurations");
  SiteMask cluster = Reach::forward_cluster(g, x, scratch);
  if (cluster.test(0)) return std::nullopt;  // lower corner reached: cluster fills the box
  QTerrace t = lower_boundary_unchecked(cluster);
  // Boundary sites must carry the E configuration: an F site with an escaped
  // lower neighbour would have pulled that neighbour into the cluster.
  const int64_t n = g.box.size();
  for (int64_t i = 0; i < n; ++i)
    if (t.sites.test(i)) DRE_INVARIANT(g.is_e(i), "cluster boundary met an F site");
  return t;
}

bool is_upset_corner(const QTerrace& t, const Point& z) {
  if (!t.upset.contains(z)) return false;
  for (int k = 0; k < t.dim(); ++k) {
    Point below = z.shifted(k, -1);
    if (t.upset.contains(below)) return false;
  }
  return true;
}

bool in_h_set(const QTerrace& t, const Point& x) {
  if (!t.sites.contains(x)) return false;
  for (int k = 0; k < t.dim(); ++k) {
    Point above = x.shifted(k, +1);
    if (t.box.contains(above) && !t.sites.test_point(above)) return false;
  }
  return true;
}

CornerSet corners_of(const QTerrace& t) {
  CornerSet out;
  const int64_t n = t.box.size();
  for (int64_t i = 0; i < n; ++i) {
    if (!t.upset.test(i)) continue;
    Point x = t.box.site_at(i);
    if (is_upset_corner(t, x)) out.corners.push_back(x);
    if (in_h_set(t, x)) out.h_set.push_back(x);
  }
  return out;
}

TerraceWorkspace::TerraceWorkspace(const QTerrace& t)
    : box_(t.box), idx_(t.box), sites_(t.sites), upset_(t.upset) {}

bool TerraceWorkspace::is_corner(int64_t i) const {
  if (!upset_.test(i)) return false;
  for (int k = 0; k < idx_.dim(); ++k)
    if (idx_.offset(i, k) > 0 && upset_.test(i - idx_.stride(k))) return false;
  return true;
}

bool TerraceWorkspace::in_h(int64_t i) const {
  if (!sites_.test(i)) return false;
  for (int k = 0; k < idx_.dim(); ++k)
    if (idx_.offset(i, k) + 1 < idx_.extent(k) && !sites_.test(i + idx_.stride(k))) return false;
  return true;
}

void TerraceWorkspace::push(int64_t z) {
  DRE_INVARIANT(is_corner(z), "push target is not a corner of the up-set");
  upset_.reset(z);
  sites_.reset(z);
  // The re-extracted boundary is (sites \ {z}) plus the in-box upper
  // neighbours of z, which always lie in the up-set.
  for (int k = 0; k < idx_.dim(); ++k)
    if (idx_.offset(z, k) + 1 < idx_.extent(k)) sites_.set(z + idx_.stride(k));
}

TerraceWorkspace::StabilizeOutcome TerraceWorkspace::stabilize_pass(
    const SiteMask& window_interior, const SiteMask& protect, int64_t stop_index) {
  StabilizeOutcome out;
  std::set<int64_t> candidates;
  const int64_t n = idx_.size();
  for (int64_t i = 0; i < n; ++i)
    if (window_interior.test(i) && !protect.test(i) && is_corner(i)) candidates.insert(i);

  while (!candidates.empty()) {
    int64_t z = *candidates.begin();
    candidates.erase(candidates.begin());
    if (!is_corner(z)) continue;  // stale candidate
    if (z == stop_index) {
      out.stopped = true;
      return out;
    }
    push(z);
    ++out.pushes;
    // Only the upper neighbours of z can newly become corners.
    for (int k = 0; k < idx_.dim(); ++k) {
      if (idx_.offset(z, k) + 1 >= idx_.extent(k)) continue;
      int64_t up = z + idx_.stride(k);
      if (window_interior.test(up) && !protect.test(up)) candidates.insert(up);
    }
  }
  return out;
}

int64_t TerraceWorkspace::delete_h_pass(const SiteMask& window_interior, const Point& apex) {
  int64_t deletions = 0;
  const int64_t n = idx_.size();
  for (int64_t scan = 0; scan < n; ++scan) {
    if (!window_interior.test(scan) || !sites_.test(scan)) continue;
    if (!in_h(scan)) continue;
    if (idx_.site_at(scan).geq(apex)) continue;  // inside apex_+: kept
    // Descend along lower neighbours that stay in the h-set until a corner.
    int64_t cur = scan;
    while (!is_corner(cur)) {
      int64_t next = -1;
      for (int k = 0; k < idx_.dim(); ++k) {
        if (idx_.offset(cur, k) > 0 && in_h(cur - idx_.stride(k))) {
          next = cur - idx_.stride(k);
          break;
        }
      }
      DRE_INVARIANT(next >= 0, "h-set descent found neither a corner nor a lower h-site");
      DRE_INVARIANT(window_interior.test(next), "h-set descent left the window interior");
      cur = next;
    }
    DRE_INVARIANT(window_interior.test(cur), "h-corner to delete left the window interior");
    push(cur);  // h-set corner: removal changes the terrace by exactly {cur}
    ++deletions;
    scan = -1;  // terrace changed; rescan
  }
  return deletions;
}

QTerrace push_up(const QTerrace& t, const Point& z) {
  DRE_REQUIRE(t.box.contains(z), "push-up site outside box");
  DRE_REQUIRE(is_upset_corner(t, z), "push-up site is not a corner of the up-set");
  TerraceWorkspace ws(t);
  ws.push(t.box.index_of(z));
  return ws.snapshot();
}

QTerrace stabilize(const QTerrace& t, const Box& window, const SiteMask& protected_sites) {
  DRE_REQUIRE(protected_sites.box() == t.box, "protected-set mask must live on the ambient box");
  DRE_REQUIRE(protected_sites.is_subset_of(t.upset), "protected set must lie in the up-set");
  DRE_REQUIRE(!t.upset.none() && !t.upset.all(), "up-set must be neither empty nor the whole box");
  SiteMask interior = relative_interior_mask(window, t.box);
  TerraceWorkspace ws(t);
  ws.stabilize_pass(interior, protected_sites);
  return ws.snapshot();
}

QTerrace delete_h_corners(const QTerrace& t, const Box& window, const Point& apex) {
  SiteMask interior = relative_interior_mask(window, t.box);
  TerraceWorkspace ws(t);
  ws.delete_h_pass(interior, apex);
  return ws.snapshot();
}

// ---- paths -------------------------------------------------------------------

LatticePath terrace_path(const QTerrace& t, const Point& x, const Point& y) {
  DRE_REQUIRE(t.sites.contains(x) && t.sites.contains(y), "endpoints must be terrace sites");
  const int d = t.dim();
  LatticePath path;
  path.points.push_back(x);
  Point cur = x;
  while (cur != y) {
    Point next = cur;
    if (cur.leq(y)) {
      int i = 0;
      while (cur[i] == y[i]) ++i;
      next = cur.shifted(i, +1);
    } else if (cur.geq(y)) {
      // Build the opposite direction and reverse.
      LatticePath rev = terrace_path(t, y, cur);
      for (size_t s = rev.points.size() - 1; s-- > 0;) path.points.push_back(rev.points[s]);
      return path;
    } else {
      int i = -1, k = -1;
      for (int a = 0; a < d && (i < 0 || k < 0); ++a) {
        if (i < 0 && cur[a] < y[a]) i = a;
        if (k < 0 && cur[a] > y[a]) k = a;
      }
      Point down = cur.shifted(k, -1);
      Point diag = down.shifted(i, +1);
      if (t.upset.contains(down))
        next = down;
      else if (t.upset.contains(diag))
        next = diag;
      else
        next = cur.shifted(i, +1);
    }
    DRE_INVARIANT(t.sites.contains(next), "terrace path left the terrace");
    path.points.push_back(next);
    cur = next;
  }
  return path;
}

LatticePath complement_path(const QTerrace& t, const Box& window, const Point& x, const Point& y) {
  DRE_REQUIRE(window.contains(x) && window.contains(y), "endpoints must lie in the window");
  const bool x_out = !t.upset.contains(x);
  const bool y_out = !t.upset.contains(y);
  const bool x_in = t.upset.contains(x) && !t.sites.contains(x);
  const bool y_in = t.upset.contains(y) && !t.sites.contains(y);
  DRE_REQUIRE((x_out && y_out) || (x_in && y_in),
              "endpoints must both avoid the up-set or both lie strictly inside it");

  LatticePath path;
  path.points.push_back(x);
  Point cur = x;
  auto step_down_runs = [&]() {
    for (int k = 0; k < t.dim(); ++k)
      while (cur[k] > y[k]) {
        cur = cur.shifted(k, -1);
        DRE_INVARIANT(!t.sites.contains(cur), "complement path met the terrace");
        path.points.push_back(cur);
      }
  };
  auto step_up_runs = [&]() {
    for (int k = 0; k < t.dim(); ++k)
      while (cur[k] < y[k]) {
        cur = cur.shifted(k, +1);
        DRE_INVARIANT(!t.sites.contains(cur), "complement path met the terrace");
        path.points.push_back(cur);
      }
  };
  if (x_out) {
    step_down_runs();
    step_up_runs();
  } else {
    step_up_runs();
    step_down_runs();
  }
  return path;
}

DescendingPath special_descending_path(const QTerrace& t, const Box& window, const Point& x) {
  DRE_REQUIRE(t.sites.contains(x), "start must be a terrace site");
  DRE_REQUIRE(window.contains(x), "start must lie in the window");
  DescendingPath out;
  out.path.points.push_back(x);
  if (on_relative_boundary(x, window, t.box)) {
    out.reached_boundary = true;
    return out;
  }
  Point cur = x;
  for (int j = 0; j < t.dim(); ++j) {
    for (;;) {
      Point next = cur.shifted(j, -1);
      if (!t.box.contains(next)) break;  // axis exhausted at the ambient wall
      if (!t.sites.test_point(next)) {
        // Below the terrace: the walk may not continue on this axis.
        DRE_INVARIANT(!t.upset.test_point(next),
                      "descending walk met an up-set site outside the terrace");
        break;
      }
      bool boundary = on_relative_boundary(next, window, t.box);
      cur = next;
      out.path.points.push_back(cur);
      if (boundary) {
        out.reached_boundary = true;
        return out;
      }
    }
  }
  // All axes exhausted strictly inside the window: `cur` is a corner below x.
  DRE_INVARIANT(is_upset_corner(t, cur), "stuck descending walk did not end at a corner");
  out.blocking_corner = cur;
  return out;
}

}  // namespace dre
