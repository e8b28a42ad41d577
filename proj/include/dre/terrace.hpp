#pragma once

#include <optional>
#include <vector>

#include "dre/environment.hpp"
#include "dre/geometry.hpp"
#include "dre/reachability.hpp"

namespace dre {

// Canonical local terrace over an ambient box: `sites` is exactly the lower
// boundary of the solid-above `upset` (every member has an in-box lower
// neighbour outside the up-set). All operations preserve canonical form and
// return new values.
struct QTerrace {
  Box box;
  SiteMask sites;
  SiteMask upset;

  int dim() const { return box.dim(); }
  bool empty() const { return sites.none(); }
};

// Lower boundary {x in G : some x - e_i lies in Q \ G} of a Q-solid-above set.
// Rejects inputs that are not solid above.
QTerrace lower_boundary(const SiteMask& g);

// As above without the solidity check (internal fast path; caller guarantees).
QTerrace lower_boundary_unchecked(const SiteMask& g);

// Terrace of the forward cluster of x: nullopt when the cluster fills the box
// (the box's lower corner is reached). Otherwise the result is canonical,
// carried by Omega_1 sites, and its up-set equals the cluster.
// Requires step sets with E_+ inside both E and F, so clusters are solid above.
std::optional<QTerrace> extract_terrace(const ConfigGrid& g, const Point& x);
std::optional<QTerrace> extract_terrace(const ConfigGrid& g, const Point& x,
                                        ClusterScratch& scratch);

// ---- corners and the h-set --------------------------------------------------

// z is a corner of the up-set: z in G with every in-box lower neighbour
// outside G (out-of-box neighbours count as absent).
bool is_upset_corner(const QTerrace& t, const Point& z);

// x is in the h-set: x in the terrace and each x + e_i is either in the
// terrace or outside the box. These sites obstruct corner-freeness.
bool in_h_set(const QTerrace& t, const Point& x);

struct CornerSet {
  std::vector<Point> corners;
  std::vector<Point> h_set;
};
CornerSet corners_of(const QTerrace& t);

// Push up the corner z: remove it from the up-set and re-extract the lower
// boundary. The terrace changes by losing z and gaining the in-box sites
// z + e_j; when z is in the h-set the result is exactly sites \ {z}.
QTerrace push_up(const QTerrace& t, const Point& z);

// ---- window stabilization -----------------------------------------------------

// Push up corners lying in the relative interior of `window` but outside the
// protected set until none remain, lexicographically smallest first.
// The result agrees with the input off the window, its up-set is the minimal
// solid-above set that agrees with the old up-set off the window interior and
// contains the protected sites, and every terrace site in the window sits
// above a protected or window-boundary site of the old up-set.
QTerrace stabilize(const QTerrace& t, const Box& window, const SiteMask& protected_sites);

// Delete h-set corners outside apex_+ that lie in the window interior:
// repeatedly locate such a site, descend to a corner along lower neighbours
// that stay in the h-set, and push it up (removing exactly that site).
// Afterwards no h-site outside apex_+ remains in the window interior.
// A descent that leaves the window interior signals a broken invariant.
QTerrace delete_h_corners(const QTerrace& t, const Box& window, const Point& apex);

// ---- paths -------------------------------------------------------------------

// Path between two terrace sites staying in the terrace, with increments
// e_i, -e_k, or e_i - e_k, every coordinate monotone, l1 distance from x
// strictly increasing and to y strictly decreasing.
LatticePath terrace_path(const QTerrace& t, const Point& x, const Point& y);

// Self-avoiding nearest-neighbour path avoiding the terrace, for x, y both
// outside the up-set or both strictly inside it. Stays in `window`.
LatticePath complement_path(const QTerrace& t, const Box& window, const Point& x, const Point& y);

// Grouped descending path: from x in the terrace, walk -e_0 runs then -e_1
// runs, etc., staying in the terrace and the window, ending on the window's
// relative boundary. Requires no terrace corners in the window interior
// below x; if the walk gets stuck, the blocking corner is reported instead.
struct DescendingPath {
  LatticePath path;
  bool reached_boundary = false;
  std::optional<Point> blocking_corner;
};
DescendingPath special_descending_path(const QTerrace& t, const Box& window, const Point& x);

// ---- internal builder ---------------------------------------------------------

// Mutable terrace state for push-heavy loops; public operations wrap this.
class TerraceWorkspace {
public:
  explicit TerraceWorkspace(const QTerrace& t);

  const Box& box() const { return box_; }
  const SiteMask& sites() const { return sites_; }
  const SiteMask& upset() const { return upset_; }
  QTerrace snapshot() const { return QTerrace{box_, sites_, upset_}; }

  bool in_sites(int64_t i) const { return sites_.test(i); }
  bool in_upset(int64_t i) const { return upset_.test(i); }
  bool is_corner(int64_t i) const;
  bool in_h(int64_t i) const;

  // Removes index z from the up-set, adds the in-box upper neighbours of z to
  // the terrace. Caller must pass a corner.
  void push(int64_t z);

  int64_t upset_count() const { return upset_.count(); }

  // Stabilization pass over a window-interior mask: pushes corners outside
  // `protect`, smallest index first; an optional stop index aborts the pass
  // right before that site would be pushed. Returns pushes performed.
  struct StabilizeOutcome {
    int64_t pushes = 0;
    bool stopped = false;
  };
  StabilizeOutcome stabilize_pass(const SiteMask& window_interior, const SiteMask& protect,
                                  int64_t stop_index = -1);

  // One h-deletion pass: scans `window_interior` for h-sites outside apex_+,
  // descends to a corner and pushes it. Returns deletions performed.
  int64_t delete_h_pass(const SiteMask& window_interior, const Point& apex);

private:
  Box box_;
  BoxIndexer idx_;
  SiteMask sites_;
  SiteMask upset_;
};

}  // namespace dre
